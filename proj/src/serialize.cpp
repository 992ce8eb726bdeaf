// Copyright 2026 The Composer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "composer/serialize.hpp"

#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "composer/errors.hpp"

namespace composer {

using Json = nlohmann::ordered_json;

namespace {

constexpr const char *kInts = "composer-ints-v1";
constexpr const char *kPool = "composer-pool-v1";
constexpr const char *kT2 = "composer-t2-v1";
constexpr const char *kSkel = "composer-skel-v1";
constexpr const char *kDial = "composer-dial-v1";
constexpr const char *kReport = "composer-report-v1";

Json parse_doc(const std::string &text, const char *format) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception &e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("format") || j["format"] != format)
    throw ParseError(std::string("expected a ") + format + " document");
  return j;
}

// wraps nlohmann access errors
template <class F>
auto guarded(const char *what, F &&f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception &e) {
    throw ParseError(std::string("malformed ") + what + ": " + e.what());
  }
}

Json mat_json(const RMat &m) {
  std::vector<double> data;
  data.reserve(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

RMat mat_from(const Json &j) {
  const Eigen::Index r = j.at("rows").get<Eigen::Index>(), c = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (r < 0 || c < 0 || static_cast<Eigen::Index>(data.size()) != r * c)
    throw ParseError("matrix data does not match its shape");
  RMat m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index k = 0; k < c; ++k) m(i, k) = data[i * c + k];
  return m;
}

Json rvec_json(const RVec &v) { return std::vector<double>(v.data(), v.data() + v.size()); }

RVec rvec_from(const Json &j) {
  const auto d = j.get<std::vector<double>>();
  return Eigen::Map<const RVec>(d.data(), static_cast<Eigen::Index>(d.size()));
}

Json cvec_json(const CVec &v) {
  std::vector<double> re, im;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return Json{{"re", re}, {"im", im}};
}

CVec cvec_from(const Json &j) {
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.at("im").get<std::vector<double>>();
  if (re.size() != im.size()) throw ParseError("complex vector parts differ in length");
  CVec v(static_cast<Eigen::Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i) v(i) = cplx(re[i], im[i]);
  return v;
}

LadderKind ladder_kind_from(const std::string &s) {
  for (auto k : {LadderKind::Bilinear, LadderKind::PairExcitation, LadderKind::ProjectedQuadratic})
    if (s == to_string(k)) return k;
  throw ParseError("unknown ladder kind " + s);
}

Json ladder_json(const RankOneLadder &l) {
  Json j{{"address", l.address}, {"kind", to_string(l.kind)}, {"coefficient", l.coefficient}};
  if (l.kind == LadderKind::Bilinear) {
    j["spin_paired"] = l.spin_paired;
    j["u"] = cvec_json(l.u);
    j["v"] = cvec_json(l.v);
  } else if (l.kind == LadderKind::PairExcitation) {
    j["x"] = cvec_json(l.x);
    j["y"] = cvec_json(l.y);
    j["r"] = cvec_json(l.r);
    j["s"] = cvec_json(l.s);
  } else {
    j["channel"] = l.channel;
  }
  return j;
}

RankOneLadder ladder_from(const Json &j) {
  RankOneLadder l;
  l.address = j.at("address").get<int>();
  l.kind = ladder_kind_from(j.at("kind").get<std::string>());
  l.coefficient = j.at("coefficient").get<double>();
  if (l.kind == LadderKind::Bilinear) {
    l.spin_paired = j.at("spin_paired").get<bool>();
    l.u = cvec_from(j.at("u"));
    l.v = cvec_from(j.at("v"));
  } else if (l.kind == LadderKind::PairExcitation) {
    l.x = cvec_from(j.at("x"));
    l.y = cvec_from(j.at("y"));
    l.r = cvec_from(j.at("r"));
    l.s = cvec_from(j.at("s"));
  } else {
    l.channel = j.at("channel").get<int>();
  }
  return l;
}

Json pools_object(const PoolBundle &p) {
  Json ham{{"n_so", p.ham.n_so}, {"n_elec", p.ham.n_elec}, {"e_nn", p.ham.e_nn},
           {"alpha", p.ham.alpha}};
  auto &ob = ham["one_body"] = Json::array();
  for (const auto &l : p.ham.one_body) ob.push_back(ladder_json(l));
  auto &ch = ham["channels"] = Json::array();
  for (const auto &c : p.ham.channels)
    ch.push_back({{"index", c.index},
                  {"gamma", c.gamma},
                  {"factor", mat_json(c.factor)},
                  {"eigvals", rvec_json(c.eigvals)},
                  {"rotation", mat_json(c.rotation)}});
  Json gen{{"n_so", p.gen.n_so}, {"n_occ", p.gen.n_occ}, {"alpha_bar", p.gen.alpha_bar}};
  auto &ls = gen["ladders"] = Json::array();
  for (const auto &l : p.gen.ladders) ls.push_back(ladder_json(l));
  return Json{{"hamiltonian", ham}, {"generator", gen}};
}

PoolBundle pools_from_object(const Json &j) {
  PoolBundle p;
  const Json &h = j.at("hamiltonian");
  p.ham.n_so = h.at("n_so").get<int>();
  p.ham.n_elec = h.at("n_elec").get<int>();
  p.ham.e_nn = h.at("e_nn").get<double>();
  p.ham.alpha = h.at("alpha").get<double>();
  for (const auto &l : h.at("one_body")) p.ham.one_body.push_back(ladder_from(l));
  for (const auto &c : h.at("channels")) {
    CholeskyChannel ch;
    ch.index = c.at("index").get<int>();
    ch.gamma = c.at("gamma").get<double>();
    ch.factor = mat_from(c.at("factor"));
    ch.eigvals = rvec_from(c.at("eigvals"));
    ch.rotation = mat_from(c.at("rotation"));
    if (ch.rotation.cols() != ch.eigvals.size()) throw ParseError("channel rank mismatch");
    p.ham.channels.push_back(std::move(ch));
  }
  const Json &g = j.at("generator");
  p.gen.n_so = g.at("n_so").get<int>();
  p.gen.n_occ = g.at("n_occ").get<int>();
  p.gen.alpha_bar = g.at("alpha_bar").get<double>();
  for (const auto &l : g.at("ladders")) p.gen.ladders.push_back(ladder_from(l));
  return p;
}

GateKind gate_kind_from(const std::string &s) {
  for (auto k : {GateKind::Givens, GateKind::PairGivens, GateKind::Phase, GateKind::X, GateKind::H,
                 GateKind::Cnot, GateKind::Ry, GateKind::ZeroReflect, GateKind::GlobalPhase})
    if (s == to_string(k)) return k;
  throw ParseError("unknown gate kind " + s);
}

Json gate_json(const Gate &g) {
  Json c = Json::array();
  for (const auto &[q, v] : g.controls) c.push_back({q, v});
  Json j{{"kind", to_string(g.kind)}, {"q", g.qubits}, {"c", c}};
  if (!g.slot.empty()) j["slot"] = g.slot;
  if (g.inverse) j["inv"] = true;
  if (g.fixed != 0.0) j["fixed"] = g.fixed;
  return j;
}

Gate gate_from(const Json &j) {
  Gate g;
  g.kind = gate_kind_from(j.at("kind").get<std::string>());
  g.qubits = j.at("q").get<std::vector<int>>();
  for (const auto &c : j.at("c")) g.controls.emplace_back(c.at(0).get<int>(), c.at(1).get<int>());
  g.slot = j.value("slot", std::string());
  g.inverse = j.value("inv", false);
  g.fixed = j.value("fixed", 0.0);
  return g;
}

Json gates_json(const std::vector<Gate> &gs) {
  Json a = Json::array();
  for (const auto &g : gs) a.push_back(gate_json(g));
  return a;
}

std::vector<Gate> gates_from(const Json &j) {
  std::vector<Gate> out;
  for (const auto &g : j) out.push_back(gate_from(g));
  return out;
}

Json adaptors_json(const std::vector<Adaptor> &as) {
  Json a = Json::array();
  for (const auto &ad : as)
    a.push_back({{"block", std::string(1, ad.block)},
                 {"address", ad.address},
                 {"kind", ad.kind},
                 {"pivots", ad.pivots},
                 {"gates", gates_json(ad.gates)}});
  return a;
}

std::vector<Adaptor> adaptors_from(const Json &j) {
  std::vector<Adaptor> out;
  for (const auto &a : j) {
    Adaptor ad;
    const auto b = a.at("block").get<std::string>();
    if (b.size() != 1) throw ParseError("adaptor block tag");
    ad.block = b[0];
    ad.address = a.at("address").get<int>();
    ad.kind = a.at("kind").get<std::string>();
    ad.pivots = a.at("pivots").get<std::vector<int>>();
    ad.gates = gates_from(a.at("gates"));
    out.push_back(std::move(ad));
  }
  return out;
}

}  // namespace

std::string ints_to_json(const IntegralSet &ints) {
  Json j{{"format", kInts},
         {"n_spatial", ints.n_spatial},
         {"n_so", ints.n_so},
         {"n_elec", ints.n_elec},
         {"e_nn", ints.e_nn},
         {"h", mat_json(ints.h)},
         {"eri", ints.eri},
         {"orb_energies", rvec_json(ints.orb_energies)}};
  return j.dump(1);
}

IntegralSet ints_from_json(const std::string &text) {
  const Json j = parse_doc(text, kInts);
  return guarded("integral document", [&] {
    IntegralSet s;
    s.n_spatial = j.at("n_spatial").get<int>();
    s.n_so = j.at("n_so").get<int>();
    s.n_elec = j.at("n_elec").get<int>();
    s.e_nn = j.at("e_nn").get<double>();
    s.h = mat_from(j.at("h"));
    s.eri = j.at("eri").get<std::vector<double>>();
    s.orb_energies = rvec_from(j.at("orb_energies"));
    const std::size_t n = static_cast<std::size_t>(s.n_so);
    if (s.h.rows() != s.n_so || s.h.cols() != s.n_so || s.eri.size() != n * n * n * n)
      throw ParseError("integral arrays do not match n_so");
    return s;
  });
}

std::string pool_to_json(const PoolBundle &pools) {
  Json j{{"format", kPool}};
  j.update(pools_object(pools));
  return j.dump(1);
}

PoolBundle pool_from_json(const std::string &text) {
  const Json j = parse_doc(text, kPool);
  return guarded("pool document", [&] { return pools_from_object(j); });
}

std::string t2_to_json(const T2Tensor &t2) {
  std::vector<double> values;
  for (Eigen::Index i = 0; i < t2.amps.rows(); ++i)
    for (Eigen::Index k = 0; k < t2.amps.cols(); ++k) values.push_back(t2.amps(i, k));
  Json j{{"format", kT2},
         {"n_occ", t2.n_occ},
         {"n_virt", t2.n_virt},
         {"convention", "rows a<b over virtuals, columns i<j over occupieds, lexicographic"},
         {"shape", {t2.amps.rows(), t2.amps.cols()}},
         {"values", values}};
  return j.dump(1);
}

T2Tensor t2_from_json(const std::string &text) {
  const Json j = parse_doc(text, kT2);
  return guarded("t2 document", [&] {
    T2Tensor t;
    t.n_occ = j.at("n_occ").get<int>();
    t.n_virt = j.at("n_virt").get<int>();
    const auto shape = j.at("shape").get<std::vector<Eigen::Index>>();
    const auto values = j.at("values").get<std::vector<double>>();
    if (shape.size() != 2 || shape[0] != n_pairs(t.n_virt) || shape[1] != n_pairs(t.n_occ) ||
        static_cast<Eigen::Index>(values.size()) != shape[0] * shape[1])
      throw ShapeError("t2 shape does not match the pair spaces");
    t.amps.resize(shape[0], shape[1]);
    for (Eigen::Index i = 0; i < shape[0]; ++i)
      for (Eigen::Index k = 0; k < shape[1]; ++k) t.amps(i, k) = values[i * shape[1] + k];
    return t;
  });
}

std::string skeleton_to_json(const CircuitSkeleton &s) {
  const auto &l = s.layout;
  Json piv_g = Json::array();
  for (const auto &[v, o] : s.pivots.generator) piv_g.push_back({v, o});
  Json j{{"format", kSkel},
         {"fingerprint", s.fingerprint},
         {"layout",
          {{"n", l.n},
           {"n_occ", l.n_occ},
           {"ell_one_body", l.ell_one_body},
           {"spin_paired", l.spin_paired},
           {"ell_channels", l.ell_channels},
           {"ell_sigma", l.ell_sigma},
           {"channel_rank_max", l.channel_rank_max}}},
         {"n_system", s.n_system},
         {"selector_width", s.selector_width},
         {"selector_width_h", s.selector_width_h},
         {"selector_width_sigma", s.selector_width_sigma},
         {"workspace_width", s.workspace_width},
         {"channel_index_width", s.channel_index_width},
         {"qsp_degree", s.qsp_degree},
         {"alpha_bar", s.alpha_bar},
         {"connectivity", s.connectivity.tag()},
         {"pivots", {{"one_body", s.pivots.one_body}, {"generator", piv_g}}},
         {"h_prep", gates_json(s.h_prep)},
         {"h_select", adaptors_json(s.h_select)},
         {"g_prep", gates_json(s.g_prep)},
         {"g_select", adaptors_json(s.g_select)},
         {"prep_slots", s.prep_slots},
         {"qsp_slots", s.qsp_slots}};
  return j.dump(1);
}

CircuitSkeleton skeleton_from_json(const std::string &text) {
  const Json j = parse_doc(text, kSkel);
  CircuitSkeleton s = guarded("skeleton document", [&] {
    CircuitSkeleton s;
    const Json &l = j.at("layout");
    s.layout.n = l.at("n").get<int>();
    s.layout.n_occ = l.at("n_occ").get<int>();
    s.layout.ell_one_body = l.at("ell_one_body").get<int>();
    s.layout.spin_paired = l.at("spin_paired").get<bool>();
    s.layout.ell_channels = l.at("ell_channels").get<int>();
    s.layout.ell_sigma = l.at("ell_sigma").get<int>();
    s.layout.channel_rank_max = l.at("channel_rank_max").get<int>();
    s.n_system = j.at("n_system").get<int>();
    s.selector_width = j.at("selector_width").get<int>();
    s.selector_width_h = j.at("selector_width_h").get<int>();
    s.selector_width_sigma = j.at("selector_width_sigma").get<int>();
    s.workspace_width = j.at("workspace_width").get<int>();
    s.channel_index_width = j.at("channel_index_width").get<int>();
    s.qsp_degree = j.at("qsp_degree").get<int>();
    s.alpha_bar = j.at("alpha_bar").get<double>();
    s.connectivity = Connectivity::parse(j.at("connectivity").get<std::string>());
    s.pivots.one_body = j.at("pivots").at("one_body").get<std::vector<int>>();
    for (const auto &p : j.at("pivots").at("generator"))
      s.pivots.generator.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
    s.h_prep = gates_from(j.at("h_prep"));
    s.h_select = adaptors_from(j.at("h_select"));
    s.g_prep = gates_from(j.at("g_prep"));
    s.g_select = adaptors_from(j.at("g_select"));
    s.prep_slots = j.at("prep_slots").get<std::vector<std::string>>();
    s.qsp_slots = j.at("qsp_slots").get<std::vector<std::string>>();
    s.fingerprint = j.at("fingerprint").get<std::string>();
    return s;
  });
  if (fabric_fingerprint(s) != s.fingerprint)
    throw TopologyError("skeleton fingerprint does not match its gate stream");
  return s;
}

std::string dial_to_json(const DialSheet &d, const PoolBundle *pools) {
  Json j{{"format", kDial},
         {"skeleton_fingerprint", d.skeleton_fingerprint},
         {"mask", {{"id", d.mask_id}, {"indices", d.mask_indices}}},
         {"alpha", d.alpha},
         {"alpha_bar", d.alpha_bar},
         {"ham_coeffs", d.ham_coeffs},
         {"gen_coeffs", d.gen_coeffs},
         {"angles", d.angle_bindings},
         {"phases", d.phase_bindings}};
  if (pools) j["pools"] = pools_object(*pools);
  return j.dump(1);
}

DialFile dial_from_json(const std::string &text) {
  const Json j = parse_doc(text, kDial);
  return guarded("dial document", [&] {
    DialFile f;
    auto &d = f.sheet;
    d.skeleton_fingerprint = j.at("skeleton_fingerprint").get<std::string>();
    d.mask_id = j.at("mask").at("id").get<std::string>();
    d.mask_indices = j.at("mask").at("indices").get<std::vector<int>>();
    d.alpha = j.at("alpha").get<double>();
    d.alpha_bar = j.at("alpha_bar").get<double>();
    d.ham_coeffs = j.at("ham_coeffs").get<std::vector<double>>();
    d.gen_coeffs = j.at("gen_coeffs").get<std::vector<double>>();
    d.angle_bindings = j.at("angles").get<std::map<std::string, double>>();
    d.phase_bindings = j.at("phases").get<std::map<std::string, double>>();
    if (j.contains("pools")) f.pools = pools_from_object(j.at("pools"));
    return f;
  });
}

std::string report_to_json(const BlockEncodingReport &r) {
  Json j{{"format", kReport},
         {"tag", r.tag},
         {"alpha", r.alpha},
         {"ancillas", r.ancillas},
         {"measured_error", r.measured_error},
         {"sector", r.sector},
         {"model_space", r.model_space},
         {"eps_lcu_bound", r.eps_lcu_bound},
         {"branch_errors", r.branch_errors},
         {"eps_prime", r.eps_prime},
         {"eps_dprime", r.eps_dprime},
         {"eps_tprime", r.eps_tprime},
         {"flags", r.flags}};
  return j.dump(1);
}

std::string overlap_curve_csv(const OverlapCurve &c) {
  std::ostringstream os;
  os << "r,ov,w\n" << std::setprecision(17);
  for (std::size_t k = 0; k < c.ranks.size(); ++k)
    os << c.ranks[k] << ',' << c.ov[k] << ',' << c.weights[k] << '\n';
  return os.str();
}

std::string read_text_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
}

}  // namespace composer
