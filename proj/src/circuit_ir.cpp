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

#include "composer/circuit_ir.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "composer/errors.hpp"
#include "composer/ladders.hpp"
#include "composer/qsp.hpp"

namespace composer {

namespace {

using Controls = std::vector<std::pair<int, int>>;

Controls value_controls(int base, int width, std::uint64_t value) {
  Controls c;
  for (int b = 0; b < width; ++b) c.emplace_back(base + b, static_cast<int>((value >> b) & 1));
  return c;
}

Controls join(Controls a, const Controls &b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Gate make(GateKind k, std::vector<int> q, std::string slot = {}, double fixed = 0.0) {
  Gate g;
  g.kind = k;
  g.qubits = std::move(q);
  g.slot = std::move(slot);
  g.fixed = fixed;
  return g;
}

std::vector<Gate> inverse_of(const std::vector<Gate> &seq) {
  std::vector<Gate> out(seq.rbegin(), seq.rend());
  for (auto &g : out) g.inverse = !g.inverse;
  return out;
}

void append(std::vector<Gate> &out, const std::vector<Gate> &seq, const Controls &extra) {
  for (Gate g : seq) {
    g.controls = join(g.controls, extra);
    out.push_back(std::move(g));
  }
}

// RY tree on [base, base + width); node v of level l targets bit width-1-l
std::vector<Gate> tree_gates(const std::string &prefix, int base, int width) {
  std::vector<Gate> out;
  for (int l = 0; l < width; ++l) {
    const int tb = width - 1 - l;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << l); ++v) {
      Gate g = make(GateKind::Ry, {base + tb}, prefix + "/" + std::to_string(l) + "/" +
                                                   std::to_string(v));
      g.controls = value_controls(base + tb + 1, l, v);
      out.push_back(std::move(g));
    }
  }
  return out;
}

std::vector<int> ladder_order(const std::vector<int> &modes, int pivot_local) {
  std::vector<int> o;
  for (int k = 0; k < static_cast<int>(modes.size()); ++k)
    if (k != pivot_local) o.push_back(modes[k]);
  return o;
}

// number-conserving one-electron ladder: Givens sweep then phase layer
std::vector<Gate> nc_ladder_gates(const std::string &prefix, const std::vector<int> &modes,
                                  int pivot_local) {
  const int piv = modes.at(pivot_local);
  const auto order = ladder_order(modes, pivot_local);
  std::vector<Gate> out;
  for (std::size_t k = 0; k < order.size(); ++k)
    out.push_back(make(GateKind::Givens, {order[k], piv}, prefix + "/g" + std::to_string(k)));
  for (std::size_t k = 0; k < order.size(); ++k)
    out.push_back(make(GateKind::Phase, {order[k]}, prefix + "/p" + std::to_string(k)));
  return out;
}

std::vector<std::pair<int, int>> mode_pairs(int lo, int hi) {
  std::vector<std::pair<int, int>> p;
  for (int a = lo; a < hi; ++a)
    for (int b = a + 1; b < hi; ++b) p.emplace_back(a, b);
  return p;
}

// prep-form pair ladder over modes [lo, hi)
std::vector<Gate> pair_ladder_gates(const std::string &prefix, int lo, int hi, int pivot_local) {
  const auto pairs = mode_pairs(lo, hi);
  const auto [r, s] = pairs.at(pivot_local);
  std::vector<Gate> out{make(GateKind::X, {r}), make(GateKind::X, {s})};
  int k = 0;
  for (int j = 0; j < static_cast<int>(pairs.size()); ++j) {
    if (j == pivot_local) continue;
    out.push_back(make(GateKind::PairGivens, {pairs[j].first, pairs[j].second, r, s},
                       prefix + "/" + std::to_string(k++)));
  }
  return out;
}

// orbital rotation for the fixed n x n nearest-neighbour pattern
std::vector<Gate> frame_gates(const std::string &prefix, int n) {
  std::vector<std::pair<int, int>> rots;
  for (int j = 0; j + 1 < n; ++j)
    for (int i = n - 1; i > j; --i) rots.emplace_back(i - 1, i);
  std::vector<Gate> out{make(GateKind::Phase, {n - 1}, prefix + "/flip")};
  for (int k = static_cast<int>(rots.size()); k-- > 0;)
    out.push_back(make(GateKind::Givens, {rots[k].second, rots[k].first},
                       prefix + "/" + std::to_string(k)));
  return out;
}

// frame (PREP^H SELECT PREP) frame^H with flag qubit n and index register above
std::vector<Gate> number_sum_gates(const std::string &prefix, int n,
                                   const std::vector<Gate> &frame,
                                   const std::vector<int> &flag_modes, int index_width) {
  const int f = n;
  std::vector<Gate> out = inverse_of(frame);
  const auto tree = tree_gates(prefix + "/idx", n + 1, index_width);
  out.insert(out.end(), tree.begin(), tree.end());
  for (std::size_t k = 0; k < flag_modes.size(); ++k) {
    const Controls at = value_controls(n + 1, index_width, k);
    Gate cx = make(GateKind::Cnot, {flag_modes[k], f});
    Gate x = make(GateKind::X, {f});
    Gate sg = make(GateKind::GlobalPhase, {}, prefix + "/sign" + std::to_string(k));
    for (Gate *g : {&cx, &x, &sg}) g->controls = at;
    out.push_back(cx);
    out.push_back(x);
    out.push_back(sg);
  }
  const auto tinv = inverse_of(tree);
  out.insert(out.end(), tinv.begin(), tinv.end());
  out.insert(out.end(), frame.begin(), frame.end());
  return out;
}

std::vector<int> range_modes(int lo, int hi, int step = 1) {
  std::vector<int> m;
  for (int k = lo; k < hi; k += step) m.push_back(k);
  return m;
}

bool needs_angle(GateKind k) {
  return k == GateKind::Givens || k == GateKind::PairGivens || k == GateKind::Ry;
}
bool needs_phase(GateKind k) {
  return k == GateKind::PairGivens || k == GateKind::Phase || k == GateKind::GlobalPhase;
}

template <typename F>
void for_each_gate(const CircuitSkeleton &s, F &&f) {
  for (const auto &g : s.h_prep) f(g);
  for (const auto &a : s.h_select)
    for (const auto &g : a.gates) f(g);
  for (const auto &g : s.g_prep) f(g);
  for (const auto &a : s.g_select)
    for (const auto &g : a.gates) f(g);
}

std::string sha256_hex(const std::string &bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX *ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, md, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw Error("SHA-256 digest failed");
  }
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i)
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

void canonical_gate(std::ostream &os, const Gate &g) {
  std::vector<int> q = g.qubits;
  std::sort(q.begin(), q.end());
  auto c = g.controls;
  std::sort(c.begin(), c.end());
  os << static_cast<int>(g.kind) << '|';
  for (int x : q) os << x << ',';
  os << '|';
  for (const auto &[qb, v] : c) os << qb << ':' << v << ',';
  os << '|' << g.slot << '|' << (g.inverse ? 1 : 0) << '\n';
}

}  // namespace

// ---- connectivity ----------------------------------------------------------

std::string Connectivity::tag() const {
  switch (kind) {
    case Kind::AllToAll:
      return "full";
    case Kind::LinearHeavyHex:
      return "linear:" + std::to_string(param);
    case Kind::Grid:
      return "grid:" + std::to_string(param);
  }
  return "full";
}

Connectivity Connectivity::parse(const std::string &s) {
  Connectivity c;
  if (s == "full" || s == "all-to-all") return c;
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw ValidationError("bad connectivity '" + s + "'");
  const std::string head = s.substr(0, colon);
  int p = 0;
  try {
    std::size_t used = 0;
    p = std::stoi(s.substr(colon + 1), &used);
    if (used != s.size() - colon - 1) throw std::invalid_argument(s);
  } catch (const std::exception &) {
    throw ValidationError("bad connectivity parameter in '" + s + "'");
  }
  if (head == "linear" || head == "heavy-hex") {
    if (p < 1) throw ValidationError("linear connectivity needs d_g >= 1");
    c.kind = Kind::LinearHeavyHex;
  } else if (head == "grid") {
    if (p < 2) throw ValidationError("grid connectivity needs L >= 2");
    c.kind = Kind::Grid;
  } else {
    throw ValidationError("unknown connectivity '" + head + "'");
  }
  c.param = p;
  return c;
}

const char *to_string(GateKind k) {
  switch (k) {
    case GateKind::Givens:
      return "GIVENS";
    case GateKind::PairGivens:
      return "PAIR_GIVENS";
    case GateKind::Phase:
      return "PHASE";
    case GateKind::X:
      return "X";
    case GateKind::H:
      return "H";
    case GateKind::Cnot:
      return "CNOT";
    case GateKind::Ry:
      return "RY";
    case GateKind::ZeroReflect:
      return "ZERO_REFLECT";
    case GateKind::GlobalPhase:
      return "GPHASE";
  }
  return "?";
}

// ---- compile ---------------------------------------------------------------

SkeletonLayout layout_of(const HamiltonianPool &ham, const GeneratorPool &gen) {
  SkeletonLayout l;
  l.n = ham.n_so;
  l.n_occ = gen.n_occ;
  l.ell_one_body = static_cast<int>(ham.one_body.size());
  l.spin_paired = true;
  for (const auto &b : ham.one_body) l.spin_paired = l.spin_paired && b.spin_paired;
  l.ell_channels = static_cast<int>(ham.channels.size());
  l.ell_sigma = gen.ell_sigma();
  l.channel_rank_max = ham.n_so;
  return l;
}

std::vector<std::string> CircuitSkeleton::slots() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for_each_gate(*this, [&](const Gate &g) {
    if (!g.slot.empty() && seen.insert(g.slot).second) out.push_back(g.slot);
  });
  for (const auto &s : qsp_slots)
    if (seen.insert(s).second) out.push_back(s);
  return out;
}

CircuitSkeleton compile_skeleton(const SkeletonLayout &layout, const PivotTable &pivots,
                                 const Connectivity &conn, int qsp_degree, double alpha_bar,
                                 int selector_width) {
  const int n = layout.n;
  if (n < 1) throw ValidationError("skeleton needs at least one system qubit");
  if (layout.ell_H() < 1) throw ValidationError("Hamiltonian pool size must be positive");
  if (layout.ell_sigma < 0 || qsp_degree < 0) throw ValidationError("negative size");
  if (layout.spin_paired && layout.ell_one_body > 0 && n % 2)
    throw ValidationError("spin-paired one-body adaptors need an even register");
  if (static_cast<int>(pivots.one_body.size()) != layout.ell_one_body ||
      static_cast<int>(pivots.generator.size()) != layout.ell_sigma)
    throw ValidationError("pivot table does not cover every adaptor");
  const int nv = n - layout.n_occ;
  if (layout.ell_sigma > 0 && (layout.n_occ < 2 || nv < 2))
    throw ValidationError("pair adaptors need two occupied and two virtual modes");

  CircuitSkeleton sk;
  sk.layout = layout;
  if (sk.layout.channel_rank_max < 0) sk.layout.channel_rank_max = n;
  const int rmax = sk.layout.channel_rank_max;
  if (rmax < 1 || rmax > n) throw ValidationError("channel rank bound outside 1..n");
  sk.n_system = n;
  sk.qsp_degree = qsp_degree;
  sk.alpha_bar = alpha_bar;
  sk.connectivity = conn;
  sk.pivots = pivots;
  sk.selector_width_h = ceil_log2(static_cast<std::uint64_t>(layout.ell_H()));
  sk.selector_width_sigma = ceil_log2(static_cast<std::uint64_t>(layout.ell_sigma + 1));
  const int need = std::max(sk.selector_width_h, sk.selector_width_sigma);
  sk.selector_width = selector_width < 0 ? need : selector_width;
  if (sk.selector_width < need || sk.selector_width > 24)
    throw CapacityError("selector register of width " + std::to_string(sk.selector_width) +
                        " cannot address the pools (need " + std::to_string(need) + ")");
  sk.channel_index_width = ceil_log2(static_cast<std::uint64_t>(rmax));
  int t = 2;
  if (layout.ell_one_body > 0) t = std::max(t, layout.spin_paired ? 2 : 1);
  if (layout.ell_channels > 0) t = std::max(t, sk.channel_index_width + 2);
  sk.workspace_width = t;
  const int w = sk.selector_width;
  const int sel = n + t;

  // Hamiltonian block
  sk.h_prep = tree_gates("H/prep", sel, w);
  for (int s = 0; s < layout.ell_H(); ++s) {
    Adaptor a;
    a.block = 'H';
    a.address = s;
    const std::string pre = "H/" + std::to_string(s);
    std::vector<Gate> body;
    if (s < layout.ell_one_body) {
      a.kind = "one-body";
      const int piv = pivots.one_body[s];
      if (layout.spin_paired) {
        if (piv < 0 || piv >= n / 2) throw ValidationError("one-body pivot out of range");
        auto fa = nc_ladder_gates(pre + "/a", range_modes(0, n, 2), piv);
        auto fb = nc_ladder_gates(pre + "/b", range_modes(1, n, 2), piv);
        // frame = U_a U_b: U_b acts first
        std::vector<Gate> frame = fb;
        frame.insert(frame.end(), fa.begin(), fa.end());
        body = number_sum_gates(pre, n, frame, {2 * piv, 2 * piv + 1}, 1);
        a.pivots = {2 * piv, 2 * piv + 1};
      } else {
        if (piv < 0 || piv >= n) throw ValidationError("one-body pivot out of range");
        body = number_sum_gates(pre, n, nc_ladder_gates(pre + "/a", range_modes(0, n), piv),
                                {piv}, 0);
        a.pivots = {piv};
      }
    } else {
      a.kind = "channel";
      const int iw = sk.channel_index_width;
      const auto lin = number_sum_gates(pre, n, frame_gates(pre + "/f", n),
                                        range_modes(0, rmax), iw);
      const int signal = n + 1 + iw;
      std::vector<int> anc = range_modes(n, n + 1 + iw);
      // hadamard_mix(W R W, I) with R = 2 Pi_0 - I on the linear ancillas
      std::vector<Gate> wrw = lin;
      wrw.push_back(make(GateKind::ZeroReflect, anc));
      wrw.push_back(make(GateKind::GlobalPhase, {}, {}, M_PI));
      wrw.insert(wrw.end(), lin.begin(), lin.end());
      body.push_back(make(GateKind::H, {signal}));
      append(body, wrw, {{signal, 0}});
      body.push_back(make(GateKind::H, {signal}));
    }
    body.push_back(make(GateKind::GlobalPhase, {}, pre + "/coef"));
    append(a.gates, body, value_controls(sel, w, s));
    sk.h_select.push_back(std::move(a));
  }

  // generator block: dyad ancilla at n, Hadamard-mix qubit at n + 1
  sk.g_prep = tree_gates("G/prep", sel, w);
  {
    Adaptor null;
    null.block = 'G';
    null.address = 0;
    null.kind = "null";
    append(null.gates, {make(GateKind::X, {n})}, value_controls(sel, w, 0));
    sk.g_select.push_back(std::move(null));
  }
  const int anc = n, c = n + 1;
  for (int s = 1; s <= layout.ell_sigma; ++s) {
    const auto [pu, pv] = pivots.generator[s - 1];
    if (pu < 0 || pu >= n_pairs(nv) || pv < 0 || pv >= n_pairs(layout.n_occ))
      throw ValidationError("generator pivot out of range");
    Adaptor a;
    a.block = 'G';
    a.address = s;
    a.kind = "pair";
    a.pivots = {pu, pv};
    const std::string pre = "G/" + std::to_string(s);
    const auto uu = pair_ladder_gates(pre + "/u", layout.n_occ, n, pu);
    const auto uv = pair_ladder_gates(pre + "/v", 0, layout.n_occ, pv);
    std::vector<Gate> vac{make(GateKind::H, {anc})};
    append(vac, {make(GateKind::ZeroReflect, range_modes(0, n)),
                 make(GateKind::GlobalPhase, {}, {}, M_PI)},
           {{anc, 1}});
    vac.push_back(make(GateKind::H, {anc}));
    const Gate ph = make(GateKind::GlobalPhase, {}, pre + "/phase");

    // c = 0: i D = i e^{i dg} U_u V U_v^H
    std::vector<Gate> d0 = inverse_of(uv);
    d0.insert(d0.end(), vac.begin(), vac.end());
    d0.insert(d0.end(), uu.begin(), uu.end());
    d0.push_back(ph);
    // c = 1: -i D^H
    std::vector<Gate> d1 = inverse_of(uu);
    d1.insert(d1.end(), vac.begin(), vac.end());
    d1.insert(d1.end(), uv.begin(), uv.end());
    Gate phi = ph;
    phi.inverse = true;
    d1.push_back(phi);

    std::vector<Gate> body{make(GateKind::H, {c})};
    append(body, d0, {{c, 0}});
    append(body, d1, {{c, 1}});
    body.push_back(make(GateKind::H, {c}));
    body.push_back(make(GateKind::GlobalPhase, {}, pre + "/coef"));
    append(a.gates, body, value_controls(sel, w, s));
    sk.g_select.push_back(std::move(a));
  }

  for (const auto &g : sk.h_prep) sk.prep_slots.push_back(g.slot);
  for (const auto &g : sk.g_prep) sk.prep_slots.push_back(g.slot);
  for (int k = 0; k <= qsp_degree; ++k) sk.qsp_slots.push_back("qsp/" + std::to_string(k));
  sk.fingerprint = fabric_fingerprint(sk);
  return sk;
}

std::string fabric_fingerprint(const CircuitSkeleton &sk) {
  std::ostringstream os;
  os << "composer-fabric-v1\n"
     << sk.n_system << ' ' << sk.workspace_width << ' ' << sk.selector_width << '\n';
  auto block = [&](const char *tag, const std::vector<Gate> &prep,
                   const std::vector<Adaptor> &sel) {
    os << tag << " prep\n";
    for (const auto &g : prep) canonical_gate(os, g);
    for (const auto &a : sel) {
      os << tag << " adaptor " << a.address << ' ' << a.kind << '\n';
      for (const auto &g : a.gates) canonical_gate(os, g);
    }
  };
  block("H", sk.h_prep, sk.h_select);
  block("G", sk.g_prep, sk.g_select);
  os << "qsp " << sk.qsp_degree << '\n';
  for (const auto &s : sk.qsp_slots) os << s << '\n';
  return sha256_hex(os.str());
}

// ---- dial ------------------------------------------------------------------

namespace {

void bind_tree(DialSheet &d, const std::string &prefix, const RVec &amps, int width) {
  const auto ang = tree_prep_angles(amps, width);
  std::size_t idx = 0;
  for (int l = 0; l < width; ++l)
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << l); ++v)
      d.angle_bindings[prefix + "/" + std::to_string(l) + "/" + std::to_string(v)] = ang[idx++];
}

void bind_nc(DialSheet &d, const std::string &prefix, const LadderSchedule &s) {
  for (std::size_t k = 0; k < s.size(); ++k) {
    d.angle_bindings[prefix + "/g" + std::to_string(k)] = s.thetas[k];
    d.phase_bindings[prefix + "/p" + std::to_string(k)] = s.phases[k];
  }
}

void bind_pair(DialSheet &d, const std::string &prefix, const LadderSchedule &s) {
  for (std::size_t k = 0; k < s.size(); ++k) {
    d.angle_bindings[prefix + "/" + std::to_string(k)] = s.thetas[k];
    d.phase_bindings[prefix + "/" + std::to_string(k)] = s.phases[k];
  }
}

}  // namespace

DialSheet dial(const CircuitSkeleton &sk, const HamiltonianPool &ham, const GeneratorPool &gen,
               const Mask &mask) {
  const auto &L = sk.layout;
  const int n = sk.n_system;
  std::vector<std::string> bad;
  if (ham.n_so != n) bad.push_back("H: register " + std::to_string(ham.n_so));
  if (static_cast<int>(ham.one_body.size()) > L.ell_one_body)
    bad.push_back("H: " + std::to_string(ham.one_body.size()) + " one-body branches");
  if (static_cast<int>(ham.channels.size()) > L.ell_channels)
    bad.push_back("H: " + std::to_string(ham.channels.size()) + " channels");
  for (std::size_t s = 0; s < ham.one_body.size(); ++s)
    if (ham.one_body[s].spin_paired != L.spin_paired) bad.push_back("H/" + std::to_string(s));
  for (std::size_t c = 0; c < ham.channels.size(); ++c)
    if (ham.channels[c].rank() > L.channel_rank_max)
      bad.push_back("H/" + std::to_string(L.ell_one_body + c));
  if (gen.ell_sigma() > 0 && (gen.n_so != n || gen.n_occ != L.n_occ))
    bad.push_back("G: register partition");
  if (gen.ell_sigma() > L.ell_sigma)
    bad.push_back("G: " + std::to_string(gen.ell_sigma()) + " ladders");
  if (!bad.empty()) {
    std::string msg = "pool does not fit the skeleton:";
    for (const auto &b : bad) msg += " " + b;
    throw BindError(msg);
  }
  mask.check(gen.ell_sigma());

  DialSheet d;
  d.skeleton_fingerprint = sk.fingerprint;
  d.mask_id = mask.label;
  d.mask_indices = mask.indices;
  d.alpha_bar = sk.alpha_bar;
  for_each_gate(sk, [&](const Gate &g) {
    if (g.slot.empty()) return;
    if (needs_angle(g.kind)) d.angle_bindings[g.slot] = 0.0;
    if (needs_phase(g.kind)) d.phase_bindings[g.slot] = 0.0;
  });

  // Hamiltonian
  const int w = sk.selector_width;
  const int r1 = static_cast<int>(ham.one_body.size());
  const int rmax = L.channel_rank_max;
  for (int s = 0; s < ham.ell_H(); ++s)
    d.alpha += std::abs(ham.branch_coefficient(s)) * ham.branch_alpha(s);
  RVec hamps = RVec::Zero(Eigen::Index{1} << w);
  for (int s = 0; s < ham.ell_H(); ++s) {
    const double om = ham.branch_coefficient(s);
    const double as = ham.branch_alpha(s);
    d.ham_coeffs.push_back(om);
    const int label = s < r1 ? s : L.ell_one_body + (s - r1);
    const std::string pre = "H/" + std::to_string(label);
    hamps(label) = d.alpha > 0.0 ? std::sqrt(std::abs(om) * as / d.alpha) : 0.0;
    d.phase_bindings[pre + "/coef"] = om < 0.0 ? M_PI : 0.0;
    if (s < r1) {
      const auto &l = ham.one_body[s];
      const int piv = sk.pivots.one_body[s];
      if (L.spin_paired) {
        CVec ua(n / 2);
        for (int k = 0; k < n / 2; ++k) ua(k) = l.u(2 * k);
        bind_nc(d, pre + "/a", one_electron_angles(ua, range_modes(0, n, 2), n, piv, false));
        bind_nc(d, pre + "/b", one_electron_angles(ua, range_modes(1, n, 2), n, piv, false));
        RVec half = RVec::Constant(2, std::sqrt(0.5));
        bind_tree(d, pre + "/idx", half, 1);
      } else {
        bind_nc(d, pre + "/a", one_electron_angles(l.u, range_modes(0, n), n, piv, false));
      }
    } else {
      const auto &ch = ham.channels[s - r1];
      const auto rot = givens_decompose(complete_orthonormal(ch.rotation));
      d.phase_bindings[pre + "/f/flip"] = rot.flip_last ? M_PI : 0.0;
      for (std::size_t k = 0; k < rot.rotations.size(); ++k)
        d.angle_bindings[pre + "/f/" + std::to_string(k)] = rot.rotations[k].theta;
      const double g = ch.eigvals.cwiseAbs().sum();
      RVec amps = RVec::Zero(rmax);
      for (int k = 0; k < ch.rank(); ++k) {
        amps(k) = g > 0.0 ? std::sqrt(std::abs(ch.eigvals(k)) / g) : 0.0;
        d.phase_bindings[pre + "/sign" + std::to_string(k)] = ch.eigvals(k) < 0.0 ? M_PI : 0.0;
      }
      bind_tree(d, pre + "/idx", amps, sk.channel_index_width);
    }
  }
  bind_tree(d, "H/prep", hamps, w);

  // generator
  const int nv = n - L.n_occ;
  double used = 0.0, abar = 0.0;
  RVec gamps = RVec::Zero(Eigen::Index{1} << w);
  for (int s = 1; s <= gen.ell_sigma(); ++s) {
    const auto &l = gen.ladders[s - 1];
    d.gen_coeffs.push_back(l.coefficient);
    const std::string pre = "G/" + std::to_string(s);
    const auto [pu, pv] = sk.pivots.generator[s - 1];
    const auto su =
        two_electron_angles(wedge_pairs(l.x, l.y), range_modes(L.n_occ, n), n, pu, true);
    const auto sv =
        two_electron_angles(wedge_pairs(l.r, l.s), range_modes(0, L.n_occ), n, pv, true);
    (void)nv;
    bind_pair(d, pre + "/u", su);
    bind_pair(d, pre + "/v", sv);
    d.phase_bindings[pre + "/phase"] = M_PI / 2 + su.global_phase - sv.global_phase;
    d.phase_bindings[pre + "/coef"] = l.coefficient < 0.0 ? M_PI : 0.0;
    if (mask.contains(s)) {
      const double wgt = 2.0 * std::abs(l.coefficient) * GeneratorPool::ladder_alpha(l);
      abar += wgt;
      if (sk.alpha_bar > 0.0) {
        gamps(s) = std::sqrt(wgt / sk.alpha_bar);
        used += wgt / sk.alpha_bar;
      }
    }
  }
  if (abar > sk.alpha_bar * (1.0 + 1e-12)) {
    std::string msg = "masked generator norm exceeds the compiled alpha_bar; addresses:";
    for (int s : mask.indices) msg += " " + std::to_string(s);
    throw BindError(msg);
  }
  gamps(0) = std::sqrt(std::max(0.0, 1.0 - used));
  bind_tree(d, "G/prep", gamps, w);

  const auto poly = jacobi_anger_coeffs(sk.alpha_bar, sk.qsp_degree);
  for (int k = 0; k <= sk.qsp_degree; ++k) {
    d.angle_bindings["qsp/" + std::to_string(k)] = std::abs(poly.coeffs(k));
    d.phase_bindings["qsp/" + std::to_string(k)] = std::arg(poly.coeffs(k));
  }
  return d;
}

void check_dial(const CircuitSkeleton &sk, const DialSheet &d) {
  if (d.skeleton_fingerprint != sk.fingerprint)
    throw TopologyError("dial sheet was bound to a different skeleton");
  std::set<std::string> angles, phases;
  for_each_gate(sk, [&](const Gate &g) {
    if (g.slot.empty()) return;
    if (needs_angle(g.kind)) angles.insert(g.slot);
    if (needs_phase(g.kind)) phases.insert(g.slot);
  });
  for (const auto &s : sk.qsp_slots) {
    angles.insert(s);
    phases.insert(s);
  }
  std::vector<std::string> bad;
  for (const auto &[k, v] : d.angle_bindings)
    if (!angles.count(k)) bad.push_back("unknown angle slot " + k);
  for (const auto &[k, v] : d.phase_bindings)
    if (!phases.count(k)) bad.push_back("unknown phase slot " + k);
  for (const auto &s : angles)
    if (!d.angle_bindings.count(s)) bad.push_back("unbound angle slot " + s);
  for (const auto &s : phases)
    if (!d.phase_bindings.count(s)) bad.push_back("unbound phase slot " + s);
  if (!bad.empty()) {
    std::string msg = "dial sheet does not match the skeleton:";
    for (std::size_t i = 0; i < std::min<std::size_t>(bad.size(), 8); ++i) msg += " " + bad[i] + ";";
    if (bad.size() > 8) msg += " ...";
    throw BindError(msg);
  }
}

// ---- execution -------------------------------------------------------------

void apply_gate(CVec &state, const Gate &g, double angle, double phase) {
  std::uint64_t cm = 0, cv = 0;
  for (const auto &[q, v] : g.controls) {
    cm |= std::uint64_t{1} << q;
    if (v) cv |= std::uint64_t{1} << q;
  }
  const std::uint64_t dim = static_cast<std::uint64_t>(state.size());
  auto two_by_two = [&](int q, cplx a, cplx b, cplx c, cplx dd) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    for (std::uint64_t x = 0; x < dim; ++x) {
      if ((x & bit) || (x & cm) != cv) continue;
      const cplx s0 = state(x), s1 = state(x | bit);
      state(x) = a * s0 + b * s1;
      state(x | bit) = c * s0 + dd * s1;
    }
  };
  switch (g.kind) {
    case GateKind::Givens:
      rotate_excitation(state, {g.qubits[0]}, {g.qubits[1]}, angle, 0.0, cm, cv);
      break;
    case GateKind::PairGivens:
      rotate_excitation(state, {g.qubits[0], g.qubits[1]}, {g.qubits[2], g.qubits[3]}, angle,
                        phase, cm, cv);
      break;
    case GateKind::Phase:
      apply_mode_phase(state, g.qubits[0], phase, cm, cv);
      break;
    case GateKind::X:
      two_by_two(g.qubits[0], 0.0, 1.0, 1.0, 0.0);
      break;
    case GateKind::Cnot: {
      const std::uint64_t cb = std::uint64_t{1} << g.qubits[0];
      cm |= cb;
      cv |= cb;
      two_by_two(g.qubits[1], 0.0, 1.0, 1.0, 0.0);
      break;
    }
    case GateKind::H: {
      const double h = std::sqrt(0.5);
      two_by_two(g.qubits[0], h, h, h, -h);
      break;
    }
    case GateKind::Ry: {
      const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
      two_by_two(g.qubits[0], c, -s, s, c);
      break;
    }
    case GateKind::ZeroReflect: {
      std::uint64_t tm = 0;
      for (int q : g.qubits) tm |= std::uint64_t{1} << q;
      for (std::uint64_t x = 0; x < dim; ++x)
        if ((x & tm) == 0 && (x & cm) == cv) state(x) = -state(x);
      break;
    }
    case GateKind::GlobalPhase: {
      if (phase == 0.0) break;
      const cplx e = std::exp(kI * phase);
      for (std::uint64_t x = 0; x < dim; ++x)
        if ((x & cm) == cv) state(x) *= e;
      break;
    }
  }
}

namespace {

struct BoundGate {
  const Gate *gate;
  double angle, phase;
};

std::vector<BoundGate> bind_block(const CircuitSkeleton &sk, const DialSheet &d,
                                  SkeletonBlock block) {
  const bool ham = block == SkeletonBlock::Hamiltonian;
  const auto &prep = ham ? sk.h_prep : sk.g_prep;
  const auto &sel = ham ? sk.h_select : sk.g_select;
  std::vector<BoundGate> out;
  auto bind = [&](const Gate &g, bool flip) {
    double a = g.fixed, p = g.fixed;
    if (!g.slot.empty()) {
      if (needs_angle(g.kind)) {
        const auto it = d.angle_bindings.find(g.slot);
        if (it == d.angle_bindings.end()) throw BindError("unbound slot " + g.slot);
        a = it->second;
      }
      if (needs_phase(g.kind)) {
        const auto it = d.phase_bindings.find(g.slot);
        if (it == d.phase_bindings.end()) throw BindError("unbound slot " + g.slot);
        p = it->second;
      }
    }
    if (g.inverse != flip) {
      if (g.kind == GateKind::Phase || g.kind == GateKind::GlobalPhase)
        p = -p;
      else
        a = -a;
    }
    out.push_back({&g, a, p});
  };
  for (const auto &g : prep) bind(g, false);
  for (const auto &a : sel)
    for (const auto &g : a.gates) bind(g, false);
  for (auto it = prep.rbegin(); it != prep.rend(); ++it) bind(*it, true);
  return out;
}

}  // namespace

CVec execute_block(const CircuitSkeleton &sk, const DialSheet &d, SkeletonBlock block,
                   const CVec &state) {
  check_dial(sk, d);
  if (state.size() != (Eigen::Index{1} << sk.total_qubits()))
    throw ShapeError("state does not match the skeleton register");
  CVec psi = state;
  for (const auto &b : bind_block(sk, d, block)) apply_gate(psi, *b.gate, b.angle, b.phase);
  return psi;
}

CMat execute_columns(const CircuitSkeleton &sk, const DialSheet &d, SkeletonBlock block,
                     const std::vector<std::uint64_t> &inputs) {
  check_dial(sk, d);
  const Eigen::Index dim = Eigen::Index{1} << sk.total_qubits();
  const auto gates = bind_block(sk, d, block);
  CMat out(dim, static_cast<Eigen::Index>(inputs.size()));
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    CVec psi = CVec::Zero(dim);
    psi(static_cast<Eigen::Index>(inputs[j])) = 1.0;
    for (const auto &b : gates) apply_gate(psi, *b.gate, b.angle, b.phase);
    out.col(static_cast<Eigen::Index>(j)) = psi;
  }
  return out;
}

}  // namespace composer
