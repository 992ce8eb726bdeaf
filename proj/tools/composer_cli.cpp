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

// Batch driver: factorize -> compile -> dial -> verify, plus estimate and
// diagnose. Exit codes: 0 ok, 1 verification failed, 2 input error,
// 3 topology violation.

#include <CLI11.hpp>
#include <cctype>
#include <iostream>
#include <json.hpp>

#include "composer/diagnostics.hpp"
#include "composer/errors.hpp"
#include "composer/pipeline.hpp"
#include "composer/qsp.hpp"
#include "composer/resources.hpp"
#include "composer/serialize.hpp"

using namespace composer;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kInputError = 2, kTopology = 3 };

IntegralSet load_integrals(const std::string &path) {
  const std::string text = read_text_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return ints_from_json(text);
  return parse_fcidump_text(text);
}

void emit(const std::string &out, const std::string &text) {
  if (out.empty() || out == "-")
    std::cout << text << "\n";
  else
    write_text_file(out, text);
}

struct Args {
  std::string ints, synth, pool, skel, dial, mask = "full", connectivity, out;
  std::string t2, t2_ref, t2_out, csv;
  double tau_chol = 1e-8, tau_eig = 1e-10, tau_svd = 1e-6, tau_wedge = 1e-6;
  double eta = -1.0, eps_poly = 1e-8, eps_s = 1e-6, headroom = 1.0;
  int selector_width = -1;
  std::uint64_t seed = 0;
  bool projector = false;
};

int run_factorize(const Args &a) {
  IntegralSet ints;
  if (!a.ints.empty()) {
    ints = load_integrals(a.ints);
  } else if (!a.synth.empty()) {
    int ns = 0, ne = 0;
    char comma = 0;
    std::istringstream is(a.synth);
    if (!(is >> ns >> comma >> ne) || comma != ',') throw ValidationError("--synth expects n_spatial,n_elec");
    ints = synth_instance(a.seed, ns, ne);
  } else {
    throw ValidationError("factorize needs --ints or --synth");
  }
  FactorizeOptions fo{a.tau_chol, a.tau_eig, a.tau_svd, a.tau_wedge};
  const auto r = factorize_instance(ints, fo);
  emit(a.out, pool_to_json(r.pools));
  if (!a.t2_out.empty()) write_text_file(a.t2_out, t2_to_json(r.t2));
  std::cerr << "channels " << r.pools.ham.channels.size() << ", ell_H " << r.pools.ham.ell_H()
            << ", ell_sigma " << r.pools.gen.ell_sigma() << "\n";
  return kOk;
}

int run_compile(const Args &a) {
  const auto pools = pool_from_json(read_text_file(a.pool));
  if (!(a.headroom >= 1.0)) throw ValidationError("--headroom must be >= 1");
  const double alpha_bar = a.headroom * pools.gen.alpha_bar;
  const int d = alpha_bar > 0.0 ? degree_for(alpha_bar, a.eps_poly) : 0;
  const auto conn = Connectivity::parse(a.connectivity.empty() ? "full" : a.connectivity);
  const auto skel = compile_skeleton(layout_of(pools.ham, pools.gen),
                                     default_pivots(pools.ham, pools.gen), conn, d, alpha_bar,
                                     a.selector_width);
  emit(a.out, skeleton_to_json(skel));
  std::cerr << "fingerprint " << skel.fingerprint << "\n";
  return kOk;
}

int run_dial(const Args &a) {
  const auto skel = skeleton_from_json(read_text_file(a.skel));
  const auto pools = pool_from_json(read_text_file(a.pool));
  const Mask mask = a.eta > 0.0 ? one_shot_mask(pools.gen, a.eta).mask
                                : parse_mask(a.mask, pools.gen.ell_sigma());
  const auto sheet = dial(skel, pools.ham, pools.gen, mask);
  emit(a.out, dial_to_json(sheet, &pools));
  return kOk;
}

int run_verify(const Args &a) {
  const auto skel = skeleton_from_json(read_text_file(a.skel));
  const auto file = dial_from_json(read_text_file(a.dial));
  if (file.sheet.skeleton_fingerprint != skel.fingerprint)
    throw TopologyError("dial sheet was bound to fabric " + file.sheet.skeleton_fingerprint);
  if (!file.pools) throw ValidationError("dial sheet carries no pools to verify against");
  const auto rep = verify_sheet(skel, file.sheet, *file.pools, a.eps_poly);
  emit(a.out, verify_report_json(rep));
  for (const auto &c : rep.checks)
    std::cerr << (c.skipped ? "SKIP " : c.pass ? "PASS " : "FAIL ") << c.name << "\n";
  return rep.pass ? kOk : kVerifyFailed;
}

int run_estimate(const Args &a) {
  const auto skel = skeleton_from_json(read_text_file(a.skel));
  Mask mask = Mask::full(skel.layout.ell_sigma);
  if (!a.dial.empty()) {
    const auto file = dial_from_json(read_text_file(a.dial));
    if (file.sheet.skeleton_fingerprint != skel.fingerprint)
      throw TopologyError("dial sheet was bound to fabric " + file.sheet.skeleton_fingerprint);
    mask = Mask::of(file.sheet.mask_indices, file.sheet.mask_id);
  }
  const auto conn = a.connectivity.empty() ? skel.connectivity : Connectivity::parse(a.connectivity);
  const auto e = estimate(skel, mask, conn);
  emit(a.out, estimate_json(e));
  std::cerr << estimate_table(e);
  return kOk;
}

int run_diagnose(const Args &a) {
  nlohmann::ordered_json j{{"format", "composer-report-v1"}, {"kind", "diagnose"}};
  bool any = false;
  if (!a.t2.empty() || !a.t2_ref.empty()) {
    if (a.t2.empty() || a.t2_ref.empty()) throw ValidationError("overlap needs --t2 and --t2-ref");
    const auto ref = t2_from_json(read_text_file(a.t2_ref));
    const auto other = t2_from_json(read_text_file(a.t2));
    const auto c = wauc(ref, other, a.eps_s,
                        a.projector ? OverlapKind::LeftProjector : OverlapKind::Dyad);
    j["overlap"] = {{"variant", a.projector ? "projector" : "dyad"},
                    {"eps_s", a.eps_s},
                    {"r_eps", c.r_eps},
                    {"wauc", c.wauc},
                    {"ov", c.ov},
                    {"weights", c.weights}};
    if (!a.csv.empty()) write_text_file(a.csv, overlap_curve_csv(c));
    any = true;
  }
  if (!a.pool.empty()) {
    const auto pools = pool_from_json(read_text_file(a.pool));
    const double eta = a.eta > 0.0 ? a.eta : 0.99;
    const auto m = one_shot_mask(pools.gen, eta);
    j["mask"] = {{"eta", eta},
                 {"indices", m.mask.indices},
                 {"coverage", m.coverage},
                 {"weights", m.weights}};
    any = true;
  }
  if (!any) throw ValidationError("diagnose needs --t2/--t2-ref or --pool");
  emit(a.out, j.dump(1));
  return kOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Compile-once block-encoding pipeline"};
  app.require_subcommand(1);
  Args a;
  app.add_option("--seed", a.seed, "seed for synthetic instances");

  auto *fact = app.add_subcommand("factorize", "integrals -> rank-one pools");
  fact->add_option("--ints", a.ints, "FCIDUMP or composer-ints-v1 file");
  fact->add_option("--synth", a.synth, "synthetic instance n_spatial,n_elec (uses --seed)");
  fact->add_option("--tau-chol", a.tau_chol);
  fact->add_option("--tau-eig", a.tau_eig);
  fact->add_option("--tau-svd", a.tau_svd);
  fact->add_option("--tau-wedge", a.tau_wedge);
  fact->add_option("--t2-out", a.t2_out, "also write the MP2 doubles tensor");
  fact->add_option("--seed", a.seed);

  auto *comp = app.add_subcommand("compile", "pools -> skeleton");
  comp->add_option("--pool", a.pool)->required();
  comp->add_option("--connectivity", a.connectivity, "full, linear:d_g or grid:L");
  comp->add_option("--eps-poly", a.eps_poly);
  comp->add_option("--headroom", a.headroom, "compiled alpha_bar / pool alpha_bar");
  comp->add_option("--selector-width", a.selector_width);

  auto *dl = app.add_subcommand("dial", "skeleton + pools -> dial sheet");
  dl->add_option("--skel", a.skel)->required();
  dl->add_option("--pool", a.pool)->required();
  dl->add_option("--mask", a.mask, "full, none or comma-separated addresses");
  dl->add_option("--eta", a.eta, "one-shot MP2 mask coverage instead of --mask");

  auto *ver = app.add_subcommand("verify", "check a dial sheet against its skeleton");
  ver->add_option("--skel", a.skel)->required();
  ver->add_option("--dial", a.dial)->required();
  ver->add_option("--eps-poly", a.eps_poly);

  auto *est = app.add_subcommand("estimate", "resource estimate for a skeleton");
  est->add_option("--skel", a.skel)->required();
  est->add_option("--dial", a.dial, "take the mask from this sheet");
  est->add_option("--connectivity", a.connectivity);

  auto *dg = app.add_subcommand("diagnose", "overlap curves and MP2 masks");
  dg->add_option("--t2", a.t2);
  dg->add_option("--t2-ref", a.t2_ref, "reference tensor (sets the weights)");
  dg->add_option("--eps-s", a.eps_s);
  dg->add_flag("--projector", a.projector, "left-singular projector overlap");
  dg->add_option("--pool", a.pool);
  dg->add_option("--eta", a.eta);
  dg->add_option("--csv", a.csv, "overlap curve as CSV");

  for (auto *sc : {fact, comp, dl, ver, est, dg}) sc->add_option("--out", a.out, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*fact) return run_factorize(a);
    if (*comp) return run_compile(a);
    if (*dl) return run_dial(a);
    if (*ver) return run_verify(a);
    if (*est) return run_estimate(a);
    if (*dg) return run_diagnose(a);
  } catch (const TopologyError &e) {
    std::cerr << "topology violation: " << e.what() << "\n";
    return kTopology;
  } catch (const Error &e) {
    std::cerr << e.kind() << ": " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
