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

#include "composer/pipeline.hpp"

#include <json.hpp>
#include <sstream>

#include "composer/errors.hpp"
#include "composer/mask_engine.hpp"
#include "composer/oracle_sim.hpp"

namespace composer {

namespace {

// gate-level execution is a dense statevector sweep over 2^n inputs
constexpr int kMaxExecQubits = 14;

std::vector<std::uint64_t> system_inputs(int n) {
  std::vector<std::uint64_t> v(std::size_t{1} << n);
  for (std::uint64_t x = 0; x < v.size(); ++x) v[x] = x;
  return v;
}

double max_binding_gap(const DialSheet &a, const DialSheet &b) {
  if (a.angle_bindings.size() != b.angle_bindings.size() ||
      a.phase_bindings.size() != b.phase_bindings.size() || a.mask_indices != b.mask_indices)
    return INFINITY;
  double gap = 0.0;
  for (const auto &[k, v] : a.angle_bindings) {
    const auto it = b.angle_bindings.find(k);
    if (it == b.angle_bindings.end()) return INFINITY;
    gap = std::max(gap, std::abs(it->second - v));
  }
  for (const auto &[k, v] : a.phase_bindings) {
    const auto it = b.phase_bindings.find(k);
    if (it == b.phase_bindings.end()) return INFINITY;
    gap = std::max(gap, std::abs(it->second - v));
  }
  return gap;
}

VerifyCheck bounded(std::string name, double value, double bound) {
  VerifyCheck c;
  c.name = std::move(name);
  c.value = value;
  c.bound = bound;
  c.pass = value <= bound;
  return c;
}

VerifyCheck skipped(std::string name, std::string why) {
  VerifyCheck c;
  c.name = std::move(name);
  c.skipped = true;
  c.pass = true;
  c.note = std::move(why);
  return c;
}

}  // namespace

FactorizeResult factorize_instance(const IntegralSet &ints, const FactorizeOptions &opt) {
  for (double t : {opt.tau_chol, opt.tau_eig, opt.tau_svd, opt.tau_wedge})
    if (!(t > 0.0)) throw ValidationError("thresholds must be positive");
  FactorizeResult r;
  r.pools.ham = build_hamiltonian_pool(ints, opt.tau_chol, opt.tau_eig);
  const auto mp2 = mp2_amplitudes(ints);
  r.t2 = mp2.t2;
  r.e_mp2 = mp2.e_corr;
  r.pools.gen = nested_svd_t2(mp2.t2, opt.tau_svd, opt.tau_wedge);
  return r;
}

Mask parse_mask(const std::string &spec, int ell_sigma) {
  if (spec == "full" || spec.empty()) return Mask::full(ell_sigma);
  if (spec == "none") return Mask::none();
  std::vector<int> idx;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      idx.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::logic_error &) {
      throw MaskError("bad mask entry '" + tok + "'");
    }
  }
  Mask m = Mask::of(idx, spec);
  m.check(ell_sigma);
  return m;
}

VerifyReport verify_sheet(const CircuitSkeleton &skel, const DialSheet &sheet,
                          const PoolBundle &pools, double eps_poly) {
  check_dial(skel, sheet);
  VerifyReport r;
  r.fingerprint = skel.fingerprint;
  r.mask_id = sheet.mask_id;
  const Mask mask = Mask::of(sheet.mask_indices, sheet.mask_id);
  const auto &ham = pools.ham;
  const auto &gen = pools.gen;

  const DialSheet redial = dial(skel, ham, gen, mask);
  if (redial.skeleton_fingerprint != sheet.skeleton_fingerprint)
    throw TopologyError("pools dial onto a different fabric");
  r.checks.push_back(bounded("bindings_match_pools", max_binding_gap(sheet, redial), 1e-12));

  const int n = skel.n_system;
  if (skel.total_qubits() <= kMaxExecQubits) {
    GenEncodingOptions go;
    go.selector_width = skel.selector_width;
    go.workspace_width = skel.workspace_width;
    go.alpha_bar = skel.alpha_bar;
    go.pivots = skel.pivots.generator;
    const auto inputs = system_inputs(n);
    const CMat gcols = execute_columns(skel, sheet, SkeletonBlock::Generator, inputs);
    const auto gbe = generator_block_encoding(gen, mask, go);
    double gerr = INFINITY;
    if (gen.ell_sigma() == skel.layout.ell_sigma && gbe.unitary.rows() == gcols.rows())
      gerr = (gcols - gbe.unitary.leftCols(gcols.cols())).cwiseAbs().maxCoeff();
    r.checks.push_back(bounded("generator_execution", gerr, 1e-10));

    HamEncodingOptions ho;
    ho.selector_width = skel.selector_width;
    ho.workspace_width = skel.workspace_width;
    ho.channel_index_width = skel.channel_index_width;
    ho.channel_pad_rank = skel.layout.channel_rank_max;
    ho.pivots = skel.pivots.one_body;
    const CMat hcols = execute_columns(skel, sheet, SkeletonBlock::Hamiltonian, inputs);
    const auto hbe = hamiltonian_block_encoding(ham, ho);
    double herr = INFINITY;
    if (ham.ell_H() == skel.layout.ell_H() && hbe.unitary.rows() == hcols.rows())
      herr = (hcols - hbe.unitary.leftCols(hcols.cols())).cwiseAbs().maxCoeff();
    r.checks.push_back(bounded("hamiltonian_execution", herr, 1e-10));
    r.checks.push_back(bounded("hamiltonian_lcu_bound", hbe.report.measured_error,
                               hbe.report.eps_lcu_bound + 1e-10));
  } else {
    r.checks.push_back(skipped("generator_execution", "register too wide for dense execution"));
    r.checks.push_back(skipped("hamiltonian_execution", "register too wide for dense execution"));
  }

  if (!(eps_poly > 0.0)) {
    VerifyCheck c = bounded("qsp_budget", INFINITY, eps_poly);
    c.pass = false;
    c.note = "a zero polynomial budget cannot be met at finite degree";
    r.checks.push_back(c);
  } else if (n <= 8) {
    SandwichOptions so;
    so.alpha_bar = skel.alpha_bar;
    const auto sw = similarity_sandwich(ham, gen, mask, {}, eps_poly, so);
    VerifyCheck c = bounded("sandwich_budget", sw.report.measured_error,
                            1.1 * sw.report.budget + 1e-12);
    c.pass = sw.report.within_budget;
    r.checks.push_back(c);
  } else {
    r.checks.push_back(skipped("sandwich_budget", "dense sandwich limited to n <= 8"));
  }

  r.pass = true;
  for (const auto &c : r.checks) r.pass = r.pass && c.pass;
  return r;
}

std::string verify_report_json(const VerifyReport &r) {
  nlohmann::ordered_json j{{"format", "composer-report-v1"},
                           {"kind", "verify"},
                           {"fingerprint", r.fingerprint},
                           {"mask", r.mask_id},
                           {"pass", r.pass}};
  auto &cs = j["checks"] = nlohmann::ordered_json::array();
  for (const auto &c : r.checks) {
    nlohmann::ordered_json e{{"name", c.name}, {"pass", c.pass}, {"skipped", c.skipped}};
    if (!c.skipped) {
      // JSON has no infinity; unmeasurable values are reported as null
      e["value"] = std::isfinite(c.value) ? nlohmann::ordered_json(c.value) : nullptr;
      e["bound"] = c.bound;
    }
    if (!c.note.empty()) e["note"] = c.note;
    cs.push_back(e);
  }
  return j.dump(1);
}

}  // namespace composer
