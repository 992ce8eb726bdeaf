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

/**
 * @file
 * Closed-form two-qubit depth and ancilla accounting for a compiled skeleton.
 *
 * Conventions (all counts are exact integers):
 *  - every selector-controlled two-qubit gate costs kControlOverhead layers;
 *  - bilinear adaptor: (n - 1) layers;
 *  - channel adaptor: (n - 1) + R_mu + 2 layers;
 *  - pair adaptor: cz_per_block x (C(N_V,2) - 1 + C(N_O,2) - 1) pair blocks;
 *  - PREP: one layer per branch; QSP: d x generator SELECT;
 *  - single-qubit gates are tallied separately and cost no two-qubit depth.
 * Generator rows use the compiled pool size; the mask only changes the
 * reported active branch count.
 */
#pragma once

#include <string>
#include <vector>

#include "composer/circuit_ir.hpp"
#include "composer/mask.hpp"

namespace composer {

inline constexpr int kControlOverhead = 2;

struct BlockCost {
  long fswaps = 0;
  long cz = 0;
};

/** fSWAPs and CZs for one four-qubit Givens block on the given fabric. */
BlockCost block_cost(const Connectivity &conn);

struct ResourceParams {
  int n = 0;
  int n_occ = 0;
  int ell_one_body = 0;
  std::vector<int> r_mu;  ///< channel ranks
  int ell_sigma = 0;
  int qsp_degree = 0;
  int workspace_width = -1;  ///< -1: derived from the adaptor needs
  int active_sigma = -1;     ///< |mask|, -1: ell_sigma
};

ResourceParams params_of(const CircuitSkeleton &skel, const Mask &mask);

struct ResourceRow {
  std::string name;
  int system_qubits = 0;
  int ancillas = 0;
  long depth = 0;
};

struct ResourceEstimate {
  std::vector<ResourceRow> rows;
  long total_depth = 0;
  int selector_width = 0;  ///< max(a_sigma, a_H)
  int workspace_width = 0;
  int ancilla_width = 0;   ///< selector + workspace
  long single_qubit_gates = 0;
  long fswaps = 0;
  std::string connectivity;
  ResourceParams params;
  long d_one = 0;     ///< bilinear adaptor depth
  long d_two = 0;     ///< pair adaptor depth
  std::vector<long> d_three;  ///< per channel
  long d_sigma_max = 0;

  long row(const std::string &name) const;
};

ResourceEstimate estimate(const ResourceParams &p, const Connectivity &conn);

/** Uses the skeleton's layout and adds the single-qubit tally of its gates. */
ResourceEstimate estimate(const CircuitSkeleton &skel, const Mask &mask,
                          const Connectivity &conn);

std::string estimate_table(const ResourceEstimate &e);
std::string estimate_json(const ResourceEstimate &e);

enum class UpdateKind { Geometry, Mask, Truncation };

struct PayoffRow {
  std::string artifact, conventional, composer;
};

std::vector<PayoffRow> payoff_ledger(UpdateKind kind);

struct ReuseReport {
  int dials = 0;
  int fingerprints = 0;
  int binding_sets = 0;
  std::string ratio;  ///< "dials:fingerprints"
};

/** Counts distinct fingerprints and distinct binding sets across dial sheets. */
ReuseReport reuse_report(const std::vector<DialSheet> &sheets);

struct PowerFit {
  double a = 0.0, p = 0.0, c = 0.0;
  double rel_residual = 0.0;
};

/** Least-squares y = a x^p + c, p searched in [0.25, 4]. */
PowerFit fit_power_law(const std::vector<double> &x, const std::vector<double> &y);

}  // namespace composer
