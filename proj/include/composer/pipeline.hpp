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
 * Stage helpers shared by the command-line driver and the acceptance run.
 */
#pragma once

#include <string>
#include <vector>

#include "composer/circuit_ir.hpp"
#include "composer/serialize.hpp"

namespace composer {

struct FactorizeOptions {
  double tau_chol = 1e-8;
  double tau_eig = 1e-10;
  double tau_svd = 1e-6;
  double tau_wedge = 1e-6;
};

struct FactorizeResult {
  PoolBundle pools;
  T2Tensor t2;
  double e_mp2 = 0.0;
};

/** Hamiltonian pool plus the MP2-seeded generator pool. Thresholds must be positive. */
FactorizeResult factorize_instance(const IntegralSet &ints, const FactorizeOptions &opt = {});

/** "full", "none", or a comma list of addresses. */
Mask parse_mask(const std::string &spec, int ell_sigma);

struct VerifyCheck {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
  bool skipped = false;
  std::string note;
};

struct VerifyReport {
  std::string fingerprint;
  std::string mask_id;
  std::vector<VerifyCheck> checks;
  bool pass = false;
};

/**
 * Re-dials from the pools, executes the skeleton against the dense encodings,
 * checks the LCU bound and the sandwich budget. eps_poly <= 0 makes the QSP
 * budget unsatisfiable. TopologyError and BindError propagate.
 */
VerifyReport verify_sheet(const CircuitSkeleton &skel, const DialSheet &sheet,
                          const PoolBundle &pools, double eps_poly);

std::string verify_report_json(const VerifyReport &r);

}  // namespace composer
