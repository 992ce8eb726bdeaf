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
 * Masked similarity sandwich U^H W U at the dense level, matrix-element
 * tables, and a small non-orthogonal subspace (GCIM) solver with its toy.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "composer/factorization.hpp"
#include "composer/linalg.hpp"
#include "composer/mask.hpp"

namespace composer {

struct EffectiveHamiltonianReport {
  std::string mask_id;
  int sector = 0;
  double alpha = 0.0;            ///< inherited from the Hamiltonian encoding
  double measured_error = 0.0;   ///< eps''' on the model space
  double eps_exp = 0.0;          ///< eps'' of the exp(sigma) block
  double eps_lcu = 0.0;          ///< eps of the Hamiltonian encoding
  double budget = 0.0;           ///< 2 eps'' + eps
  bool within_budget = false;    ///< eps''' <= (1 + slack) budget + 1e-12
  double hermiticity_defect = 0.0;
  int qsp_degree = 0;
  std::vector<std::uint64_t> model_space;
};

struct SandwichOptions {
  int sector = -1;          ///< -1: the Hamiltonian's electron count
  double eps_prime = 0.0;   ///< injected generator block error
  double alpha_bar = -1.0;  ///< generator normalization, default the pool's
  double slack = 0.1;
};

struct SandwichResult {
  EffectiveHamiltonianReport report;
  CMat block;  ///< P U^H (H/alpha) U P on the model space
  CMat exact;  ///< P e^{-sigma} H e^{sigma} P / alpha on the model space
};

/**
 * model_space lists determinant indices of the sector (empty: the whole
 * sector). Since I (x) U is block diagonal in the ancilla register, the
 * ancilla-zero block of (I (x) U)^H W (I (x) U) is U^H B U.
 */
SandwichResult similarity_sandwich(const HamiltonianPool &ham, const GeneratorPool &gen,
                                   const Mask &mask,
                                   const std::vector<std::uint64_t> &model_space,
                                   double eps_poly, const SandwichOptions &opt = {});

/** M_ij = <bra_i| block |ket_j>. */
CMat matrix_elements(const CMat &block, const std::vector<CVec> &bras,
                     const std::vector<CVec> &kets);

struct GcimResult {
  RVec energies;  ///< ascending
  CMat vectors;   ///< coefficients over the input basis, one column per energy
  int kept = 0;   ///< directions surviving the overlap threshold
};

/** H c = E S c with S eigenvalues below rel_threshold * max dropped. */
GcimResult gcim_subspace_solve(const CMat &h, const std::vector<CVec> &basis,
                               double rel_threshold = 1e-10);

/**
 * Four-qubit, two-electron toy: the synthetic instance with seed 7 and two
 * spatial orbitals, reference |0011>, and the commuting generators
 * sigma1 = 0.6 (a+_2 a_0 - h.c.) and sigma2 = 0.4 (a+_3 a_1 - h.c.).
 */
struct GcimToy {
  int n = 4;
  CMat h;
  CVec phi0;
  CMat sigma1, sigma2;
  double r_range = M_PI;  ///< sweep r over [-r_range, r_range]: one period of e^{r sigma2}
};

GcimToy gcim_toy();

/** Lowest energy of span{phi0, e^{sigma2} phi0, e^{sigma1 + r sigma2} phi0}. */
double gcim_span_energy(const GcimToy &toy, double r);

struct GcimSweep {
  double e_single = 0.0;  ///< <phi0|H|phi0>
  double e_three = 0.0;   ///< span{phi0, e^{sigma1} phi0, e^{sigma2} phi0}
  double e_swept = 0.0;   ///< min over r in [-pi, pi]
  double r_best = 0.0;
};

/** Coarse scan of r followed by Brent refinement around the best point. */
GcimSweep gcim_sweep(const GcimToy &toy, int coarse_points = 2001);

}  // namespace composer
