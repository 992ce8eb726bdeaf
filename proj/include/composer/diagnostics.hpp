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
 * Overlap metrics between doubles amplitude tensors, MP2-guided masks and
 * one-particle density-matrix drift under a change of generator.
 *
 * A tensor's dyads are b_k = vec(u_k v_k^T) from its SVD (pair-space rows a<b,
 * columns i<j); ov(r) = ||B_r^T B~_r||_F^2 / r. The projector variant uses the
 * left singular vectors only.
 */
#pragma once

#include <vector>

#include "composer/factorization.hpp"
#include "composer/linalg.hpp"
#include "composer/mask.hpp"

namespace composer {

enum class OverlapKind { Dyad, LeftProjector };

/** ||Qa^T Qb||_F^2 / r for two matrices with r orthonormal columns each. */
double basis_overlap(const RMat &qa, const RMat &qb);

/** Throws RankError when either tensor has numerical rank below r. */
double subspace_overlap(const T2Tensor &a, const T2Tensor &b, int r,
                        OverlapKind kind = OverlapKind::Dyad);

struct OverlapCurve {
  std::vector<int> ranks;
  std::vector<double> ov;
  std::vector<double> weights;  ///< s_r^2 / sum s_k^2 over the retained ranks of A
  double wauc = 0.0;
  int r_eps = 0;
};

/** Weights and the retained rank come from the reference tensor a. */
OverlapCurve wauc(const T2Tensor &a, const T2Tensor &b, double eps_s,
                  OverlapKind kind = OverlapKind::Dyad);

/** w_s = |omega_s|^2 ||U_s||^2 ||V_s||^2 per address. */
std::vector<double> ladder_weights(const GeneratorPool &gen);

struct OneShotMask {
  Mask mask;
  double coverage = 0.0;
  std::vector<double> weights;
};

/** Smallest weight-sorted prefix (ties by address) whose coverage reaches eta. */
OneShotMask one_shot_mask(const GeneratorPool &gen, double eta);

struct DensityDrift {
  double occ_drift = 0.0;
  double vir_drift = 0.0;
  CMat d_old, d_new;
  double trace_occ = 0.0;  ///< of d_new
  double trace_vir = 0.0;
};

/**
 * D_pq = <psi| a+_p a_q |psi> with psi = e^{sigma} ref for the masked part of
 * each pool. Drifts are relative Frobenius norms over the occupied and virtual
 * blocks; when the reference block vanishes the absolute norm is reported.
 */
DensityDrift density_matrix_drift(const GeneratorPool &gen_old, const GeneratorPool &gen_new,
                                  const Mask &mask, const CVec &reference, int n);

}  // namespace composer
