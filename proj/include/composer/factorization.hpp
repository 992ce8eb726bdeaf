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
 * Low-rank factorizations producing rank-one ladder pools.
 *
 * Hamiltonian: H = sum_pq h~_pq a+_p a_q + 1/2 sum_mu O_mu^2 + E_nn with
 * O_mu = sum_pr L^mu_pr a+_p a_r. The one-body part is diagonalized into
 * number operators of eigenmodes; each channel becomes one squared term.
 *
 * Generator: the doubles tensor is split by an SVD on pair spaces followed by
 * a canonical skew decomposition of every singular vector into wedges.
 */
#pragma once

#include <utility>
#include <vector>

#include "composer/integral_io.hpp"
#include "composer/linalg.hpp"

namespace composer {

struct CholeskyChannel {
  int index = 0;
  RMat factor;     ///< n_so x n_so symmetric
  RVec eigvals;    ///< sorted by descending magnitude
  RMat rotation;   ///< n_so x R orthonormal columns
  double gamma = 0.0;

  int rank() const { return static_cast<int>(eigvals.size()); }
};

enum class LadderKind { Bilinear, PairExcitation, ProjectedQuadratic };

const char *to_string(LadderKind k);

struct RankOneLadder {
  LadderKind kind = LadderKind::Bilinear;
  // Bilinear: operator a+(u) a(v). With spin_paired the vectors live on the
  // alpha modes and the operator also includes the same term on beta modes.
  CVec u, v;
  bool spin_paired = false;
  // PairExcitation: B+[x^y] B[r^s], x,y over virtuals, r,s over occupieds.
  CVec x, y, r, s;
  int channel = -1;  ///< ProjectedQuadratic: index into HamiltonianPool::channels
  double coefficient = 0.0;
  int address = 0;
};

struct HamiltonianPool {
  int n_so = 0;
  int n_elec = 0;
  double e_nn = 0.0;  ///< not part of the LCU
  std::vector<RankOneLadder> one_body;
  std::vector<CholeskyChannel> channels;
  double alpha = 0.0;

  int ell_H() const { return static_cast<int>(one_body.size() + channels.size()); }
  /** Normalization of one branch's block encoding. */
  double branch_alpha(int address) const;
  /** Signed coefficient of one branch. */
  double branch_coefficient(int address) const;
};

struct GeneratorPool {
  int n_so = 0;
  int n_occ = 0;
  std::vector<RankOneLadder> ladders;  ///< addresses 1..ell_sigma
  double alpha_bar = 0.0;

  int ell_sigma() const { return static_cast<int>(ladders.size()); }
  int n_virt() const { return n_so - n_occ; }
  RVec weights() const;
  /** Branch normalization alpha_s of a ladder (1 for normalized vectors). */
  static double ladder_alpha(const RankOneLadder &l);
  void recompute_alpha_bar();
};

struct T2Tensor {
  int n_occ = 0;
  int n_virt = 0;
  RMat amps;  ///< C(n_virt,2) x C(n_occ,2), pairs a<b and i<j in lexicographic order
};

struct Mp2Result {
  T2Tensor t2;
  double e_corr = 0.0;
};

/** Lexicographic index of the pair (a,b), a<b, among n items. */
int pair_index(int a, int b, int n);
std::vector<std::pair<int, int>> pair_list(int n);
int n_pairs(int n);

/** Skew-symmetric matrix from a pair vector (upper triangle), and back. */
RMat unpack_skew(const RVec &pairs, int n);
CVec wedge_pairs(const CVec &x, const CVec &y);

std::vector<CholeskyChannel> pivoted_cholesky(const IntegralSet &ints, double tau_chol);

CholeskyChannel channel_eigendecomp(const CholeskyChannel &ch, double tau_eig);

HamiltonianPool build_hamiltonian_pool(const IntegralSet &ints, double tau_chol,
                                       double tau_eig, double tau_onebody = 0.0);

Mp2Result mp2_amplitudes(const IntegralSet &ints);

GeneratorPool nested_svd_t2(const T2Tensor &t2, double tau_svd = 1e-6,
                            double tau_wedge = 1e-6);

/** Canonical skew form: A = sum_k w_k (x_k y_k^T - y_k x_k^T), w_k > 0. */
struct WedgeTerm {
  double weight;
  RVec x, y;
};
std::vector<WedgeTerm> skew_wedges(const RMat &a);

/** Rebuild the pair-matrix sum_s w_s U_s V_s^H from a generator pool. */
RMat reconstruct_t2(const GeneratorPool &pool);

}  // namespace composer
