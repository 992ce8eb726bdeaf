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
 * Dense Jordan-Wigner oracle: operators, block-encoding unitaries and their
 * restricted-subspace errors.
 *
 * Register layout of every encoding: system qubits occupy the low n bits,
 * ancillas sit above them, so the all-zero ancilla block is the top-left
 * 2^n x 2^n corner. Inside a multiplexed encoding the workspace register
 * (width t) sits directly above the system and the selector above that.
 */
#pragma once

#include <Eigen/Sparse>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "composer/factorization.hpp"
#include "composer/integral_io.hpp"
#include "composer/ladders.hpp"
#include "composer/linalg.hpp"
#include "composer/mask.hpp"

namespace composer {

struct FockOperator {
  CMat matrix;
  int n = 0;
  std::string tag;
};

struct BlockEncodingReport {
  std::string tag;
  double alpha = 1.0;
  int ancillas = 0;
  double measured_error = 0.0;
  int sector = -1;            ///< particle number, -1 for the full space
  bool model_space = false;   ///< a model-space projector was applied
  double eps_lcu_bound = 0.0; ///< (1/alpha) sum |Omega_s| alpha_s eps_s
  std::vector<double> branch_errors;
  double eps_prime = 0.0;
  double eps_dprime = 0.0;
  double eps_tprime = 0.0;
  std::vector<std::string> flags;
};

struct BlockEncoding {
  CMat unitary;
  int n_system = 0;
  int ancillas = 0;
  BlockEncodingReport report;

  CMat block() const;
};

struct JordanWigner {
  int n = 0;
  std::vector<Eigen::SparseMatrix<cplx>> create;

  CMat dense_create(int p) const { return CMat(create[p]); }
  CMat dense_annihilate(int p) const { return CMat(create[p].adjoint()); }
};

/** Creation operators with Z strings; annihilators are their adjoints. */
JordanWigner jw_ladder_ops(int n);

/** Pivots fixed at compile time, by address. */
struct PivotTable {
  std::vector<int> one_body;                      ///< local pivot per one-body branch
  std::vector<std::pair<int, int>> generator;     ///< (virtual pair, occupied pair), address-1
};

PivotTable default_pivots(const HamiltonianPool &ham, const GeneratorPool &gen);

// ---- dense operators -------------------------------------------------------

/** sum h a+a + 1/2 sum <pq|rs> a+a+aa (+ E_nn when requested). */
CMat dense_hamiltonian(const IntegralSet &ints, bool include_constant = false);

/** sum kappa n_w + 1/2 sum O_mu^2 (+ E_nn when requested). */
CMat dense_pool_hamiltonian(const HamiltonianPool &pool, bool include_constant = false);

/** O = sum_xi lambda_xi n_{u_xi} from the retained eigenmodes. */
CMat dense_channel_operator(const CholeskyChannel &ch, int n);

/** The ladder operator L of one pool entry. */
CMat dense_ladder_operator(const RankOneLadder &l, int n, int n_occ);

/** sigma = sum_{s in mask} omega_s (L_s - L_s^H). */
CMat dense_generator(const GeneratorPool &pool, const Mask &mask);

/** exp(sigma) by eigendecomposition. */
CMat exact_exp_sigma(const GeneratorPool &pool, const Mask &mask);

// ---- encodings -------------------------------------------------------------

enum class DyadForm { Prep, NumberConserving };

/**
 * Single-ancilla encoding of |u><v| for unit vectors over all n modes. Exact on
 * the one-electron sector only. The report uses alpha = lam; lam = 0 falls back
 * to alpha = 1 with a zero target and the DegenerateCoefficient flag. The
 * number-conserving form uses pivot_u for both ladders.
 */
BlockEncoding dyad_block_encoding(const CVec &u, const CVec &v, double lam, int n,
                                  DyadForm form = DyadForm::Prep, int pivot_u = -1,
                                  int pivot_v = -1, double perturb = 0.0);

/**
 * Single-ancilla encoding of B+[U] B[V] restricted to the two-electron sector.
 * U runs over virtual pairs (modes n_occ..n-1), V over occupied pairs.
 */
BlockEncoding pair_dyad_block_encoding(const CVec &u_pairs, const CVec &v_pairs, int n,
                                       int n_occ, int pivot_u = -1, int pivot_v = -1,
                                       double perturb = 0.0);

/** Diagonal one-body branch n_w (plus the beta copy when spin paired). */
BlockEncoding onebody_block_encoding(const RankOneLadder &l, int n, int pivot = -1,
                                     double perturb = 0.0);

struct ChannelEncoding {
  BlockEncoding linear;   ///< block O/Gamma
  BlockEncoding squared;  ///< block O^2/Gamma^2
};

/**
 * index_width -1 uses ceil(log2 R). pad_rank > R appends zero-eigenvalue labels
 * (the completed frame columns), the shape a compiled skeleton uses.
 */
ChannelEncoding channel_block_encoding(const CholeskyChannel &ch, int n,
                                       int index_width = -1, double perturb = 0.0,
                                       int pad_rank = -1);

/**
 * Number-sum adaptor: frame * PREP^H SELECT PREP * frame^H with flag gadgets on
 * `flag_modes` and signed amplitudes sqrt(|lambda|/Gamma). Ancillas: flag at
 * bit n, index register above it.
 */
CMat number_sum_unitary(int n, const CMat &frame, const std::vector<int> &flag_modes,
                        const RVec &lambdas, int index_width);

/** Block of W (2 Pi_0 - I) W / 2 + I / 2 on one extra signal qubit: the square. */
CMat square_encoding(const CMat &w, int n, int ancillas);

struct LcuBranch {
  double coefficient = 0.0;
  CMat unitary;
  double alpha = 1.0;
  int ancillas = 0;
  double error = 0.0;  ///< restricted branch error, used for the bound
};

/** PREP-SELECT-PREP^H with amplitudes sqrt(|Omega_s| alpha_s / alpha). */
BlockEncoding lcu_multiplex(const std::vector<LcuBranch> &branches, int selector_width,
                            int n, int workspace_width = -1);

/**
 * Generic multiplexer: label s gets amplitude amps(s), phase phases[s] and
 * branch unitaries[s] (empty matrix = identity) padded to t workspace qubits.
 */
CMat multiplex_unitary(const RVec &amps, const std::vector<double> &phases,
                       const std::vector<CMat> &unitaries,
                       const std::vector<int> &branch_ancillas, int selector_width,
                       int workspace_width, int n);

struct HamEncodingOptions {
  int selector_width = -1;
  int workspace_width = -1;
  int channel_index_width = -1;
  int channel_pad_rank = -1;
  int sector = -1;                   ///< sector for the reported errors
  std::map<int, double> perturb;     ///< address -> angle offset
  std::vector<int> pivots;           ///< one-body pivots (empty: defaults)
};

BlockEncoding hamiltonian_block_encoding(const HamiltonianPool &pool,
                                         const HamEncodingOptions &opt = {});

/** One generator branch: block A_s/(2 alpha_s) with A_s = i(L - L^H). Two ancillas. */
BlockEncoding generator_branch(const RankOneLadder &l, int n, int n_occ, int pivot_u = -1,
                               int pivot_v = -1, double perturb = 0.0);

struct GenEncodingOptions {
  int selector_width = -1;
  int workspace_width = -1;
  double alpha_bar = -1.0;           ///< normalization override (compiled worst case)
  int sector = 2;
  std::map<int, double> perturb;
  std::vector<std::pair<int, int>> pivots;
};

/**
 * Block i sigma^(m) / alpha_bar, Hermitian, with the null branch at selector
 * label 0. exp(sigma) = exp(-i alpha_bar A) for the block A.
 */
BlockEncoding generator_block_encoding(const GeneratorPool &pool, const Mask &mask,
                                       const GenEncodingOptions &opt = {});

/** Top-left 2^n block. */
CMat extract_block(const CMat &w, int n);

/**
 * || Pi (block - target) Pi || with Pi the sector projector (sector < 0: full
 * space) further restricted to model_space when given.
 */
double restricted_block_error(const CMat &w, const FockOperator &target, int ancillas,
                              int sector,
                              const std::vector<std::uint64_t> *model_space = nullptr);

/** True when U maps each Hamming-weight sector of the low n bits into itself. */
bool preserves_sectors(const CMat &u, int n, double tol = 1e-11);

}  // namespace composer
