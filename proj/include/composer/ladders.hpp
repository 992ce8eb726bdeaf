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
 * Givens and pair-Givens ladders that move amplitude out of a pivot mode
 * (or pivot pair) one target at a time.
 *
 * One-electron Givens:  G_pr(t) = exp[t (a+_p a_r - a+_r a_p)]
 * Pair-Givens:          exp[t (e^{i f} a+_p a+_q a_s a_r - h.c.)]
 *
 * Prep form applies X on the pivot first, then the Givens sequence, then the
 * phase layer e^{i f_p n_p}. The prepared state equals the target up to the
 * stored global phase.
 */
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "composer/linalg.hpp"

namespace composer {

enum class Sector { OneElectron, TwoElectron };

struct LadderSchedule {
  Sector sector = Sector::OneElectron;
  int n = 0;  ///< register size
  int pivot = 0;
  std::pair<int, int> pivot_pair{0, 1};
  std::vector<int> ordering;                        ///< one-electron targets
  std::vector<std::pair<int, int>> pair_ordering;   ///< two-electron targets
  std::vector<double> thetas;
  std::vector<double> phases;
  double global_phase = 0.0;  ///< arg of the pivot amplitude that was divided out
  bool prep_form = true;

  std::size_t size() const { return thetas.size(); }
};

/** Pivot -1 selects the largest-magnitude entry (lowest index on ties). */
LadderSchedule one_electron_angles(const CVec &u, int pivot = -1, bool prep_form = true);

/**
 * Ladder over a subset of modes of an n-qubit register. u_local is indexed by
 * position in `modes`; pivot is a local position or -1.
 */
LadderSchedule one_electron_angles(const CVec &u_local, const std::vector<int> &modes,
                                   int n, int pivot = -1, bool prep_form = true);

/**
 * u_pairs is indexed by the lexicographic pairs of `modes` (ascending mode
 * labels inside a register of n qubits). pivot_pair is a local pair index, or
 * -1 for the arg-max pair.
 */
LadderSchedule two_electron_angles(const CVec &u_pairs, const std::vector<int> &modes,
                                   int n, int pivot_pair = -1, bool prep_form = true);

/** Convenience: pairs over all n modes. */
LadderSchedule two_electron_angles(const CVec &u_pairs, int n, int pivot_pair = -1,
                                   bool prep_form = true);

/** Apply the ladder to a 2^n state vector. */
CVec apply_ladder_dense(const LadderSchedule &sched, const CVec &state, int n);

/** Apply the inverse: reversed gate order with negated angles and phases. */
CVec apply_ladder_inverse_dense(const LadderSchedule &sched, const CVec &state, int n);

/** Dense 2^n unitary of a schedule. */
CMat ladder_unitary(const LadderSchedule &sched);

/**
 * Binary-tree amplitude loading on a w-qubit register. Angles are listed level
 * by level from the most significant bit; node v of level l is an RY(angle)
 * on bit w-1-l controlled on the higher bits equal to v.
 */
std::vector<double> tree_prep_angles(const RVec &amplitudes, int width);
CMat tree_prep_unitary(const std::vector<double> &angles, int width);

/** Single-particle Givens network for a real orthogonal matrix. */
struct OrbitalRotation {
  int n = 0;
  struct Rot {
    int lower, upper;  ///< acts as exp[t (a+_upper a_lower - h.c.)]
    double theta;
  };
  std::vector<Rot> rotations;  ///< applied last-to-first on states
  bool flip_last = false;      ///< determinant -1 handled as e^{i pi n_{n-1}}
};

/**
 * Q = r_1 r_2 ... r_m D with nearest-neighbour rotations in a fixed pattern;
 * the Fock-space image G satisfies G a+_j G^H = sum_p Q_pj a+_p.
 */
OrbitalRotation givens_decompose(const RMat &q);

/** Complete n x R orthonormal columns to an n x n orthogonal matrix. */
RMat complete_orthonormal(const RMat &cols);

void apply_orbital_rotation(CVec &state, const OrbitalRotation &rot, bool adjoint = false,
                            std::uint64_t ctrl_mask = 0, std::uint64_t ctrl_value = 0);
CMat orbital_rotation_unitary(const OrbitalRotation &rot);

// In-place kernels, also used by the gate-level executor. Only basis indices
// with (index & ctrl_mask) == ctrl_value are touched.

/** exp[t (e^{i f} E - h.c.)] with E the operator string creators..annihilators. */
void rotate_excitation(CVec &state, const std::vector<int> &creators,
                       const std::vector<int> &annihilators, double theta, double phi,
                       std::uint64_t ctrl_mask = 0, std::uint64_t ctrl_value = 0);

/** e^{i f n_p} */
void apply_mode_phase(CVec &state, int mode, double phi, std::uint64_t ctrl_mask = 0,
                      std::uint64_t ctrl_value = 0);

}  // namespace composer
