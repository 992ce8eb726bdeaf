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
 * Compile-once circuit skeleton and the dial stage.
 *
 * A skeleton fixes every gate, qubit and control of the Hamiltonian and
 * generator PREP-SELECT-PREP^H blocks; rotation angles and phases live in
 * named slots that a DialSheet binds. Slot ids are structural paths such as
 * "G/3/u/2" (generator address 3, U ladder, gate 2).
 *
 * Register layout matches the dense oracle: system qubits [0, n), workspace
 * [n, n + t), selector [n + t, n + t + w).
 */
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "composer/factorization.hpp"
#include "composer/linalg.hpp"
#include "composer/mask.hpp"
#include "composer/oracle_sim.hpp"

namespace composer {

struct Connectivity {
  enum class Kind { AllToAll, LinearHeavyHex, Grid };
  Kind kind = Kind::AllToAll;
  int param = 0;  ///< d_g for linear/heavy-hex, grid side for grid

  /** "full", "linear:<d_g>" or "grid:<L>". */
  std::string tag() const;
  static Connectivity parse(const std::string &s);
};

enum class GateKind {
  Givens,       ///< exp[t (a+_q0 a_q1 - h.c.)], angle slot
  PairGivens,   ///< exp[t (e^{if} a+_q0 a+_q1 a_q3 a_q2 - h.c.)], angle and phase slot
  Phase,        ///< e^{i f n_q0}
  X,
  H,
  Cnot,         ///< X on q1 when q0 = 1
  Ry,           ///< [[c, -s], [s, c]] with half angles
  ZeroReflect,  ///< I - 2|0..0><0..0| over the listed qubits
  GlobalPhase,  ///< e^{i f} on the controlled subspace, no targets
};

const char *to_string(GateKind k);

struct Gate {
  GateKind kind = GateKind::X;
  std::vector<int> qubits;
  std::vector<std::pair<int, int>> controls;  ///< (qubit, required value)
  std::string slot;      ///< empty for fixed gates
  bool inverse = false;  ///< negate the bound angle (phase for Phase/GlobalPhase)
  double fixed = 0.0;    ///< parameter of slot-less parameterized gates
};

struct Adaptor {
  char block = 'H';  ///< 'H' Hamiltonian, 'G' generator
  int address = 0;
  std::string kind;  ///< one-body, channel, pair, null
  std::vector<int> pivots;
  std::vector<Gate> gates;
};

/** Structural data a skeleton is compiled for. */
struct SkeletonLayout {
  int n = 0;
  int n_occ = 0;
  int ell_one_body = 0;
  bool spin_paired = true;
  int ell_channels = 0;
  int ell_sigma = 0;
  int channel_rank_max = -1;  ///< -1: n

  int ell_H() const { return ell_one_body + ell_channels; }
};

SkeletonLayout layout_of(const HamiltonianPool &ham, const GeneratorPool &gen);

struct CircuitSkeleton {
  SkeletonLayout layout;
  int n_system = 0;
  int selector_width = 0;  ///< max of the two widths below
  int selector_width_h = 0;
  int selector_width_sigma = 0;
  int workspace_width = 0;
  int channel_index_width = 0;
  int qsp_degree = 0;
  double alpha_bar = 0.0;  ///< compiled worst-case generator normalization
  Connectivity connectivity;
  PivotTable pivots;
  std::vector<Gate> h_prep;  ///< PREP^H is the reverse with inverse flags
  std::vector<Adaptor> h_select;
  std::vector<Gate> g_prep;
  std::vector<Adaptor> g_select;  ///< address 0 is the null branch
  std::vector<std::string> prep_slots;
  std::vector<std::string> qsp_slots;
  std::string fingerprint;

  int total_qubits() const { return n_system + workspace_width + selector_width; }
  /** Every slot id in gate order (duplicates removed). */
  std::vector<std::string> slots() const;
};

/**
 * Emits the fixed gate structure. selector_width -1 uses
 * ceil(log2 max(ell_H, ell_sigma + 1)); a narrower override throws CapacityError.
 */
CircuitSkeleton compile_skeleton(const SkeletonLayout &layout, const PivotTable &pivots,
                                 const Connectivity &conn, int qsp_degree, double alpha_bar,
                                 int selector_width = -1);

/** SHA-256 hex digest of the canonical gate stream; angles never enter. */
std::string fabric_fingerprint(const CircuitSkeleton &skel);

struct DialSheet {
  std::string skeleton_fingerprint;
  std::map<std::string, double> angle_bindings;
  std::map<std::string, double> phase_bindings;
  std::string mask_id;
  std::vector<int> mask_indices;
  std::vector<double> ham_coeffs;  ///< Omega_s
  std::vector<double> gen_coeffs;  ///< omega_s
  double alpha = 0.0;              ///< Hamiltonian LCU normalization
  double alpha_bar = 0.0;
};

/**
 * Binds every slot from the pools. Pools may be smaller than compiled; the
 * surplus branches get zero amplitude. Throws BindError on a shape mismatch.
 */
DialSheet dial(const CircuitSkeleton &skel, const HamiltonianPool &ham,
               const GeneratorPool &gen, const Mask &mask);

/** Throws BindError unless the sheet binds exactly the skeleton's slots. */
void check_dial(const CircuitSkeleton &skel, const DialSheet &sheet);

enum class SkeletonBlock { Hamiltonian, Generator };

/** Gate-level statevector execution of one PREP-SELECT-PREP^H block. */
CVec execute_block(const CircuitSkeleton &skel, const DialSheet &sheet, SkeletonBlock block,
                   const CVec &state);

/** Columns of the block unitary for the given input basis states. */
CMat execute_columns(const CircuitSkeleton &skel, const DialSheet &sheet, SkeletonBlock block,
                     const std::vector<std::uint64_t> &inputs);

/** Applies one gate with the given parameter to a state over `qubits` qubits. */
void apply_gate(CVec &state, const Gate &g, double angle, double phase);

}  // namespace composer
