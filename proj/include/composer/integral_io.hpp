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
 * Electronic-structure integrals in the interleaved spin-orbital basis.
 *
 * Spatial orbital k maps to spin orbitals 2k (alpha) and 2k+1 (beta).
 * Two-electron integrals are stored in physicists' order <pq|rs>.
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "composer/linalg.hpp"

namespace composer {

struct IntegralSet {
  int n_spatial = 0;
  int n_so = 0;
  int n_elec = 0;
  double e_nn = 0.0;
  RMat h;                   ///< one-body, n_so x n_so
  std::vector<double> eri;  ///< <pq|rs>, row-major over (p,q,r,s)
  RVec orb_energies;        ///< length n_so, or empty when not supplied

  std::size_t eri_index(int p, int q, int r, int s) const {
    const std::size_t n = static_cast<std::size_t>(n_so);
    return ((static_cast<std::size_t>(p) * n + q) * n + r) * n + s;
  }
  double eri_at(int p, int q, int r, int s) const {
    return eri[eri_index(p, q, r, s)];
  }
  int n_occ() const { return n_elec; }
  int n_virt() const { return n_so - n_elec; }
  bool has_orb_energies() const { return orb_energies.size() == n_so; }
};

/** Build the spin-orbital set from spatial data; eri_spatial is chemists' (pq|rs). */
IntegralSet from_spatial(int n_spatial, int n_elec, double e_nn,
                         const RMat &h_spatial,
                         const std::vector<double> &eri_spatial,
                         const RVec &orb_energies_spatial = RVec());

IntegralSet parse_fcidump(std::istream &in);
IntegralSet parse_fcidump_text(const std::string &text);
IntegralSet load_fcidump(const std::string &path);

/** Writes the spatial content back out (requires spin-restricted data). */
std::string write_fcidump(const IntegralSet &ints);

/**
 * Deterministic random instance. The raw integrals are rotated to the canonical
 * closed-shell orbitals of the self-consistent Fock operator so that the stored
 * orbital energies are the Fock eigenvalues.
 */
IntegralSet synth_instance(std::uint64_t seed, int n_spatial, int n_elec);

/** h_pq - 1/2 sum_s <pq|ss>. */
RMat mean_field_shift(const IntegralSet &ints);

/** M[(p,r),(q,s)] = <pq|rs>, dimension n_so^2. */
RMat supermatrix(const IntegralSet &ints);
double supermatrix_min_eigenvalue(const IntegralSet &ints);

/** Checks Hermiticity and the symmetry images; throws ValidationError. */
void validate(const IntegralSet &ints);

/** True when alpha and beta blocks are equal and uncoupled. */
bool is_spin_restricted(const RMat &h_so, double tol = 1e-12);

/** Spin-orbital Fock matrix for occupation of modes 0..n_elec-1. */
RMat closed_shell_fock(const IntegralSet &ints);

/** Orbital energies: supplied ones, or the sorted Fock eigenvalues. */
RVec orbital_energies(const IntegralSet &ints);

bool approx_equal(const IntegralSet &a, const IntegralSet &b, double tol);

}  // namespace composer
