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

#include "composer/ladders.hpp"

#include <cmath>

#include "composer/errors.hpp"
#include "composer/fermion.hpp"

namespace composer {

namespace {

int argmax_abs(const CVec &u) {
  int best = 0;
  for (Eigen::Index k = 1; k < u.size(); ++k)
    if (std::abs(u(k)) > std::abs(u(best))) best = static_cast<int>(k);
  return best;
}

// Tail-norm recursion shared by both sectors. `mags` are the target
// magnitudes in ladder order, `pivot_mag` the pivot magnitude.
std::vector<double> recursion_angles(const std::vector<double> &mags, double pivot_mag) {
  const std::size_t m = mags.size();
  // tail[k] = sqrt(|u_r|^2 + sum_{j>=k} |u_j|^2)
  std::vector<double> tail(m + 1);
  tail[m] = pivot_mag;
  for (std::size_t k = m; k-- > 0;) tail[k] = std::hypot(tail[k + 1], mags[k]);
  std::vector<double> th(m);
  // atan2 gives 0 when both vanish and pi/2 when only the tail vanishes
  for (std::size_t k = 0; k < m; ++k) th[k] = std::atan2(mags[k], tail[k + 1]);
  return th;
}

void check_norm(const CVec &u) {
  const double nrm = u.norm();
  if (std::abs(nrm - 1.0) > 1e-10)
    throw NormalizationError("ladder target has norm " + std::to_string(nrm));
}

OpString excitation_ops(const std::vector<int> &cre, const std::vector<int> &ann) {
  OpString ops;
  for (int p : cre) ops.push_back({p, true});
  for (auto it = ann.rbegin(); it != ann.rend(); ++it) ops.push_back({*it, false});
  return ops;
}

void apply_x(CVec &state, int q) {
  const std::uint64_t bit = std::uint64_t{1} << q;
  for (std::uint64_t x = 0; x < static_cast<std::uint64_t>(state.size()); ++x)
    if (!(x & bit)) std::swap(state(x), state(x | bit));
}

void check_dim(const CVec &state, int n) {
  if (n > 30 || state.size() != (Eigen::Index{1} << n))
    throw ShapeError("state dimension " + std::to_string(state.size()) +
                     " does not match 2^" + std::to_string(n));
}

}  // namespace

void rotate_excitation(CVec &state, const std::vector<int> &creators,
                       const std::vector<int> &annihilators, double theta, double phi,
                       std::uint64_t ctrl_mask, std::uint64_t ctrl_value) {
  if (theta == 0.0) return;
  // E = a+_{c0} a+_{c1} ... a_{a1} a_{a0}; pairs (x, E x) span invariant planes
  const OpString ops = excitation_ops(creators, annihilators);
  const double c = std::cos(theta), s = std::sin(theta);
  const cplx eph = std::exp(kI * phi);
  const std::uint64_t dim = static_cast<std::uint64_t>(state.size());
  for (std::uint64_t x = 0; x < dim; ++x) {
    if ((x & ctrl_mask) != ctrl_value) continue;
    std::uint64_t y;
    int sg;
    if (!apply_string(ops, x, y, sg)) continue;
    const cplx cf = static_cast<double>(sg) * eph;
    const cplx ax = state(x), ay = state(y);
    state(x) = c * ax - std::conj(cf) * s * ay;
    state(y) = cf * s * ax + c * ay;
  }
}

void apply_mode_phase(CVec &state, int mode, double phi, std::uint64_t ctrl_mask,
                      std::uint64_t ctrl_value) {
  if (phi == 0.0) return;
  const cplx ph = std::exp(kI * phi);
  const std::uint64_t bit = std::uint64_t{1} << mode;
  for (std::uint64_t x = 0; x < static_cast<std::uint64_t>(state.size()); ++x)
    if ((x & bit) && (x & ctrl_mask) == ctrl_value) state(x) *= ph;
}

LadderSchedule one_electron_angles(const CVec &u_local, const std::vector<int> &modes,
                                   int n, int pivot, bool prep_form) {
  check_norm(u_local);
  const int m = static_cast<int>(modes.size());
  if (u_local.size() != m) throw ShapeError("ladder vector length does not match modes");
  if (pivot < 0) pivot = argmax_abs(u_local);
  if (pivot >= m) throw ValidationError("pivot out of range");
  LadderSchedule sch;
  sch.sector = Sector::OneElectron;
  sch.n = n;
  sch.pivot = modes[pivot];
  sch.prep_form = prep_form;
  sch.global_phase = std::abs(u_local(pivot)) > 0.0 ? std::arg(u_local(pivot)) : 0.0;
  const CVec u = u_local * std::exp(-kI * sch.global_phase);
  std::vector<double> mags;
  for (int k = 0; k < m; ++k) {
    if (k == pivot) continue;
    sch.ordering.push_back(modes[k]);
    mags.push_back(std::abs(u(k)));
    sch.phases.push_back(std::abs(u(k)) > 0.0 ? std::arg(u(k)) : 0.0);
  }
  sch.thetas = recursion_angles(mags, std::abs(u(pivot)));
  return sch;
}

LadderSchedule one_electron_angles(const CVec &u, int pivot, bool prep_form) {
  const int n = static_cast<int>(u.size());
  std::vector<int> modes(n);
  for (int k = 0; k < n; ++k) modes[k] = k;
  return one_electron_angles(u, modes, n, pivot, prep_form);
}

LadderSchedule two_electron_angles(const CVec &u_in, const std::vector<int> &modes, int n,
                                   int pivot_pair, bool prep_form) {
  check_norm(u_in);
  const int m = static_cast<int>(modes.size());
  if (u_in.size() != m * (m - 1) / 2)
    throw ShapeError("pair vector length does not match C(m,2)");
  if (pivot_pair < 0) pivot_pair = argmax_abs(u_in);
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) pairs.emplace_back(modes[a], modes[b]);
  LadderSchedule sch;
  sch.sector = Sector::TwoElectron;
  sch.n = n;
  sch.pivot_pair = pairs.at(pivot_pair);
  sch.prep_form = prep_form;
  sch.global_phase =
      std::abs(u_in(pivot_pair)) > 0.0 ? std::arg(u_in(pivot_pair)) : 0.0;
  const CVec u = u_in * std::exp(-kI * sch.global_phase);
  std::vector<double> mags;
  for (int k = 0; k < static_cast<int>(pairs.size()); ++k) {
    if (k == pivot_pair) continue;
    sch.pair_ordering.push_back(pairs[k]);
    mags.push_back(std::abs(u(k)));
    sch.phases.push_back(std::abs(u(k)) > 0.0 ? std::arg(u(k)) : 0.0);
  }
  sch.thetas = recursion_angles(mags, std::abs(u(pivot_pair)));
  return sch;
}

LadderSchedule two_electron_angles(const CVec &u_pairs, int n, int pivot_pair,
                                   bool prep_form) {
  std::vector<int> modes(n);
  for (int k = 0; k < n; ++k) modes[k] = k;
  return two_electron_angles(u_pairs, modes, n, pivot_pair, prep_form);
}

CVec apply_ladder_dense(const LadderSchedule &sch, const CVec &state, int n) {
  check_dim(state, n);
  CVec psi = state;
  if (sch.sector == Sector::OneElectron) {
    if (sch.prep_form) apply_x(psi, sch.pivot);
    for (std::size_t k = 0; k < sch.size(); ++k)
      rotate_excitation(psi, {sch.ordering[k]}, {sch.pivot}, sch.thetas[k], 0.0);
    for (std::size_t k = 0; k < sch.size(); ++k)
      apply_mode_phase(psi, sch.ordering[k], sch.phases[k]);
  } else {
    const auto [r, s] = sch.pivot_pair;
    if (sch.prep_form) {
      apply_x(psi, r);
      apply_x(psi, s);
    }
    for (std::size_t k = 0; k < sch.size(); ++k) {
      const auto [p, q] = sch.pair_ordering[k];
      rotate_excitation(psi, {p, q}, {r, s}, sch.thetas[k], sch.phases[k]);
    }
  }
  return psi;
}

CVec apply_ladder_inverse_dense(const LadderSchedule &sch, const CVec &state, int n) {
  check_dim(state, n);
  CVec psi = state;
  if (sch.sector == Sector::OneElectron) {
    for (std::size_t k = sch.size(); k-- > 0;)
      apply_mode_phase(psi, sch.ordering[k], -sch.phases[k]);
    for (std::size_t k = sch.size(); k-- > 0;)
      rotate_excitation(psi, {sch.ordering[k]}, {sch.pivot}, -sch.thetas[k], 0.0);
    if (sch.prep_form) apply_x(psi, sch.pivot);
  } else {
    const auto [r, s] = sch.pivot_pair;
    for (std::size_t k = sch.size(); k-- > 0;) {
      const auto [p, q] = sch.pair_ordering[k];
      rotate_excitation(psi, {p, q}, {r, s}, -sch.thetas[k], sch.phases[k]);
    }
    if (sch.prep_form) {
      apply_x(psi, s);
      apply_x(psi, r);
    }
  }
  return psi;
}

CMat ladder_unitary(const LadderSchedule &sch) {
  const Eigen::Index dim = Eigen::Index{1} << sch.n;
  CMat u(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    CVec e = CVec::Zero(dim);
    e(j) = 1.0;
    u.col(j) = apply_ladder_dense(sch, e, sch.n);
  }
  return u;
}

std::vector<double> tree_prep_angles(const RVec &amplitudes, int width) {
  const std::size_t dim = std::size_t{1} << width;
  if (static_cast<std::size_t>(amplitudes.size()) > dim)
    throw CapacityError("amplitude vector does not fit a " + std::to_string(width) +
                        "-qubit register");
  RVec a = RVec::Zero(static_cast<Eigen::Index>(dim));
  a.head(amplitudes.size()) = amplitudes;
  std::vector<double> angles;
  for (int level = 0; level < width; ++level) {
    const std::size_t block = dim >> level, half = block / 2;
    for (std::size_t v = 0; v < (std::size_t{1} << level); ++v) {
      const double left = a.segment(v * block, half).norm();
      const double right = a.segment(v * block + half, half).norm();
      angles.push_back(2.0 * std::atan2(right, left));
    }
  }
  return angles;
}

CMat tree_prep_unitary(const std::vector<double> &angles, int width) {
  const std::uint64_t dim = std::uint64_t{1} << width;
  if (angles.size() != dim - 1) throw ShapeError("tree prep needs 2^w - 1 angles");
  CMat p = CMat::Identity(dim, dim);
  std::size_t idx = 0;
  for (int level = 0; level < width; ++level) {
    const int tb = width - 1 - level;
    const std::uint64_t tbit = std::uint64_t{1} << tb;
    CMat u = CMat::Zero(dim, dim);
    for (std::uint64_t x = 0; x < dim; ++x) {
      if (x & tbit) continue;
      const std::uint64_t v = x >> (tb + 1);
      const double th = angles[idx + v];
      const double c = std::cos(0.5 * th), s = std::sin(0.5 * th);
      const std::uint64_t x1 = x | tbit;
      u(x, x) = c;
      u(x1, x) = s;
      u(x, x1) = -s;
      u(x1, x1) = c;
    }
    idx += std::size_t{1} << level;
    p = u * p;
  }
  return p;
}

OrbitalRotation givens_decompose(const RMat &q) {
  const int n = static_cast<int>(q.rows());
  if (q.cols() != n) throw ShapeError("orbital rotation must be square");
  if ((q.transpose() * q - RMat::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("orbital rotation is not orthogonal");
  OrbitalRotation out;
  out.n = n;
  RMat m = q;
  for (int j = 0; j + 1 < n; ++j)
    for (int i = n - 1; i > j; --i) {
      const int a = i - 1, b = i;
      const double th = std::atan2(m(b, j), m(a, j));
      const double c = std::cos(th), s = std::sin(th);
      const RVec ra = m.row(a), rb = m.row(b);
      m.row(a) = c * ra + s * rb;
      m.row(b) = -s * ra + c * rb;
      out.rotations.push_back({a, b, th});
    }
  out.flip_last = n > 0 && m(n - 1, n - 1) < 0.0;
  return out;
}

RMat complete_orthonormal(const RMat &cols) {
  const Eigen::Index n = cols.rows(), r = cols.cols();
  if (r == 0) return RMat::Identity(n, n);
  Eigen::HouseholderQR<RMat> qr(cols);
  RMat full = qr.householderQ() * RMat::Identity(n, n);
  for (Eigen::Index j = 0; j < r; ++j) full.col(j) = cols.col(j);
  // the trailing columns are already orthogonal to span(cols)
  return full;
}

void apply_orbital_rotation(CVec &state, const OrbitalRotation &rot, bool adjoint,
                            std::uint64_t ctrl_mask, std::uint64_t ctrl_value) {
  const double flip = rot.flip_last ? M_PI : 0.0;
  if (!adjoint) {
    if (rot.flip_last) apply_mode_phase(state, rot.n - 1, flip, ctrl_mask, ctrl_value);
    for (auto it = rot.rotations.rbegin(); it != rot.rotations.rend(); ++it)
      rotate_excitation(state, {it->upper}, {it->lower}, it->theta, 0.0, ctrl_mask,
                        ctrl_value);
  } else {
    for (const auto &g : rot.rotations)
      rotate_excitation(state, {g.upper}, {g.lower}, -g.theta, 0.0, ctrl_mask, ctrl_value);
    if (rot.flip_last) apply_mode_phase(state, rot.n - 1, flip, ctrl_mask, ctrl_value);
  }
}

CMat orbital_rotation_unitary(const OrbitalRotation &rot) {
  const Eigen::Index dim = Eigen::Index{1} << rot.n;
  CMat u(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    CVec e = CVec::Zero(dim);
    e(j) = 1.0;
    apply_orbital_rotation(e, rot);
    u.col(j) = e;
  }
  return u;
}

}  // namespace composer
