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

#pragma once

#include <cmath>
#include <random>

#include "composer/linalg.hpp"

namespace composer::testing {

inline CVec random_unit(std::mt19937_64 &rng, int n) {
  std::normal_distribution<double> g;
  CVec v(n);
  for (int k = 0; k < n; ++k) v(k) = cplx(g(rng), g(rng));
  return v / v.norm();
}

inline RVec random_real_unit(std::mt19937_64 &rng, int n) {
  std::normal_distribution<double> g;
  RVec v(n);
  for (int k = 0; k < n; ++k) v(k) = g(rng);
  return v / v.norm();
}

inline RMat random_symmetric(std::mt19937_64 &rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = u(rng);
  return 0.5 * (m + m.transpose());
}

inline RMat random_orthogonal(std::mt19937_64 &rng, int n) {
  std::normal_distribution<double> g;
  RMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  Eigen::HouseholderQR<RMat> qr(m);
  return qr.householderQ() * RMat::Identity(n, n);
}

inline CVec basis(int dim, int k) {
  CVec e = CVec::Zero(dim);
  e(k) = 1.0;
  return e;
}

/** Max |a - b| up to a global phase fixed on the largest entry of b. */
inline double phase_free_distance(const CVec &a, const CVec &b) {
  Eigen::Index k;
  b.cwiseAbs().maxCoeff(&k);
  if (std::abs(a(k)) == 0.0) return (a - b).cwiseAbs().maxCoeff();
  const cplx ph = b(k) / a(k) * std::abs(a(k)) / std::abs(b(k));
  return (a * ph - b).cwiseAbs().maxCoeff();
}

}  // namespace composer::testing
