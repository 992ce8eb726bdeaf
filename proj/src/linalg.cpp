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

#include "composer/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace composer {

namespace {

double svd_norm(const CMat &a) {
  Eigen::BDCSVD<CMat> svd(a);
  const auto &s = svd.singularValues();
  return s.size() ? s(0) : 0.0;
}

}  // namespace

double spectral_norm(const CMat &a) {
  if (a.size() == 0) return 0.0;
  const Eigen::Index dim = std::max(a.rows(), a.cols());
  if (dim <= 256) return svd_norm(a);

  // power iteration on A^H A from a fixed start vector
  CVec x = CVec::Ones(a.cols()) / std::sqrt(static_cast<double>(a.cols()));
  for (Eigen::Index k = 0; k < a.cols(); ++k)
    x(k) += cplx(0.01 * std::sin(1.0 + k), 0.01 * std::cos(2.0 + k));
  x.normalize();
  double prev = 0.0;
  for (int it = 0; it < 500; ++it) {
    CVec y = a.adjoint() * (a * x);
    const double nrm = y.norm();
    if (nrm == 0.0) return 0.0;
    x = y / nrm;
    const double est = std::sqrt(nrm);
    if (std::abs(est - prev) <= 1e-13 * est) return est;
    prev = est;
  }
  return svd_norm(a);
}

double unitarity_defect(const CMat &u) {
  CMat d = u.adjoint() * u - CMat::Identity(u.cols(), u.cols());
  return d.cwiseAbs().maxCoeff();
}

CMat kron(const CMat &a, const CMat &b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMat expm_hermitian(const CMat &h, double t) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (h + h.adjoint()));
  CVec ph(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < ph.size(); ++k)
    ph(k) = std::exp(-kI * t * es.eigenvalues()(k));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

CMat expm_antihermitian(const CMat &s) {
  // S = -iK with K = iS Hermitian, so exp(S) = exp(-i K)
  return expm_hermitian(kI * s, 1.0);
}

std::vector<std::uint64_t> sector_indices(int n, int weight) {
  std::vector<std::uint64_t> out;
  const std::uint64_t dim = std::uint64_t{1} << n;
  for (std::uint64_t x = 0; x < dim; ++x)
    if (popcount(x) == weight) out.push_back(x);
  return out;
}

CMat restrict_to(const CMat &m, const std::vector<std::uint64_t> &idx) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  CMat out(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) out(i, j) = m(idx[i], idx[j]);
  return out;
}

int ceil_log2(std::uint64_t m) {
  int a = 0;
  while ((std::uint64_t{1} << a) < m) ++a;
  return a;
}

}  // namespace composer
