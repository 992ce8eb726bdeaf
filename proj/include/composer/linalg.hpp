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

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

namespace composer {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

constexpr cplx kI{0.0, 1.0};

/** Largest singular value. Power iteration on A^H A for big inputs, SVD otherwise. */
double spectral_norm(const CMat &a);

/** max_ij |A^H A - I|_ij */
double unitarity_defect(const CMat &u);

/** Kronecker product a (x) b; a acts on the more significant bits. */
CMat kron(const CMat &a, const CMat &b);

/** exp(-i t H) for Hermitian H via eigendecomposition. */
CMat expm_hermitian(const CMat &h, double t);

/** exp(S) for anti-Hermitian S via eigendecomposition of iS. */
CMat expm_antihermitian(const CMat &s);

/** Basis indices of an n-bit register with exactly `weight` set bits, ascending. */
std::vector<std::uint64_t> sector_indices(int n, int weight);

/** Restrict a matrix to the rows/cols listed. */
CMat restrict_to(const CMat &m, const std::vector<std::uint64_t> &idx);

/** Number of set bits. */
inline int popcount(std::uint64_t x) { return __builtin_popcountll(x); }

/** Smallest a with 2^a >= m (0 for m <= 1). */
int ceil_log2(std::uint64_t m);

}  // namespace composer
