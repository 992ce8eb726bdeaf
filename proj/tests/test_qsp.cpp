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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "composer/errors.hpp"
#include "composer/qsp.hpp"
#include "test_util.hpp"

using namespace composer;
using namespace composer::testing;

namespace {

double grid_sup_error(const ChebyshevPoly &p, double alpha, int points = 10000) {
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = -1.0 + 2.0 * i / (points - 1);
    worst = std::max(worst, std::abs(p.eval(x) - std::exp(-kI * alpha * x)));
  }
  return worst;
}

GeneratorPool small_generator(std::uint64_t seed, double scale = 0.3) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  T2Tensor t2{3, 3, RMat(3, 3)};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t2.amps(i, j) = scale * g(rng);
  return nested_svd_t2(t2, 0.0, 0.0);
}

GeneratorPool tiny_generator(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  T2Tensor t2{2, 2, RMat(1, 1)};
  t2.amps(0, 0) = 0.2 + 0.1 * g(rng);
  return nested_svd_t2(t2, 0.0, 0.0);
}

}  // namespace

TEST(Bessel, MatchesStdLibrary) {
  for (double x : {0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 25.0, 60.0}) {
    const auto j = bessel_j_sequence(80, x);
    for (int k = 0; k <= 80; ++k)
      EXPECT_NEAR(j[k], std::cyl_bessel_j(static_cast<double>(k), x), 1e-13)
          << "x=" << x << " k=" << k;
  }
}

TEST(Bessel, ZeroArgument) {
  const auto j = bessel_j_sequence(5, 0.0);
  EXPECT_EQ(j[0], 1.0);
  for (int k = 1; k <= 5; ++k) EXPECT_EQ(j[k], 0.0);
}

TEST(Bessel, SumIdentity) {
  for (double x : {0.3, 3.0, 12.0}) {
    const auto j = bessel_j_sequence(60, x);
    double s = j[0] * j[0];
    for (int k = 1; k <= 60; ++k) s += 2.0 * j[k] * j[k];
    EXPECT_NEAR(s, 1.0, 1e-13);
  }
}

TEST(DegreeFor, ZeroAlpha) { EXPECT_EQ(degree_for(0.0, 1e-6), 0); }

TEST(DegreeFor, TailIsSmallestEven) {
  for (double a : {0.5, 1.0, 2.0, 4.0, 8.0})
    for (double eps : {1e-2, 1e-4, 1e-8, 1e-12}) {
      const int d = degree_for(a, eps);
      EXPECT_EQ(d % 2, 0);
      // independent tail from the standard library
      auto tail = [&](int dd) {
        double t = 0.0;
        for (int k = dd + 1; k <= dd + 200; ++k)
          t += 2.0 * std::abs(std::cyl_bessel_j(static_cast<double>(k), a));
        return t;
      };
      EXPECT_LE(tail(d), eps * (1.0 + 1e-9));
      if (d >= 2) EXPECT_GT(tail(d - 2), eps);
    }
}

TEST(DegreeFor, Monotone) {
  EXPECT_GE(degree_for(2.0, 1e-4), degree_for(2.0, 1e-2));
  int prev = 0;
  for (double a = 0.25; a <= 10.0; a += 0.25) {
    const int d = degree_for(a, 1e-6);
    EXPECT_GE(d, prev);
    prev = d;
  }
  prev = 0;
  for (double e = 1e-1; e > 1e-13; e /= 3.0) {
    const int d = degree_for(1.5, e);
    EXPECT_GE(d, prev);
    prev = d;
  }
}

TEST(DegreeFor, RejectsBadInput) {
  EXPECT_THROW(degree_for(-1.0, 1e-3), ValidationError);
  EXPECT_THROW(degree_for(1.0, 0.0), ValidationError);
  EXPECT_THROW(degree_for(1.0, 1.0), ValidationError);
}

TEST(JacobiAnger, ConstantPolynomial) {
  const auto p = jacobi_anger_coeffs(0.0, 0);
  ASSERT_EQ(p.coeffs.size(), 1);
  EXPECT_EQ(p.coeffs(0), cplx(1.0));
  EXPECT_EQ(p.eval(0.3), cplx(1.0));
  EXPECT_EQ(p.eps_poly, 0.0);
}

TEST(JacobiAnger, CoefficientFormula) {
  const auto p = jacobi_anger_coeffs(1.7, 12);
  for (int k = 0; k <= 12; ++k) {
    const cplx expect = std::pow(-kI, k) * (k == 0 ? 1.0 : 2.0) *
                        std::cyl_bessel_j(static_cast<double>(k), 1.7);
    EXPECT_LE(std::abs(p.coeffs(k) - expect), 1e-14);
  }
}

TEST(JacobiAnger, GridSupNormAlphaOne) {
  const auto p = jacobi_anger_coeffs(1.0, 10);
  EXPECT_LE(grid_sup_error(p, 1.0), p.eps_poly);
  const int d = degree_for(1.0, 1e-3);
  const auto q = jacobi_anger_coeffs(1.0, d);
  EXPECT_LE(grid_sup_error(q, 1.0), 1e-3);
}

TEST(JacobiAnger, SuperGeometricDecay) {
  const double a = 3.0;
  const auto p = jacobi_anger_coeffs(a, 30);
  double prev_ratio = 1.0;
  for (int k = 5; k < 29; ++k) {
    const double ratio = std::abs(p.coeffs(k + 1)) / std::abs(p.coeffs(k));
    EXPECT_LT(ratio, 1.0);
    EXPECT_LT(ratio, prev_ratio);
    prev_ratio = ratio;
  }
  EXPECT_LT(prev_ratio, 0.1);
}

TEST(JacobiAnger, BudgetGrid) {
  for (double a : {0.5, 1.0, 2.0, 4.0})
    for (double eps : {1e-4, 1e-8}) {
      const auto p = jacobi_anger_coeffs(a, degree_for(a, eps));
      EXPECT_LE(grid_sup_error(p, a), eps) << a << " " << eps;
    }
}

TEST(MatrixPoly, ZeroArgument) {
  for (int d : {0, 1}) {
    const auto p = jacobi_anger_coeffs(1.3, d);
    const CMat out = apply_matrix_poly(p, CMat::Zero(4, 4));
    EXPECT_LE((out - p.coeffs(0) * CMat::Identity(4, 4)).norm(), 0.0);
  }
  // higher even terms contribute T_2k(0) = (-1)^k
  const auto p = jacobi_anger_coeffs(1.3, 8);
  const CMat out = apply_matrix_poly(p, CMat::Zero(4, 4));
  EXPECT_LE((out - p.eval(0.0) * CMat::Identity(4, 4)).norm(), 1e-15);
  EXPECT_NEAR(std::abs(p.eval(0.0) - 1.0), 0.0, p.eps_poly);
}

TEST(MatrixPoly, DiagonalSigns) {
  const auto p = jacobi_anger_coeffs(2.0, 14);
  CMat a = CMat::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = -1.0;
  const CMat out = apply_matrix_poly(p, a);
  EXPECT_LE(std::abs(out(0, 0) - p.eval(1.0)), 1e-13);
  EXPECT_LE(std::abs(out(1, 1) - p.eval(-1.0)), 1e-13);
  EXPECT_EQ(out(0, 1), cplx(0.0));
}

TEST(MatrixPoly, EigendecompositionOracle) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 5; ++trial) {
    CMat h(8, 8);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) h(i, j) = cplx(g(rng), g(rng));
    h = (h + h.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    h /= es.eigenvalues().cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<CMat> es2(h);
    const double alpha = 1.5;
    const auto p = jacobi_anger_coeffs(alpha, degree_for(alpha, 1e-9));
    CVec ph(8);
    for (int k = 0; k < 8; ++k) ph(k) = std::exp(-kI * alpha * es2.eigenvalues()(k));
    const CMat exact = es2.eigenvectors() * ph.asDiagonal() * es2.eigenvectors().adjoint();
    EXPECT_LE(spectral_norm(apply_matrix_poly(p, h) - exact), p.eps_poly + 1e-13);
  }
}

TEST(MatrixPoly, SpectralBound) {
  const auto p = jacobi_anger_coeffs(1.0, 4);
  EXPECT_THROW(apply_matrix_poly(p, CMat(1.01 * CMat::Identity(2, 2))), SpectralBoundError);
  EXPECT_NO_THROW(apply_matrix_poly(p, CMat(CMat::Identity(2, 2))));
}

TEST(MatrixPoly, UnitarityDrift) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (double a : {0.5, 2.0, 6.0})
    for (double eps : {1e-3, 1e-6}) {
      CMat h(6, 6);
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) h(i, j) = cplx(g(rng), g(rng));
      h = (h + h.adjoint()).eval();
      h /= spectral_norm(h);
      const auto p = jacobi_anger_coeffs(a, degree_for(a, eps));
      const CMat u = apply_matrix_poly(p, h);
      EXPECT_LE(unitarity_defect(u), 3.0 * p.eps_poly);
    }
}

TEST(Injection, HermitianDiagonalUnitNorm) {
  const CMat e = injection_pattern(4);
  EXPECT_LE((e - e.adjoint()).norm(), 0.0);
  EXPECT_NEAR(spectral_norm(e), 1.0, 1e-14);
  EXPECT_LE((e - CMat(e.diagonal().asDiagonal())).norm(), 0.0);
}

TEST(ExpSigma, EmptyMask) {
  const auto pool = small_generator(3);
  const double eps = 1e-8;
  const auto r = exp_sigma_block(pool, Mask::none(), eps);
  const auto idx = sector_indices(pool.n_so, 2);
  const CMat blk = restrict_to(r.op.matrix, idx);
  EXPECT_LE(spectral_norm(blk - CMat::Identity(blk.rows(), blk.cols())), r.report.eps_poly);
  EXPECT_LE(r.report.measured_error, r.report.eps_poly);
}

TEST(ExpSigma, ExactWithoutInjection) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto pool = seed % 2 ? small_generator(seed) : tiny_generator(seed);
    for (double eps : {1e-4, 1e-8}) {
      const auto r = exp_sigma_block(pool, Mask::full(pool.ell_sigma()), eps);
      EXPECT_LE(r.report.eps_poly, eps);
      EXPECT_LE(r.report.measured_error, r.report.eps_poly + 1e-12) << seed;
    }
  }
}

TEST(ExpSigma, MatchesExpmOfGenerator) {
  const auto pool = small_generator(7);
  const auto mask = Mask::of({1, 2}, "m");
  const auto r = exp_sigma_block(pool, mask, 1e-10);
  const CMat sigma = dense_generator(pool, mask);
  const auto idx = sector_indices(pool.n_so, 2);
  const CMat exact = expm_antihermitian(restrict_to(sigma, idx));
  EXPECT_LE(spectral_norm(restrict_to(r.op.matrix, idx) - exact), 1e-9);
}

TEST(ExpSigma, SmallCoefficientWithInjection) {
  auto pool = tiny_generator(1);
  pool.ladders[0].coefficient = 0.01;
  pool.recompute_alpha_bar();
  const double eps = 1e-6;
  for (double ep : {1e-8, 1e-6, 1e-4}) {
    ExpSigmaOptions opt;
    opt.eps_prime = ep;
    const auto r = exp_sigma_block(pool, Mask::full(1), eps, opt);
    EXPECT_LE(r.report.measured_error, r.report.eps_poly + 10.0 * r.report.degree * ep);
  }
}

TEST(ExpSigma, LinearPropagation) {
  const auto pool = small_generator(9, 0.8);
  const double eps = 1e-10;
  ExpSigmaOptions opt;
  opt.degree = degree_for(pool.alpha_bar, eps);
  std::vector<double> cs;
  for (double ep : {1e-8, 1e-7, 1e-6, 1e-5, 1e-4}) {
    opt.eps_prime = ep;
    const auto r = exp_sigma_block(pool, Mask::full(pool.ell_sigma()), eps, opt);
    EXPECT_EQ(r.report.degree, opt.degree);
    EXPECT_LE(r.report.measured_error,
              r.report.eps_poly + r.report.propagated_error + 1e-12);
    cs.push_back(r.report.propagation_constant);
  }
  const double c0 = cs.front();
  EXPECT_GT(c0, 0.0);
  for (double c : cs) EXPECT_NEAR(c / c0, 1.0, 0.2);
}

TEST(ExpSigma, RejectsMaskOutsidePool) {
  const auto pool = tiny_generator(2);
  EXPECT_THROW(exp_sigma_block(pool, Mask::of({5}, "bad"), 1e-6), MaskError);
}

TEST(DegreeModel, FitResidual) {
  const auto fit = fit_degree_model({0.5, 1.0, 2.0, 4.0, 8.0}, {1e-2, 1e-4, 1e-6, 1e-8, 1e-10});
  EXPECT_GT(fit.c_alpha, 0.0);
  EXPECT_GT(fit.c_log, 0.0);
  EXPECT_LT(fit.rel_residual, 0.2);
  // even rounding of small degrees dominates the pointwise worst case
  EXPECT_LT(fit.max_rel_residual, 0.5);
}
