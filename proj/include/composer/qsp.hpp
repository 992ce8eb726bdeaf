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
 * Truncated Jacobi-Anger expansion of exp(-i a x) in Chebyshev polynomials and
 * its application to block-encoded Hermitian generators.
 *
 *   exp(-i a x) = sum_k (-i)^k (2 - delta_k0) J_k(a) T_k(x)
 *
 * The polynomial is applied with the three-term recurrence on matrices; phase
 * factors for a physical QSP sequence are not synthesized.
 */
#pragma once

#include <vector>

#include "composer/factorization.hpp"
#include "composer/linalg.hpp"
#include "composer/mask.hpp"
#include "composer/oracle_sim.hpp"

namespace composer {

struct ChebyshevPoly {
  int degree = 0;
  CVec coeffs;  ///< length degree + 1
  double target_alpha = 0.0;
  double eps_poly = 0.0;  ///< certified tail bound sum_{k>d} 2|J_k|

  cplx eval(double x) const;
};

/** J_0..J_kmax at x >= 0 by Miller's downward recurrence. */
std::vector<double> bessel_j_sequence(int kmax, double x);

/** sum_{k>d} 2|J_k(alpha)|. */
double jacobi_anger_tail(double alpha, int d);

/** Smallest even d with a tail no larger than eps. */
int degree_for(double alpha, double eps);

ChebyshevPoly jacobi_anger_coeffs(double alpha, int d);

/** P_d(A) for Hermitian A with ||A|| <= 1; throws SpectralBoundError otherwise. */
CMat apply_matrix_poly(const ChebyshevPoly &poly, const CMat &a);
FockOperator apply_matrix_poly(const ChebyshevPoly &poly, const FockOperator &a);

/** Deterministic Hermitian, number-diagonal pattern of unit norm used to inject block errors. */
CMat injection_pattern(int n);

struct ExpSigmaReport {
  int degree = 0;
  double alpha_bar = 0.0;
  double eps_poly = 0.0;      ///< certified polynomial error
  double eps_prime = 0.0;     ///< injected block error
  int sector = 2;
  double measured_error = 0.0;     ///< ||P_d(A') - exp(sigma)|| on the sector
  double propagated_error = 0.0;   ///< ||P_d(A') - P_d(A)|| on the sector
  double propagation_constant = 0.0;  ///< propagated_error / (d eps_prime)
};

struct ExpSigmaResult {
  FockOperator op;  ///< approximation of exp(sigma^(m)) on the system register
  ExpSigmaReport report;
};

struct ExpSigmaOptions {
  double eps_prime = 0.0;
  int sector = 2;
  double alpha_bar = -1.0;  ///< global normalization; default is the pool's
  int degree = -1;          ///< default degree_for(alpha_bar, eps_poly)
};

/**
 * Builds the masked generator block from the dense encoding, optionally adds
 * eps_prime times the injection pattern, applies the Jacobi-Anger polynomial
 * and compares with the exact exponential.
 */
ExpSigmaResult exp_sigma_block(const GeneratorPool &pool, const Mask &mask, double eps_poly,
                               const ExpSigmaOptions &opt = {});

/** Least-squares fit d ~ c1 alpha + c2 log(1/eps) over a grid of degree_for values. */
struct DegreeFit {
  double c_alpha = 0.0;
  double c_log = 0.0;
  double rel_residual = 0.0;      ///< ||fit - d||_2 / ||d||_2
  double max_rel_residual = 0.0;  ///< worst pointwise |fit - d| / d
};

DegreeFit fit_degree_model(const std::vector<double> &alphas, const std::vector<double> &epss);

}  // namespace composer
