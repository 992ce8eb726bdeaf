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

#include "composer/qsp.hpp"

#include <array>
#include <cmath>

#include "composer/errors.hpp"

namespace composer {

cplx ChebyshevPoly::eval(double x) const {
  cplx acc = 0.0;
  double tkm1 = 1.0, tk = x;
  for (int k = 0; k <= degree; ++k) {
    const double t = k == 0 ? 1.0 : (k == 1 ? x : 2.0 * x * tk - tkm1);
    if (k >= 2) {
      tkm1 = tk;
      tk = t;
    }
    acc += coeffs(k) * t;
  }
  return acc;
}

std::vector<double> bessel_j_sequence(int kmax, double x) {
  if (kmax < 0) throw ValidationError("kmax must be non-negative");
  std::vector<double> out(kmax + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  if (x < 0.0) throw ValidationError("bessel_j_sequence expects x >= 0");
  // the sqrt term keeps the start well inside the evanescent region for large x
  int start = kmax + 20 + static_cast<int>(std::ceil(x)) +
              10 * static_cast<int>(std::ceil(std::sqrt(x)));
  if (start % 2) ++start;
  std::vector<double> j(start + 2, 0.0);
  j[start] = 1e-30;
  for (int k = start; k >= 1; --k) {
    j[k - 1] = (2.0 * k / x) * j[k] - j[k + 1];
    if (std::abs(j[k - 1]) > 1e250)
      for (int m = k - 1; m <= start; ++m) j[m] *= 1e-250;
  }
  double norm = j[0];
  for (int k = 2; k <= start; k += 2) norm += 2.0 * j[k];
  for (int k = 0; k <= kmax; ++k) out[k] = j[k] / norm;
  return out;
}

double jacobi_anger_tail(double alpha, int d) {
  if (alpha == 0.0) return 0.0;
  const int kmax = std::max(d, static_cast<int>(std::ceil(alpha))) + 60;
  const auto j = bessel_j_sequence(kmax, alpha);
  double tail = 0.0;
  for (int k = kmax; k > d; --k) tail += 2.0 * std::abs(j[k]);
  return tail;
}

int degree_for(double alpha, double eps) {
  if (alpha < 0.0) throw ValidationError("alpha must be non-negative");
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("eps must lie in (0, 1)");
  if (alpha == 0.0) return 0;
  const int kmax = static_cast<int>(std::ceil(2.0 * alpha)) + 100;
  const auto j = bessel_j_sequence(kmax, alpha);
  // suffix[k] = sum_{m >= k} 2|J_m|
  std::vector<double> suffix(kmax + 2, 0.0);
  for (int k = kmax; k >= 0; --k) suffix[k] = suffix[k + 1] + 2.0 * std::abs(j[k]);
  for (int d = 0; d < kmax; d += 2)
    if (suffix[d + 1] <= eps) return d;
  throw ValidationError("degree_for: tolerance not reachable");
}

ChebyshevPoly jacobi_anger_coeffs(double alpha, int d) {
  if (d < 0) throw ValidationError("degree must be non-negative");
  ChebyshevPoly p;
  p.degree = d;
  p.target_alpha = alpha;
  p.coeffs.resize(d + 1);
  const auto j = bessel_j_sequence(d, alpha);
  cplx ik = 1.0;
  for (int k = 0; k <= d; ++k) {
    p.coeffs(k) = ik * (k == 0 ? 1.0 : 2.0) * j[k];
    ik *= -kI;
  }
  p.eps_poly = jacobi_anger_tail(alpha, d);
  return p;
}

CMat apply_matrix_poly(const ChebyshevPoly &poly, const CMat &a) {
  if (a.rows() != a.cols()) throw ShapeError("polynomial argument must be square");
  const double nrm = spectral_norm(a);
  if (nrm > 1.0 + 1e-9)
    throw SpectralBoundError("block norm " + std::to_string(nrm) + " exceeds 1");
  const Eigen::Index n = a.rows();
  CMat tkm1 = CMat::Identity(n, n);
  CMat out = poly.coeffs(0) * tkm1;
  if (poly.degree == 0) return out;
  CMat tk = a;
  out += poly.coeffs(1) * tk;
  for (int k = 2; k <= poly.degree; ++k) {
    CMat next = 2.0 * a * tk - tkm1;
    tkm1 = std::move(tk);
    tk = std::move(next);
    out += poly.coeffs(k) * tk;
  }
  return out;
}

FockOperator apply_matrix_poly(const ChebyshevPoly &poly, const FockOperator &a) {
  return {apply_matrix_poly(poly, a.matrix), a.n, "P_d(" + a.tag + ")"};
}

CMat injection_pattern(int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  RVec d(dim);
  for (Eigen::Index x = 0; x < dim; ++x)
    d(x) = std::cos(0.7 * static_cast<double>(x) + 0.3 * popcount(static_cast<std::uint64_t>(x)));
  d /= d.cwiseAbs().maxCoeff();
  return d.cast<cplx>().asDiagonal();
}

ExpSigmaResult exp_sigma_block(const GeneratorPool &pool, const Mask &mask, double eps_poly,
                               const ExpSigmaOptions &opt) {
  mask.check(pool.ell_sigma());
  const int n = pool.n_so;
  const double abar = opt.alpha_bar > 0.0 ? opt.alpha_bar : pool.alpha_bar;
  ExpSigmaResult res;
  res.report.alpha_bar = abar;
  res.report.eps_prime = opt.eps_prime;
  res.report.sector = opt.sector;
  const Eigen::Index dim = Eigen::Index{1} << n;

  CMat a = CMat::Zero(dim, dim);
  if (abar > 0.0 && !pool.ladders.empty()) {
    GenEncodingOptions go;
    go.alpha_bar = abar;
    go.sector = opt.sector;
    a = generator_block_encoding(pool, mask, go).block();
  }
  const int d = opt.degree >= 0 ? opt.degree : (abar > 0.0 ? degree_for(abar, eps_poly) : 0);
  const ChebyshevPoly poly = jacobi_anger_coeffs(abar, d);
  res.report.degree = d;
  res.report.eps_poly = poly.eps_poly;

  const CMat p0 = apply_matrix_poly(poly, a);
  CMat p = p0;
  if (opt.eps_prime > 0.0) {
    CMat ap = a + opt.eps_prime * injection_pattern(n);
    const double nrm = spectral_norm(ap);
    if (nrm > 1.0) ap /= nrm;
    p = apply_matrix_poly(poly, ap);
  }
  const CMat exact = exact_exp_sigma(pool, mask);
  std::vector<std::uint64_t> idx;
  if (opt.sector >= 0) {
    idx = sector_indices(n, opt.sector);
  } else {
    for (std::uint64_t x = 0; x < static_cast<std::uint64_t>(dim); ++x) idx.push_back(x);
  }
  res.report.measured_error = spectral_norm(restrict_to(p - exact, idx));
  res.report.propagated_error = spectral_norm(restrict_to(p - p0, idx));
  if (d > 0 && opt.eps_prime > 0.0)
    res.report.propagation_constant = res.report.propagated_error / (d * opt.eps_prime);
  res.op = {p, n, "exp(sigma)"};
  return res;
}

DegreeFit fit_degree_model(const std::vector<double> &alphas, const std::vector<double> &epss) {
  std::vector<double> ys;
  std::vector<std::array<double, 2>> xs;
  for (double a : alphas)
    for (double e : epss) {
      xs.push_back({a, std::log(1.0 / e)});
      ys.push_back(degree_for(a, e));
    }
  RMat m(xs.size(), 2);
  RVec y(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    m(i, 0) = xs[i][0];
    m(i, 1) = xs[i][1];
    y(i) = ys[i];
  }
  const RVec c = m.colPivHouseholderQr().solve(y);
  DegreeFit fit{c(0), c(1), 0.0, 0.0};
  fit.rel_residual = (m * c - y).norm() / y.norm();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (y(i) == 0.0) continue;
    const double pred = c(0) * xs[i][0] + c(1) * xs[i][1];
    fit.max_rel_residual = std::max(fit.max_rel_residual, std::abs(pred - y(i)) / y(i));
  }
  return fit;
}

}  // namespace composer
