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

#include "composer/mask_engine.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>

#include "composer/errors.hpp"
#include "composer/fermion.hpp"
#include "composer/integral_io.hpp"
#include "composer/oracle_sim.hpp"
#include "composer/qsp.hpp"

namespace composer {

SandwichResult similarity_sandwich(const HamiltonianPool &ham, const GeneratorPool &gen,
                                   const Mask &mask,
                                   const std::vector<std::uint64_t> &model_space,
                                   double eps_poly, const SandwichOptions &opt) {
  const int n = ham.n_so;
  if (n > 8) throw ValidationError("dense sandwich limited to n <= 8");
  if (gen.n_so != n) throw ValidationError("generator and Hamiltonian registers differ");
  const int sector = opt.sector >= 0 ? opt.sector : ham.n_elec;
  for (auto x : model_space)
    if (x >= (std::uint64_t{1} << n) || popcount(x) != sector)
      throw SectorError("model-space determinant " + std::to_string(x) + " is not in the " +
                        std::to_string(sector) + "-electron sector");
  const auto idx = model_space.empty() ? sector_indices(n, sector) : model_space;

  HamEncodingOptions ho;
  ho.sector = sector;
  const auto hbe = hamiltonian_block_encoding(ham, ho);
  ExpSigmaOptions eo;
  eo.sector = sector;
  eo.eps_prime = opt.eps_prime;
  eo.alpha_bar = opt.alpha_bar;
  const auto ex = exp_sigma_block(gen, mask, eps_poly, eo);

  const CMat &u = ex.op.matrix;
  const CMat eff = u.adjoint() * hbe.block() * u;
  const double alpha = hbe.report.alpha;
  const CMat e = exact_exp_sigma(gen, mask);
  const CMat exact = e.adjoint() * dense_pool_hamiltonian(ham, false) * e / alpha;

  SandwichResult res;
  res.block = restrict_to(eff, idx);
  res.exact = restrict_to(exact, idx);
  auto &r = res.report;
  r.mask_id = mask.label;
  r.sector = sector;
  r.alpha = alpha;
  r.measured_error = spectral_norm(res.block - res.exact);
  r.eps_exp = ex.report.measured_error;
  r.eps_lcu = hbe.report.measured_error;
  r.budget = 2.0 * r.eps_exp + r.eps_lcu;
  r.within_budget = r.measured_error <= (1.0 + opt.slack) * r.budget + 1e-12;
  r.hermiticity_defect = spectral_norm(res.block - res.block.adjoint());
  r.qsp_degree = ex.report.degree;
  r.model_space = idx;
  return res;
}

CMat matrix_elements(const CMat &block, const std::vector<CVec> &bras,
                     const std::vector<CVec> &kets) {
  if (block.rows() != block.cols()) throw ShapeError("block must be square");
  CMat out(static_cast<Eigen::Index>(bras.size()), static_cast<Eigen::Index>(kets.size()));
  for (const auto *set : {&bras, &kets})
    for (const auto &v : *set)
      if (v.size() != block.rows()) throw ShapeError("state does not match the block");
  for (std::size_t j = 0; j < kets.size(); ++j) {
    const CVec hk = block * kets[j];
    for (std::size_t i = 0; i < bras.size(); ++i)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = bras[i].dot(hk);
  }
  return out;
}

GcimResult gcim_subspace_solve(const CMat &h, const std::vector<CVec> &basis,
                               double rel_threshold) {
  if (basis.empty()) throw DegenerateBasisError("empty basis");
  for (const auto &v : basis)
    if (v.norm() == 0.0) throw DegenerateBasisError("zero basis state");
  const CMat hm = matrix_elements(h, basis, basis);
  const CMat s = matrix_elements(CMat::Identity(h.rows(), h.cols()), basis, basis);
  Eigen::SelfAdjointEigenSolver<CMat> se(0.5 * (s + s.adjoint()));
  const RVec lam = se.eigenvalues();
  const double top = lam.maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < lam.size(); ++k)
    if (top > 0.0 && lam(k) >= rel_threshold * top) keep.push_back(k);
  if (keep.empty()) throw DegenerateBasisError("overlap matrix has no usable direction");
  // canonical orthogonalization
  CMat x(s.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j)
    x.col(static_cast<Eigen::Index>(j)) =
        se.eigenvectors().col(keep[j]) / std::sqrt(lam(keep[j]));
  const CMat hp = x.adjoint() * hm * x;
  Eigen::SelfAdjointEigenSolver<CMat> he(0.5 * (hp + hp.adjoint()));
  GcimResult out;
  out.energies = he.eigenvalues();
  out.vectors = x * he.eigenvectors();
  out.kept = static_cast<int>(keep.size());
  return out;
}

GcimToy gcim_toy() {
  GcimToy t;
  const auto ints = synth_instance(7, 2, 2);
  t.h = dense_hamiltonian(ints, false);
  t.phi0 = CVec::Zero(16);
  t.phi0(0b0011) = 1.0;
  t.sigma1 = 0.6 * dense_operator(4, {{1.0, {{2, true}, {0, false}}},
                                      {-1.0, {{0, true}, {2, false}}}});
  t.sigma2 = 0.4 * dense_operator(4, {{1.0, {{3, true}, {1, false}}},
                                      {-1.0, {{1, true}, {3, false}}}});
  // sigma2 rotates one mode pair, so e^{r sigma2} has the single frequency mu
  const double mu = Eigen::SelfAdjointEigenSolver<CMat>(CMat(-kI * t.sigma2))
                        .eigenvalues()
                        .cwiseAbs()
                        .maxCoeff();
  t.r_range = M_PI / mu;
  return t;
}

double gcim_span_energy(const GcimToy &t, double r) {
  const CVec a = expm_antihermitian(t.sigma2) * t.phi0;
  const CVec b = expm_antihermitian(t.sigma1 + r * t.sigma2) * t.phi0;
  return gcim_subspace_solve(t.h, {t.phi0, a, b}).energies(0);
}

GcimSweep gcim_sweep(const GcimToy &t, int coarse_points) {
  if (coarse_points < 3) throw ValidationError("sweep needs at least three points");
  GcimSweep sw;
  sw.e_single = t.phi0.dot(t.h * t.phi0).real();
  const CVec a = expm_antihermitian(t.sigma1) * t.phi0;
  const CVec b = expm_antihermitian(t.sigma2) * t.phi0;
  sw.e_three = gcim_subspace_solve(t.h, {t.phi0, a, b}).energies(0);

  const double r0 = -t.r_range;
  const double step = 2.0 * t.r_range / (coarse_points - 1);
  int best = 0;
  double best_e = 0.0;
  for (int k = 0; k < coarse_points; ++k) {
    const double e = gcim_span_energy(t, r0 + k * step);
    if (k == 0 || e < best_e) {
      best = k;
      best_e = e;
    }
  }
  const double lo = std::max(r0, r0 + (best - 1) * step);
  const double hi = std::min(t.r_range, r0 + (best + 1) * step);
  const auto [r, e] = boost::math::tools::brent_find_minima(
      [&](double x) { return gcim_span_energy(t, x); }, lo, hi, 52);
  sw.r_best = e < best_e ? r : r0 + best * step;
  sw.e_swept = std::min(e, best_e);
  return sw;
}

}  // namespace composer
