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

#include "composer/factorization.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "composer/errors.hpp"

namespace composer {

const char *to_string(LadderKind k) {
  switch (k) {
    case LadderKind::Bilinear: return "bilinear";
    case LadderKind::PairExcitation: return "pair";
    case LadderKind::ProjectedQuadratic: return "quadratic";
  }
  return "?";
}

double HamiltonianPool::branch_alpha(int address) const {
  const int r1 = static_cast<int>(one_body.size());
  if (address < r1) return one_body[address].spin_paired ? 2.0 : 1.0;
  const auto &ch = channels.at(address - r1);
  return ch.gamma * ch.gamma;
}

double HamiltonianPool::branch_coefficient(int address) const {
  const int r1 = static_cast<int>(one_body.size());
  if (address < r1) return one_body[address].coefficient;
  (void)channels.at(address - r1);
  return 0.5;
}

RVec GeneratorPool::weights() const {
  RVec w(ladders.size());
  for (std::size_t k = 0; k < ladders.size(); ++k) w(k) = ladders[k].coefficient;
  return w;
}

double GeneratorPool::ladder_alpha(const RankOneLadder &l) {
  if (l.kind == LadderKind::PairExcitation)
    return wedge_pairs(l.x, l.y).norm() * wedge_pairs(l.r, l.s).norm();
  if (l.kind == LadderKind::Bilinear) return l.u.norm() * l.v.norm();
  throw ValidationError("generator ladders must be bilinear or pair excitations");
}

void GeneratorPool::recompute_alpha_bar() {
  alpha_bar = 0.0;
  for (const auto &l : ladders) alpha_bar += 2.0 * std::abs(l.coefficient) * ladder_alpha(l);
}

int pair_index(int a, int b, int n) { return a * n - a * (a + 1) / 2 + (b - a - 1); }

std::vector<std::pair<int, int>> pair_list(int n) {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) out.emplace_back(a, b);
  return out;
}

int n_pairs(int n) { return n * (n - 1) / 2; }

RMat unpack_skew(const RVec &pairs, int n) {
  RMat a = RMat::Zero(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++k) {
      a(i, j) = pairs(k);
      a(j, i) = -pairs(k);
    }
  return a;
}

CVec wedge_pairs(const CVec &x, const CVec &y) {
  const int n = static_cast<int>(x.size());
  CVec out(n_pairs(n));
  int k = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b, ++k) out(k) = x(a) * y(b) - x(b) * y(a);
  return out;
}

std::vector<CholeskyChannel> pivoted_cholesky(const IntegralSet &ints, double tau) {
  if (!(tau >= 0.0)) throw ValidationError("tau_chol must be non-negative");
  const double neg_floor = -std::max(10.0 * tau, 1e-10);
  const int n = ints.n_so;
  const int dim = n * n;
  RVec diag(dim);
  for (int p = 0; p < n; ++p)
    for (int r = 0; r < n; ++r) diag(p * n + r) = ints.eri_at(p, p, r, r);

  std::vector<RVec> cols;
  std::vector<CholeskyChannel> out;
  while (static_cast<int>(cols.size()) < dim) {
    int piv = -1;
    double best = -1.0;
    for (int k = 0; k < dim; ++k) {
      if (diag(k) < neg_floor)
        throw NotPSDError("residual diagonal " + std::to_string(diag(k)) +
                          " at supermatrix index " + std::to_string(k));
      if (diag(k) > best) {
        best = diag(k);
        piv = k;
      }
    }
    if (best <= tau) break;
    const int q = piv / n, s = piv % n;
    RVec col(dim);
    for (int p = 0; p < n; ++p)
      for (int r = 0; r < n; ++r) col(p * n + r) = ints.eri_at(p, q, r, s);
    for (const auto &c : cols) col -= c(piv) * c;
    col /= std::sqrt(best);
    diag -= col.cwiseAbs2();
    diag(piv) = 0.0;
    cols.push_back(col);

    CholeskyChannel ch;
    ch.index = static_cast<int>(out.size());
    ch.factor.resize(n, n);
    for (int p = 0; p < n; ++p)
      for (int r = 0; r < n; ++r) ch.factor(p, r) = col(p * n + r);
    ch.factor = 0.5 * (ch.factor + ch.factor.transpose()).eval();
    out.push_back(ch);
  }
  for (int k = 0; k < dim; ++k)
    if (diag(k) < neg_floor)
      throw NotPSDError("residual diagonal " + std::to_string(diag(k)) +
                        " at supermatrix index " + std::to_string(k));
  return out;
}

CholeskyChannel channel_eigendecomp(const CholeskyChannel &ch, double tau_eig) {
  const int n = static_cast<int>(ch.factor.rows());
  std::vector<double> vals;
  std::vector<RVec> vecs;
  if (n % 2 == 0 && is_spin_restricted(ch.factor, 1e-14)) {
    // diagonalize the spatial block and copy the modes onto both spins
    const int m = n / 2;
    RMat sp(m, m);
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q) sp(p, q) = ch.factor(2 * p, 2 * q);
    Eigen::SelfAdjointEigenSolver<RMat> es(sp);
    for (int k = 0; k < m; ++k)
      for (int sigma = 0; sigma < 2; ++sigma) {
        RVec v = RVec::Zero(n);
        for (int p = 0; p < m; ++p) v(2 * p + sigma) = es.eigenvectors()(p, k);
        vals.push_back(es.eigenvalues()(k));
        vecs.push_back(v);
      }
  } else {
    Eigen::SelfAdjointEigenSolver<RMat> es(ch.factor);
    for (int k = 0; k < n; ++k) {
      vals.push_back(es.eigenvalues()(k));
      vecs.push_back(es.eigenvectors().col(k));
    }
  }
  std::vector<int> order(vals.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(vals[a]) > std::abs(vals[b]);
  });
  double vmax = 0.0;
  for (double v : vals) vmax = std::max(vmax, std::abs(v));

  CholeskyChannel out = ch;
  std::vector<int> keep;
  if (vmax > 0.0)
    for (int k : order)
      if (std::abs(vals[k]) / vmax >= tau_eig) keep.push_back(k);
  out.eigvals.resize(keep.size());
  out.rotation.resize(n, keep.size());
  out.gamma = 0.0;
  for (std::size_t j = 0; j < keep.size(); ++j) {
    out.eigvals(j) = vals[keep[j]];
    out.rotation.col(j) = vecs[keep[j]];
    out.gamma += std::abs(vals[keep[j]]);
  }
  return out;
}

HamiltonianPool build_hamiltonian_pool(const IntegralSet &ints, double tau_chol,
                                       double tau_eig, double tau_onebody) {
  validate(ints);
  HamiltonianPool pool;
  pool.n_so = ints.n_so;
  pool.n_elec = ints.n_elec;
  pool.e_nn = ints.e_nn;
  const int n = ints.n_so;
  const RMat ht = mean_field_shift(ints);

  std::vector<double> kappa;
  std::vector<RVec> modes;
  const bool paired = is_spin_restricted(ht, 1e-14);
  if (paired) {
    const int m = n / 2;
    RMat sp(m, m);
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q) sp(p, q) = ht(2 * p, 2 * q);
    Eigen::SelfAdjointEigenSolver<RMat> es(sp);
    for (int k = 0; k < m; ++k) {
      RVec v = RVec::Zero(n);
      for (int p = 0; p < m; ++p) v(2 * p) = es.eigenvectors()(p, k);
      kappa.push_back(es.eigenvalues()(k));
      modes.push_back(v);
    }
  } else {
    Eigen::SelfAdjointEigenSolver<RMat> es(ht);
    for (int k = 0; k < n; ++k) {
      kappa.push_back(es.eigenvalues()(k));
      modes.push_back(es.eigenvectors().col(k));
    }
  }
  double kmax = 0.0;
  for (double k : kappa) kmax = std::max(kmax, std::abs(k));
  if (kmax > 0.0)
    for (std::size_t k = 0; k < kappa.size(); ++k) {
      if (std::abs(kappa[k]) / kmax < tau_onebody) continue;
      RankOneLadder l;
      l.kind = LadderKind::Bilinear;
      l.u = modes[k].cast<cplx>();
      l.v = l.u;
      l.spin_paired = paired;
      l.coefficient = kappa[k];
      l.address = static_cast<int>(pool.one_body.size());
      pool.one_body.push_back(l);
    }

  if (ints.n_so > 0) {
    for (auto &ch : pivoted_cholesky(ints, tau_chol))
      pool.channels.push_back(channel_eigendecomp(ch, tau_eig));
  }

  pool.alpha = 0.0;
  for (int s = 0; s < pool.ell_H(); ++s)
    pool.alpha += std::abs(pool.branch_coefficient(s)) * pool.branch_alpha(s);
  return pool;
}

Mp2Result mp2_amplitudes(const IntegralSet &ints) {
  const int no = ints.n_elec;
  const int nv = ints.n_so - no;
  const RVec eps = orbital_energies(ints);
  Mp2Result res;
  res.t2.n_occ = no;
  res.t2.n_virt = nv;
  res.t2.amps = RMat::Zero(n_pairs(nv), n_pairs(no));
  const bool two_body = std::any_of(ints.eri.begin(), ints.eri.end(),
                                    [](double v) { return v != 0.0; });
  for (const auto &[i, j] : pair_list(no))
    for (const auto &[a0, b0] : pair_list(nv)) {
      const int a = no + a0, b = no + b0;
      const double g = ints.eri_at(i, j, a, b) - ints.eri_at(i, j, b, a);
      const double den = eps(i) + eps(j) - eps(a) - eps(b);
      if (std::abs(den) < 1e-8) {
        if (!two_body || g == 0.0) continue;
        throw DegenerateGapError("vanishing denominator for (i,j,a,b) = (" +
                                 std::to_string(i) + "," + std::to_string(j) + "," +
                                 std::to_string(a) + "," + std::to_string(b) + ")");
      }
      const double t = g / den;
      res.t2.amps(pair_index(a0, b0, nv), pair_index(i, j, no)) = t;
      res.e_corr += t * g;
    }
  return res;
}

std::vector<WedgeTerm> skew_wedges(const RMat &a) {
  const int n = static_cast<int>(a.rows());
  std::vector<WedgeTerm> out;
  if (n < 2) return out;
  Eigen::RealSchur<RMat> schur(a);
  const RMat &t = schur.matrixT();
  const RMat &q = schur.matrixU();
  int k = 0;
  while (k < n) {
    if (k + 1 < n && t(k + 1, k) != 0.0) {
      const double w = 0.5 * (t(k, k + 1) - t(k + 1, k));
      RVec x = q.col(k), y = q.col(k + 1);
      if (w < 0.0) std::swap(x, y);
      out.push_back({std::abs(w), x, y});
      k += 2;
    } else {
      ++k;
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const WedgeTerm &l, const WedgeTerm &r) { return l.weight > r.weight; });
  return out;
}

GeneratorPool nested_svd_t2(const T2Tensor &t2, double tau_svd, double tau_wedge) {
  GeneratorPool pool;
  pool.n_occ = t2.n_occ;
  pool.n_so = t2.n_occ + t2.n_virt;
  if (t2.amps.size() == 0 || t2.amps.cwiseAbs().maxCoeff() == 0.0) return pool;

  Eigen::JacobiSVD<RMat> svd(t2.amps, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVec &sv = svd.singularValues();
  const double s1 = sv(0);
  for (Eigen::Index mu = 0; mu < sv.size(); ++mu) {
    // singular values at roundoff level carry no information
    if (sv(mu) <= 1e-14 * s1 || sv(mu) / s1 < tau_svd) continue;
    const auto left = skew_wedges(unpack_skew(svd.matrixU().col(mu), t2.n_virt));
    const auto right = skew_wedges(unpack_skew(svd.matrixV().col(mu), t2.n_occ));
    if (left.empty() || right.empty()) continue;
    const double lmax = left.front().weight, rmax = right.front().weight;
    for (const auto &wl : left) {
      if (wl.weight / lmax < tau_wedge) continue;
      for (const auto &wr : right) {
        if (wr.weight / rmax < tau_wedge) continue;
        RankOneLadder l;
        l.kind = LadderKind::PairExcitation;
        l.x = wl.x.cast<cplx>();
        l.y = wl.y.cast<cplx>();
        l.r = wr.x.cast<cplx>();
        l.s = wr.y.cast<cplx>();
        l.coefficient = sv(mu) * wl.weight * wr.weight;
        l.address = static_cast<int>(pool.ladders.size()) + 1;
        pool.ladders.push_back(l);
      }
    }
  }
  pool.recompute_alpha_bar();
  return pool;
}

RMat reconstruct_t2(const GeneratorPool &pool) {
  const int no = pool.n_occ, nv = pool.n_virt();
  CMat acc = CMat::Zero(n_pairs(nv), n_pairs(no));
  for (const auto &l : pool.ladders) {
    if (l.kind != LadderKind::PairExcitation) continue;
    acc += l.coefficient * wedge_pairs(l.x, l.y) * wedge_pairs(l.r, l.s).adjoint();
  }
  return acc.real();
}

}  // namespace composer
