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

#include "composer/diagnostics.hpp"
#include "composer/errors.hpp"

using namespace composer;

namespace {

T2Tensor random_t2(std::uint64_t seed, int n_occ, int n_virt, double scale = 0.3) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  T2Tensor t{n_occ, n_virt, RMat(n_pairs(n_virt), n_pairs(n_occ))};
  for (Eigen::Index i = 0; i < t.amps.rows(); ++i)
    for (Eigen::Index j = 0; j < t.amps.cols(); ++j) t.amps(i, j) = scale * g(rng);
  return t;
}

T2Tensor diag_t2(std::vector<double> s) {
  T2Tensor t{3, 3, RMat::Zero(3, 3)};
  for (std::size_t k = 0; k < s.size(); ++k) t.amps(k, k) = s[k];
  return t;
}

RMat random_orthonormal(std::mt19937_64 &rng, int d, int r) {
  std::normal_distribution<double> g;
  RMat m(d, r);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  Eigen::HouseholderQR<RMat> qr(m);
  return qr.householderQ() * RMat::Identity(d, r);
}

// Projector built from the rank-r truncation through a separate SVD routine.
RMat dyad_projector(const T2Tensor &t, int r) {
  Eigen::BDCSVD<RMat> svd(t.amps, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Index m = t.amps.rows(), k = t.amps.cols();
  RMat b(m * k, r);
  for (int j = 0; j < r; ++j) {
    RMat d = svd.matrixU().col(j) * svd.matrixV().col(j).transpose();
    b.col(j) = Eigen::Map<RVec>(d.data(), m * k);
  }
  return b * (b.transpose() * b).inverse() * b.transpose();
}

RankOneLadder unit_pair_ladder(double coefficient, int address) {
  RankOneLadder l;
  l.kind = LadderKind::PairExcitation;
  l.x = CVec::Unit(2, 0);
  l.y = CVec::Unit(2, 1);
  l.r = CVec::Unit(2, 0);
  l.s = CVec::Unit(2, 1);
  l.coefficient = coefficient;
  l.address = address;
  return l;
}

CVec reference_det(int n, int n_occ) {
  CVec v = CVec::Zero(Eigen::Index{1} << n);
  v((Eigen::Index{1} << n_occ) - 1) = 1.0;
  return v;
}

GeneratorPool shifted(GeneratorPool g, double delta) {
  for (auto &l : g.ladders) l.coefficient += delta;
  g.recompute_alpha_bar();
  return g;
}

}  // namespace

TEST(Overlap, SelfOverlapIsOne) {
  const auto t = random_t2(1, 3, 4);
  for (int r = 1; r <= 3; ++r) EXPECT_NEAR(subspace_overlap(t, t, r), 1.0, 1e-12);
  EXPECT_NEAR(subspace_overlap(t, t, 2, OverlapKind::LeftProjector), 1.0, 1e-12);
}

TEST(Overlap, OrthogonalLeadingDyads) {
  EXPECT_NEAR(subspace_overlap(diag_t2({1.0}), diag_t2({0.0, 1.0}), 1), 0.0, 1e-14);
}

TEST(Overlap, MatchesPrincipalAngles) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto a = random_t2(10 + seed, 4, 4), b = random_t2(50 + seed, 4, 4);
    for (int r = 1; r <= 6; ++r) {
      const RMat pa = dyad_projector(a, r), pb = dyad_projector(b, r);
      EXPECT_NEAR(subspace_overlap(a, b, r), (pa * pb).trace() / r, 1e-10);
    }
  }
}

TEST(Overlap, RankDeficiencyThrows) {
  EXPECT_THROW(subspace_overlap(diag_t2({1.0, 0.5}), diag_t2({1.0, 1.0, 1.0}), 3), RankError);
  EXPECT_THROW(subspace_overlap(random_t2(1, 3, 3), random_t2(2, 3, 4), 1), ShapeError);
}

TEST(Wauc, SelfAndOrthogonal) {
  const auto t = random_t2(3, 4, 3);
  const auto c = wauc(t, t, 1e-6);
  EXPECT_NEAR(c.wauc, 1.0, 1e-12);
  double wsum = 0.0;
  for (double w : c.weights) wsum += w;
  EXPECT_NEAR(wsum, 1.0, 1e-12);
  EXPECT_NEAR(wauc(diag_t2({1.0}), diag_t2({0.0, 0.0, 2.0}), 1e-6).wauc, 0.0, 1e-14);
}

TEST(Wauc, ScreeningSetsRetainedRank) {
  const auto c = wauc(diag_t2({1.0, 0.1, 1e-3}), diag_t2({1.0, 1.0, 1.0}), 1e-2);
  EXPECT_EQ(c.r_eps, 2);
  EXPECT_EQ(c.ranks, (std::vector<int>{1, 2}));
  EXPECT_NEAR(c.weights[0], 1.0 / 1.01, 1e-12);
}

TEST(Wauc, ZeroTensorThrows) {
  EXPECT_THROW(wauc(diag_t2({}), diag_t2({1.0}), 1e-6), ZeroTensorError);
  EXPECT_THROW(wauc(diag_t2({1.0}), diag_t2({}), 1e-6), ZeroTensorError);
}

TEST(Wauc, WeightsComeFromFirstArgument) {
  const auto a = diag_t2({1.0, 0.2, 0.1}), b = diag_t2({0.5, 1.0});
  const double ab = wauc(a, b, 1e-6).wauc, ba = wauc(b, a, 1e-6).wauc;
  EXPECT_NEAR(ab, 0.04 / 1.04, 1e-12);
  EXPECT_NEAR(ba, 0.25 / 1.25, 1e-12);
  EXPECT_GT(std::abs(ab - ba), 0.1);
}

TEST(Wauc, CurveStaysInUnitInterval) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto c = wauc(random_t2(seed, 4, 4), random_t2(seed + 999, 4, 4), 1e-8);
    for (double ov : c.ov) {
      EXPECT_GE(ov, -1e-12);
      EXPECT_LE(ov, 1.0 + 1e-12);
    }
  }
}

// Independent random r-subspaces of a 20-dim space overlap by r/20 on average.
TEST(Wauc, RandomSubspaceBaseline) {
  std::mt19937_64 rng(2024);
  for (int r : {1, 5, 10}) {
    std::vector<double> vals;
    for (int seed = 0; seed < 100; ++seed)
      vals.push_back(basis_overlap(random_orthonormal(rng, 20, r), random_orthonormal(rng, 20, r)));
    double mean = 0.0, var = 0.0;
    for (double v : vals) mean += v / vals.size();
    for (double v : vals) var += (v - mean) * (v - mean) / (vals.size() - 1);
    EXPECT_LE(std::abs(mean - r / 20.0), 3.0 * std::sqrt(var / vals.size())) << "r=" << r;
  }
}

// Same baseline through the tensor path: Gaussian 6x3 amplitudes give r/18.
TEST(Wauc, RandomTensorBaseline) {
  const int r = 2;
  std::vector<double> vals;
  for (std::uint64_t seed = 0; seed < 100; ++seed)
    vals.push_back(subspace_overlap(random_t2(seed, 3, 4), random_t2(seed + 5000, 3, 4), r));
  double mean = 0.0, var = 0.0;
  for (double v : vals) mean += v / vals.size();
  for (double v : vals) var += (v - mean) * (v - mean) / (vals.size() - 1);
  EXPECT_LE(std::abs(mean - r / 18.0), 3.0 * std::sqrt(var / vals.size()));
}

TEST(OneShotMask, FullCoverageKeepsEverything) {
  const auto gen = nested_svd_t2(random_t2(4, 3, 3), 0.0, 0.0);
  const auto m = one_shot_mask(gen, 1.0);
  EXPECT_EQ(m.mask.indices, Mask::full(gen.ell_sigma()).indices);
  EXPECT_NEAR(m.coverage, 1.0, 1e-12);
}

TEST(OneShotMask, PrefixExample) {
  GeneratorPool g;
  g.n_so = 4;
  g.n_occ = 2;
  g.ladders = {unit_pair_ladder(std::sqrt(0.09), 1), unit_pair_ladder(std::sqrt(0.9), 2),
               unit_pair_ladder(std::sqrt(0.01), 3)};
  g.recompute_alpha_bar();
  const auto m = one_shot_mask(g, 0.95);
  EXPECT_EQ(m.mask.indices, (std::vector<int>{1, 2}));
  EXPECT_NEAR(m.coverage, 0.99, 1e-12);
}

TEST(OneShotMask, TiesBreakByAddress) {
  GeneratorPool g;
  g.n_so = 4;
  g.n_occ = 2;
  g.ladders = {unit_pair_ladder(0.5, 1), unit_pair_ladder(-0.5, 2), unit_pair_ladder(0.5, 3)};
  EXPECT_EQ(one_shot_mask(g, 0.5).mask.indices, (std::vector<int>{1, 2}));
  EXPECT_EQ(one_shot_mask(g, 0.3).mask.indices, (std::vector<int>{1}));
}

TEST(OneShotMask, ErrorsOnBadInput) {
  EXPECT_THROW(one_shot_mask(GeneratorPool{}, 0.9), MaskError);
  const auto gen = nested_svd_t2(random_t2(4, 3, 3), 0.0, 0.0);
  EXPECT_THROW(one_shot_mask(gen, 0.0), ValidationError);
  EXPECT_THROW(one_shot_mask(gen, 1.5), ValidationError);
}

// Exhaustive check: no subset of one fewer ladder meets eta, and coverage is
// what the weights say.
TEST(OneShotMask, MinimalAndCoverageExact) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto gen = nested_svd_t2(random_t2(20 + seed, 3, 3), 0.0, 0.0);
    const int ell = gen.ell_sigma();
    ASSERT_LE(ell, 12);
    std::vector<double> w;
    double total = 0.0;
    for (const auto &l : gen.ladders) {
      double u = 0.0, v = 0.0;
      for (int a = 0; a < l.x.size(); ++a)
        for (int b = a + 1; b < l.x.size(); ++b) u += std::norm(l.x(a) * l.y(b) - l.x(b) * l.y(a));
      for (int a = 0; a < l.r.size(); ++a)
        for (int b = a + 1; b < l.r.size(); ++b) v += std::norm(l.r(a) * l.s(b) - l.r(b) * l.s(a));
      w.push_back(l.coefficient * l.coefficient * u * v);
      total += w.back();
    }
    for (double eta : {0.5, 0.8, 0.9, 0.99}) {
      const auto m = one_shot_mask(gen, eta);
      double cov = 0.0;
      for (int s : m.mask.indices) cov += w[s - 1];
      EXPECT_NEAR(m.coverage, cov / total, 1e-12);
      EXPECT_GE(m.coverage, eta - 1e-12);
      const int k = static_cast<int>(m.mask.indices.size());
      double best = 0.0;
      for (unsigned bits = 0; bits < (1u << ell); ++bits) {
        if (__builtin_popcount(bits) != k - 1) continue;
        double c = 0.0;
        for (int s = 0; s < ell; ++s)
          if (bits >> s & 1u) c += w[s];
        best = std::max(best, c / total);
      }
      EXPECT_LT(best, eta) << "seed " << seed << " eta " << eta;
    }
  }
}

TEST(Drift, IdenticalPoolsHaveNoDrift) {
  const auto gen = nested_svd_t2(random_t2(7, 3, 3), 0.0, 0.0);
  const auto d = density_matrix_drift(gen, gen, Mask::full(gen.ell_sigma()), reference_det(6, 3), 6);
  EXPECT_EQ(d.occ_drift, 0.0);
  EXPECT_EQ(d.vir_drift, 0.0);
}

TEST(Drift, ZeroGeneratorGivesReferenceDensity) {
  const auto gen = nested_svd_t2(random_t2(7, 3, 3), 0.0, 0.0);
  const auto d = density_matrix_drift(gen, gen, Mask::none(), reference_det(6, 3), 6);
  EXPECT_LT((d.d_new.topLeftCorner(3, 3) - CMat::Identity(3, 3)).norm(), 1e-14);
  EXPECT_LT(d.d_new.bottomRightCorner(3, 3).norm(), 1e-14);
}

TEST(Drift, TraceIsConserved) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto gen = nested_svd_t2(random_t2(30 + seed, 3, 3, 0.5), 0.0, 0.0);
    const auto d = density_matrix_drift(gen, shifted(gen, 0.1), Mask::full(gen.ell_sigma()),
                                        reference_det(6, 3), 6);
    EXPECT_NEAR(d.trace_occ + d.trace_vir, 3.0, 1e-10);
  }
}

TEST(Drift, LinearInPerturbation) {
  const auto gen = nested_svd_t2(random_t2(8, 3, 3), 0.0, 0.0);
  const auto mask = Mask::full(gen.ell_sigma());
  std::vector<double> occ, vir;
  for (double delta : {1e-5, 1e-4, 1e-3}) {
    const auto d = density_matrix_drift(gen, shifted(gen, delta), mask, reference_det(6, 3), 6);
    occ.push_back(d.occ_drift / delta);
    vir.push_back(d.vir_drift / delta);
  }
  for (std::size_t k = 1; k < occ.size(); ++k) {
    EXPECT_NEAR(occ[k] / occ[0], 1.0, 0.02);
    EXPECT_NEAR(vir[k] / vir[0], 1.0, 0.02);
  }
}

TEST(Drift, Errors) {
  const auto gen = nested_svd_t2(random_t2(7, 3, 3), 0.0, 0.0);
  EXPECT_THROW(density_matrix_drift(gen, gen, Mask::none(), CVec::Zero(64), 6), ValidationError);
  EXPECT_THROW(density_matrix_drift(gen, gen, Mask::none(), CVec::Zero(32), 6), ShapeError);
}
