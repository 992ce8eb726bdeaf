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

#include <random>

#include "composer/errors.hpp"
#include "composer/integral_io.hpp"
#include "composer/mask_engine.hpp"
#include "composer/oracle_sim.hpp"
#include "test_util.hpp"

using namespace composer;

namespace {

// pair ladders on four modes differ only by the phase of the virtual pair
GeneratorPool phased_pool(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ph(-M_PI, M_PI), mag(0.05, 0.3);
  GeneratorPool p;
  p.n_so = 4;
  p.n_occ = 2;
  for (int k = 0; k < count; ++k) {
    RankOneLadder l;
    l.kind = LadderKind::PairExcitation;
    l.x = CVec::Zero(2);
    l.x(0) = std::exp(kI * ph(rng));
    l.y = CVec::Zero(2);
    l.y(1) = 1.0;
    l.r = l.x.cwiseAbs().cast<cplx>();
    l.s = l.y;
    l.coefficient = (k % 2 ? -1.0 : 1.0) * mag(rng);
    l.address = k + 1;
    p.ladders.push_back(l);
  }
  p.recompute_alpha_bar();
  return p;
}

HamiltonianPool small_ham(std::uint64_t seed) {
  return build_hamiltonian_pool(synth_instance(seed, 2, 2), 1e-8, 1e-10);
}

// brute-force span energy with a precomputed eigenbasis of sigma2
struct SpanOracle {
  CMat h;
  CVec phi0, a, e1phi;
  CMat v;
  RVec mu;

  explicit SpanOracle(const GcimToy &t) : h(t.h), phi0(t.phi0) {
    a = expm_antihermitian(t.sigma2) * phi0;
    Eigen::SelfAdjointEigenSolver<CMat> es(CMat(-kI * t.sigma2));
    v = es.eigenvectors();
    mu = es.eigenvalues();
    e1phi = v.adjoint() * phi0;
  }
  // sigma1 and sigma2 commute: e^{s1 + r s2} = e^{s1} e^{r s2}
  double operator()(const CMat &e1, double r) const {
    CVec d(mu.size());
    for (Eigen::Index k = 0; k < mu.size(); ++k) d(k) = std::exp(kI * r * mu(k)) * e1phi(k);
    const CVec b = e1 * (v * d);
    const CVec basis[3] = {phi0, a, b};
    Eigen::Matrix3cd hm, sm;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        hm(i, j) = basis[i].dot(h * basis[j]);
        sm(i, j) = basis[i].dot(basis[j]);
      }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix3cd> ge(hm, sm);
    return ge.eigenvalues()(0);
  }
};

}  // namespace

TEST(Sandwich, EmptyMaskIsProjectedHamiltonian) {
  const auto ham = small_ham(1);
  const auto gen = phased_pool(1, 3);
  const auto r = similarity_sandwich(ham, gen, Mask::none(), {}, 1e-10);
  const auto idx = sector_indices(4, 2);
  const CMat phhp = restrict_to(dense_pool_hamiltonian(ham), idx) / r.report.alpha;
  EXPECT_LE(spectral_norm(r.block - phhp), r.report.budget + 1e-12);
  EXPECT_TRUE(r.report.within_budget);
}

TEST(Sandwich, BudgetAcrossMasksAndPools) {
  for (std::uint64_t seed : {2, 3}) {
    const auto ham = small_ham(seed);
    const auto gen = phased_pool(seed, 3);
    for (const auto &m : {Mask::of({1}, "a"), Mask::of({2, 3}, "b"), Mask::full(3)})
      for (double eps : {1e-4, 1e-9}) {
        const auto r = similarity_sandwich(ham, gen, m, {}, eps);
        EXPECT_TRUE(r.report.within_budget)
            << m.label << " " << r.report.measured_error << " " << r.report.budget;
        EXPECT_LE(r.report.hermiticity_defect, 1e-10);
        EXPECT_LE(r.report.eps_exp, eps + 1e-12);
      }
  }
}

TEST(Sandwich, InjectedErrorStaysInBudget) {
  const auto ham = small_ham(4);
  const auto gen = phased_pool(4, 2);
  for (double ep : {1e-7, 1e-5}) {
    SandwichOptions o;
    o.eps_prime = ep;
    const auto r = similarity_sandwich(ham, gen, Mask::full(2), {}, 1e-8, o);
    EXPECT_GT(r.report.eps_exp, 1e-8);
    EXPECT_TRUE(r.report.within_budget);
  }
}

TEST(Sandwich, SingleLadderAgainstExpm) {
  const auto ham = small_ham(5);
  auto gen = phased_pool(5, 1);
  gen.ladders[0].coefficient = 0.05;
  gen.recompute_alpha_bar();
  const auto r = similarity_sandwich(ham, gen, Mask::full(1), {}, 1e-10);
  // independent exact sandwich from the ladder operator
  const CMat l = dense_ladder_operator(gen.ladders[0], 4, 2);
  const CMat sig = 0.05 * (l - l.adjoint());
  const CMat e = expm_antihermitian(sig);
  const auto idx = sector_indices(4, 2);
  const CMat ex = restrict_to(e.adjoint() * dense_pool_hamiltonian(ham) * e, idx) /
                  r.report.alpha;
  EXPECT_LE(spectral_norm(r.block - ex), r.report.budget * 1.1 + 1e-12);
}

TEST(Sandwich, ModelSpaceAndSector) {
  const auto ham = small_ham(6);
  const auto gen = phased_pool(6, 2);
  const auto r = similarity_sandwich(ham, gen, Mask::full(2), {0b0011, 0b1100}, 1e-10);
  EXPECT_EQ(r.block.rows(), 2);
  EXPECT_TRUE(r.report.within_budget);
  EXPECT_THROW(similarity_sandwich(ham, gen, Mask::full(2), {0b0111}, 1e-10), SectorError);
  EXPECT_THROW(similarity_sandwich(ham, gen, Mask::full(2), {64}, 1e-10), SectorError);
}

TEST(Sandwich, InheritsHamiltonianNormalization) {
  const auto ham = small_ham(7);
  const auto gen = phased_pool(7, 2);
  const auto r = similarity_sandwich(ham, gen, Mask::full(2), {}, 1e-8);
  EXPECT_NEAR(r.report.alpha, hamiltonian_block_encoding(ham).report.alpha, 1e-14);
  EXPECT_NEAR(r.report.alpha, ham.alpha, 1e-12);
}

TEST(Sandwich, MasksGiveDifferentBlocks) {
  const auto ham = small_ham(8);
  const auto gen = phased_pool(8, 3);
  std::vector<CMat> blocks;
  for (const auto &m : {Mask::none(), Mask::of({1}, "a"), Mask::of({1, 2}, "b"), Mask::full(3)})
    blocks.push_back(similarity_sandwich(ham, gen, m, {}, 1e-8).block);
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (std::size_t j = i + 1; j < blocks.size(); ++j)
      EXPECT_GT(spectral_norm(blocks[i] - blocks[j]), 1e-6);
}

TEST(MatrixElements, IdentityGivesGram) {
  std::mt19937_64 rng(1);
  std::vector<CVec> s{composer::testing::random_unit(rng, 5), composer::testing::random_unit(rng, 5)};
  const CMat g = matrix_elements(CMat::Identity(5, 5), s, s);
  EXPECT_NEAR(std::abs(g(0, 1) - s[0].dot(s[1])), 0.0, 1e-15);
  EXPECT_NEAR(g(0, 0).real(), 1.0, 1e-14);
}

TEST(MatrixElements, HermitianTable) {
  std::mt19937_64 rng(2);
  CMat h = CMat::Random(6, 6);
  h = (h + h.adjoint()).eval();
  std::vector<CVec> s;
  for (int k = 0; k < 4; ++k) s.push_back(composer::testing::random_unit(rng, 6));
  const CMat m = matrix_elements(h, s, s);
  EXPECT_LE((m - m.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(MatrixElements, BasisIndexing) {
  CMat b = CMat::Random(4, 4);
  const CMat m = matrix_elements(b, {composer::testing::basis(4, 2)},
                                 {composer::testing::basis(4, 1), composer::testing::basis(4, 3)});
  EXPECT_EQ(m(0, 0), b(2, 1));
  EXPECT_EQ(m(0, 1), b(2, 3));
  EXPECT_THROW(matrix_elements(b, {CVec::Zero(3)}, {}), ShapeError);
}

TEST(Gcim, CompleteBasisGivesGroundState) {
  const auto t = gcim_toy();
  const auto idx = sector_indices(4, 2);
  std::vector<CVec> basis;
  for (auto x : idx) basis.push_back(composer::testing::basis(16, static_cast<int>(x)));
  const auto r = gcim_subspace_solve(t.h, basis);
  Eigen::SelfAdjointEigenSolver<CMat> es(restrict_to(t.h, idx));
  EXPECT_NEAR(r.energies(0), es.eigenvalues()(0), 1e-12);
  EXPECT_EQ(r.kept, 6);
}

TEST(Gcim, SingleState) {
  const auto t = gcim_toy();
  const auto r = gcim_subspace_solve(t.h, {t.phi0});
  EXPECT_NEAR(r.energies(0), t.phi0.dot(t.h * t.phi0).real(), 1e-14);
}

TEST(Gcim, MonotoneRefinementAndThreshold) {
  const auto t = gcim_toy();
  std::vector<CVec> basis{t.phi0};
  double prev = gcim_subspace_solve(t.h, basis).energies(0);
  for (double r : {0.3, -0.7, 1.1, 2.0}) {
    basis.push_back(expm_antihermitian(t.sigma1 + r * t.sigma2) * t.phi0);
    const double e = gcim_subspace_solve(t.h, basis).energies(0);
    EXPECT_LE(e, prev + 1e-10);
    prev = e;
  }
  // the states are products over the (0,2) and (1,3) mode pairs with a fixed
  // first factor, so they span three dimensions; duplicates add nothing
  EXPECT_EQ(gcim_subspace_solve(t.h, basis).kept, 3);
  basis.push_back(basis.back());
  const auto dup = gcim_subspace_solve(t.h, basis);
  EXPECT_EQ(dup.kept, 3);
  EXPECT_NEAR(dup.energies(0), prev, 1e-9);
  EXPECT_THROW(gcim_subspace_solve(t.h, {CVec::Zero(16)}), DegenerateBasisError);
  EXPECT_THROW(gcim_subspace_solve(t.h, {}), DegenerateBasisError);
}

TEST(Gcim, ToyGeneratorsCommute) {
  const auto t = gcim_toy();
  EXPECT_LE((t.sigma1 * t.sigma2 - t.sigma2 * t.sigma1).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((t.sigma1 + t.sigma1.adjoint()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Gcim, SweepOrderingAndGridOracle) {
  const auto t = gcim_toy();
  const auto sw = gcim_sweep(t);
  EXPECT_LE(sw.e_swept, sw.e_three + 1e-12);
  EXPECT_LE(sw.e_three, sw.e_single + 1e-12);
  const SpanOracle oracle(t);
  const CMat e1 = expm_antihermitian(t.sigma1);
  double grid_min = 1e300;
  const int pts = 100000;
  for (int k = 0; k < pts; ++k) {
    const double r = -t.r_range + 2.0 * t.r_range * k / (pts - 1);
    grid_min = std::min(grid_min, oracle(e1, r));
  }
  EXPECT_LE(sw.e_swept, grid_min + 1e-12);
  EXPECT_NEAR(sw.e_swept, grid_min, 1e-6);
  EXPECT_NEAR(gcim_span_energy(t, sw.r_best), sw.e_swept, 1e-14);
}

TEST(Gcim, SweepCoversOnePeriod) {
  const auto t = gcim_toy();
  EXPECT_NEAR(t.r_range, M_PI / 0.4, 1e-12);
  for (double r : {-1.3, 0.2, 2.9})
    EXPECT_NEAR(gcim_span_energy(t, r), gcim_span_energy(t, r + 2.0 * t.r_range), 1e-10);
}
