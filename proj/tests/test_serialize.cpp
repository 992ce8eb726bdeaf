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
#include "composer/pipeline.hpp"
#include "composer/serialize.hpp"

using namespace composer;

namespace {

FactorizeResult small_instance(std::uint64_t seed) {
  return factorize_instance(synth_instance(seed, 2, 2));
}

CircuitSkeleton skeleton_for(const PoolBundle &p) {
  return compile_skeleton(layout_of(p.ham, p.gen), default_pivots(p.ham, p.gen),
                          Connectivity::parse("linear:2"), 4, 1.2 * p.gen.alpha_bar);
}

}  // namespace

TEST(Serialize, IntegralsRoundTrip) {
  const auto ints = synth_instance(5, 3, 2);
  const auto back = ints_from_json(ints_to_json(ints));
  EXPECT_EQ(back.n_so, ints.n_so);
  EXPECT_EQ(back.n_elec, ints.n_elec);
  EXPECT_EQ(back.e_nn, ints.e_nn);
  EXPECT_EQ(back.h, ints.h);
  EXPECT_EQ(back.eri, ints.eri);
  EXPECT_EQ(back.orb_energies, ints.orb_energies);
}

TEST(Serialize, PoolRoundTripIsExact) {
  const auto r = small_instance(2);
  const std::string text = pool_to_json(r.pools);
  const auto back = pool_from_json(text);
  EXPECT_EQ(pool_to_json(back), text);
  ASSERT_EQ(back.ham.channels.size(), r.pools.ham.channels.size());
  for (std::size_t k = 0; k < back.ham.channels.size(); ++k)
    EXPECT_EQ(back.ham.channels[k].rotation, r.pools.ham.channels[k].rotation);
  ASSERT_EQ(back.gen.ladders.size(), r.pools.gen.ladders.size());
  EXPECT_EQ(back.gen.ladders[0].x, r.pools.gen.ladders[0].x);
  EXPECT_EQ(back.gen.alpha_bar, r.pools.gen.alpha_bar);
}

TEST(Serialize, T2RoundTripAndShape) {
  const auto r = small_instance(3);
  const auto back = t2_from_json(t2_to_json(r.t2));
  EXPECT_EQ(back.amps, r.t2.amps);
  T2Tensor bad = r.t2;
  bad.n_virt += 1;
  EXPECT_THROW(t2_from_json(t2_to_json(bad)), ShapeError);
}

TEST(Serialize, SkeletonRoundTripKeepsFingerprint) {
  const auto r = small_instance(4);
  const auto skel = skeleton_for(r.pools);
  const auto back = skeleton_from_json(skeleton_to_json(skel));
  EXPECT_EQ(back.fingerprint, skel.fingerprint);
  EXPECT_EQ(fabric_fingerprint(back), skel.fingerprint);
  EXPECT_EQ(back.connectivity.tag(), skel.connectivity.tag());
  EXPECT_EQ(back.slots(), skel.slots());
  EXPECT_EQ(skeleton_to_json(back), skeleton_to_json(skel));
}

TEST(Serialize, TamperedSkeletonIsATopologyViolation) {
  const auto r = small_instance(4);
  std::string text = skeleton_to_json(skeleton_for(r.pools));
  const auto pos = text.find("\"CNOT\"");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 6, "\"X\"");
  EXPECT_THROW(skeleton_from_json(text), TopologyError);
}

TEST(Serialize, DialRoundTripWithPools) {
  const auto r = small_instance(6);
  const auto skel = skeleton_for(r.pools);
  const auto sheet = dial(skel, r.pools.ham, r.pools.gen, Mask::full(r.pools.gen.ell_sigma()));
  const auto f = dial_from_json(dial_to_json(sheet, &r.pools));
  EXPECT_EQ(f.sheet.angle_bindings, sheet.angle_bindings);
  EXPECT_EQ(f.sheet.phase_bindings, sheet.phase_bindings);
  EXPECT_EQ(f.sheet.mask_indices, sheet.mask_indices);
  EXPECT_EQ(f.sheet.gen_coeffs, sheet.gen_coeffs);
  ASSERT_TRUE(f.pools.has_value());
  EXPECT_EQ(pool_to_json(*f.pools), pool_to_json(r.pools));
  EXPECT_NO_THROW(check_dial(skel, f.sheet));
  EXPECT_FALSE(dial_from_json(dial_to_json(sheet)).pools.has_value());
}

TEST(Serialize, MalformedDocuments) {
  EXPECT_THROW(pool_from_json("{not json"), ParseError);
  EXPECT_THROW(pool_from_json(R"({"format":"composer-t2-v1"})"), ParseError);
  EXPECT_THROW(pool_from_json(R"({"format":"composer-pool-v1"})"), ParseError);
  EXPECT_THROW(ints_from_json(R"({"format":"composer-ints-v1","n_spatial":1,"n_so":2,
    "n_elec":1,"e_nn":0,"h":{"rows":2,"cols":2,"data":[1,2,3]},"eri":[],"orb_energies":[]})"),
               ParseError);
}

TEST(Serialize, ReportAndCsv) {
  BlockEncodingReport r;
  r.tag = "H";
  r.alpha = 2.5;
  r.ancillas = 3;
  const auto text = report_to_json(r);
  EXPECT_NE(text.find("composer-report-v1"), std::string::npos);
  EXPECT_NE(text.find("2.5"), std::string::npos);
  OverlapCurve c;
  c.ranks = {1, 2};
  c.ov = {1.0, 0.5};
  c.weights = {0.75, 0.25};
  EXPECT_EQ(overlap_curve_csv(c), "r,ov,w\n1,1,0.75\n2,0.5,0.25\n");
}

TEST(Pipeline, MaskParsing) {
  EXPECT_EQ(parse_mask("full", 3).indices, (std::vector<int>{1, 2, 3}));
  EXPECT_TRUE(parse_mask("none", 3).empty());
  EXPECT_EQ(parse_mask("3,1", 3).indices, (std::vector<int>{1, 3}));
  EXPECT_THROW(parse_mask("4", 3), MaskError);
  EXPECT_THROW(parse_mask("1,x", 3), MaskError);
}

TEST(Pipeline, FactorizeRejectsNonPositiveThresholds) {
  const auto ints = synth_instance(1, 2, 2);
  EXPECT_THROW(factorize_instance(ints, {0.0, 1e-10, 1e-6, 1e-6}), ValidationError);
  EXPECT_THROW(factorize_instance(ints, {1e-8, 1e-10, -1.0, 1e-6}), ValidationError);
}

TEST(Pipeline, VerifyPassesAndFailsOnZeroBudget) {
  const auto r = small_instance(8);
  const auto skel = skeleton_for(r.pools);
  const auto sheet = dial(skel, r.pools.ham, r.pools.gen, Mask::full(r.pools.gen.ell_sigma()));
  const auto ok = verify_sheet(skel, sheet, r.pools, 1e-8);
  EXPECT_TRUE(ok.pass);
  for (const auto &c : ok.checks) EXPECT_FALSE(c.skipped) << c.name;
  EXPECT_FALSE(verify_sheet(skel, sheet, r.pools, 0.0).pass);
}

TEST(Pipeline, VerifyCatchesForeignPools) {
  const auto a = small_instance(8), b = small_instance(9);
  const auto skel = skeleton_for(a.pools);
  const auto sheet = dial(skel, a.pools.ham, a.pools.gen, Mask::full(a.pools.gen.ell_sigma()));
  PoolBundle mixed = a.pools;
  mixed.ham = b.pools.ham;
  if (mixed.ham.ell_H() == a.pools.ham.ell_H()) {
    EXPECT_FALSE(verify_sheet(skel, sheet, mixed, 1e-8).pass);
  } else {
    EXPECT_THROW(verify_sheet(skel, sheet, mixed, 1e-8), Error);
  }
}
