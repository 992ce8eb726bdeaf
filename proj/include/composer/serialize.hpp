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
 * Versioned JSON documents exchanged between pipeline stages. Real matrices
 * are {"rows", "cols", "data"} with row-major data; complex vectors are
 * {"re", "im"}. Malformed input raises ParseError.
 */
#pragma once

#include <optional>
#include <string>

#include "composer/circuit_ir.hpp"
#include "composer/diagnostics.hpp"
#include "composer/factorization.hpp"
#include "composer/integral_io.hpp"
#include "composer/oracle_sim.hpp"

namespace composer {

std::string ints_to_json(const IntegralSet &ints);
IntegralSet ints_from_json(const std::string &text);

struct PoolBundle {
  HamiltonianPool ham;
  GeneratorPool gen;
};

std::string pool_to_json(const PoolBundle &pools);
PoolBundle pool_from_json(const std::string &text);

std::string t2_to_json(const T2Tensor &t2);
T2Tensor t2_from_json(const std::string &text);

std::string skeleton_to_json(const CircuitSkeleton &skel);
/** Throws TopologyError when the stored fingerprint disagrees with the gates. */
CircuitSkeleton skeleton_from_json(const std::string &text);

struct DialFile {
  DialSheet sheet;
  std::optional<PoolBundle> pools;  ///< the classical data the sheet was dialed from
};

std::string dial_to_json(const DialSheet &sheet, const PoolBundle *pools = nullptr);
DialFile dial_from_json(const std::string &text);

std::string report_to_json(const BlockEncodingReport &r);

/** Columns r, ov, w. */
std::string overlap_curve_csv(const OverlapCurve &c);

std::string read_text_file(const std::string &path);
void write_text_file(const std::string &path, const std::string &text);

}  // namespace composer
