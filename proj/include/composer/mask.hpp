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

#include <algorithm>
#include <string>
#include <vector>

#include "composer/errors.hpp"

namespace composer {

/** Classical subset of generator addresses (1-based) kept in a truncation. */
struct Mask {
  std::string label = "m";
  std::vector<int> indices;  ///< sorted, unique

  bool contains(int address) const {
    return std::binary_search(indices.begin(), indices.end(), address);
  }
  bool empty() const { return indices.empty(); }

  static Mask full(int ell, std::string label = "full") {
    Mask m;
    m.label = std::move(label);
    for (int s = 1; s <= ell; ++s) m.indices.push_back(s);
    return m;
  }
  static Mask none(std::string label = "empty") {
    Mask m;
    m.label = std::move(label);
    return m;
  }
  static Mask of(std::vector<int> idx, std::string label) {
    Mask m;
    m.label = std::move(label);
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    m.indices = std::move(idx);
    return m;
  }

  /** Throws MaskError unless every index is a valid address. */
  void check(int ell) const {
    for (int s : indices)
      if (s < 1 || s > ell)
        throw MaskError("mask index " + std::to_string(s) + " outside 1.." +
                        std::to_string(ell));
  }
};

}  // namespace composer
