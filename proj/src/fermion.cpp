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

#include "composer/fermion.hpp"

#include "composer/errors.hpp"

namespace composer {

bool apply_string(const OpString &ops, std::uint64_t in, std::uint64_t &out,
                  int &sign) {
  std::uint64_t st = in;
  int sg = 1;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    const std::uint64_t bit = std::uint64_t{1} << it->mode;
    const bool occ = (st & bit) != 0;
    if (it->dagger == occ) return false;
    if (popcount(st & (bit - 1)) & 1) sg = -sg;
    st ^= bit;
  }
  out = st;
  sign = sg;
  return true;
}

CMat dense_operator(int n, const std::vector<FermionTerm> &terms) {
  if (n > 12) throw ValidationError("dense operators are limited to 12 modes");
  const std::uint64_t dim = std::uint64_t{1} << n;
  CMat m = CMat::Zero(dim, dim);
  for (const auto &t : terms) {
    if (t.coeff == cplx(0.0)) continue;
    for (std::uint64_t x = 0; x < dim; ++x) {
      std::uint64_t y;
      int sg;
      if (apply_string(t.ops, x, y, sg)) m(y, x) += static_cast<double>(sg) * t.coeff;
    }
  }
  return m;
}

CMat dense_one_body(int n, const CMat &c) {
  std::vector<FermionTerm> terms;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (c(p, q) != cplx(0.0)) terms.push_back({c(p, q), {{p, true}, {q, false}}});
  return dense_operator(n, terms);
}

CMat dense_two_body(int n, const std::vector<cplx> &g) {
  std::vector<FermionTerm> terms;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      if (p == q) continue;
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          if (r == s) continue;
          const cplx v = g[((static_cast<std::size_t>(p) * n + q) * n + r) * n + s];
          if (v == cplx(0.0)) continue;
          terms.push_back({v, {{p, true}, {q, true}, {s, false}, {r, false}}});
        }
    }
  return dense_operator(n, terms);
}

CMat dense_number(int n, int p) {
  const std::uint64_t dim = std::uint64_t{1} << n;
  CMat m = CMat::Zero(dim, dim);
  for (std::uint64_t x = 0; x < dim; ++x)
    if ((x >> p) & 1) m(x, x) = 1.0;
  return m;
}

CMat dense_total_number(int n) {
  const std::uint64_t dim = std::uint64_t{1} << n;
  CMat m = CMat::Zero(dim, dim);
  for (std::uint64_t x = 0; x < dim; ++x) m(x, x) = popcount(x);
  return m;
}

}  // namespace composer
