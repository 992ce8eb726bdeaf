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
 * Jordan-Wigner action of fermionic operator strings on occupation bitstrings.
 *
 * Mode p is bit p of the basis index. a_p^dagger carries the sign
 * (-1)^(number of occupied modes q < p).
 */
#pragma once

#include <cstdint>
#include <vector>

#include "composer/linalg.hpp"

namespace composer {

struct LadderOp {
  int mode;
  bool dagger;
};

/** Product of ladder operators, written left to right; the rightmost acts first. */
using OpString = std::vector<LadderOp>;

struct FermionTerm {
  cplx coeff;
  OpString ops;
};

/**
 * Applies an operator string to a basis state. Returns false when the result
 * vanishes; otherwise `out` is the image state and `sign` is +1 or -1.
 */
bool apply_string(const OpString &ops, std::uint64_t in, std::uint64_t &out,
                  int &sign);

/** Dense 2^n matrix of a sum of operator strings. */
CMat dense_operator(int n, const std::vector<FermionTerm> &terms);

/** sum_pq c_pq a_p^dagger a_q */
CMat dense_one_body(int n, const CMat &c);

/** sum_pqrs g(p,q,r,s) a_p^dagger a_q^dagger a_s a_r with g given as row-major n^4. */
CMat dense_two_body(int n, const std::vector<cplx> &g);

/** Diagonal of the number operator for mode p. */
CMat dense_number(int n, int p);

/** Total particle number operator. */
CMat dense_total_number(int n);

}  // namespace composer
