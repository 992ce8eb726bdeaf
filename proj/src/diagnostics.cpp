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

#include "composer/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "composer/errors.hpp"
#include "composer/oracle_sim.hpp"

namespace composer {

namespace {

struct Svd {
  RMat u, v;
  RVec s;
  int rank = 0;
};

Svd svd_of(const T2Tensor &t) {
  Eigen::JacobiSVD<RMat> svd(t.amps, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Svd out{svd.matrixU(), svd.matrixV(), svd.singularValues(), 0};
  const double top = out.s.size() ? out.s(0) : 0.0;
  for (Eigen::Index k = 0; k < out.s.size(); ++k)
    if (top > 0.0 && out.s(k) > 1e-12 * top) ++out.rank;
  return out;
}

// columns vec(u_k v_k^T), k < r
RMat dyad_basis(const Svd &s, int r) {
  const Eigen::Index m = s.u.rows(), k = s.v.rows();
  RMat b(m * k, r);
  for (int j = 0; j < r; ++j) {
    const RMat d = s.u.col(j) * s.v.col(j).transpose();
    b.col(j) = Eigen::Map<const RVec>(d.data(), m * k);
  }
  return b;
}

double overlap_from(const Svd &a, const Svd &b, int r, OverlapKind kind) {
  if (kind == OverlapKind::LeftProjector)
    return basis_overlap(a.u.leftCols(r), b.u.leftCols(r));
  const RMat ba = dyad_basis(a, r), bb = dyad_basis(b, r);
  for (const RMat *q : {&ba, &bb})
    if ((q->transpose() * *q - RMat::Identity(r, r)).cwiseAbs().maxCoeff() > 1e-10)
      throw ValidationError("dyad basis is not orthonormal");
  return basis_overlap(ba, bb);
}

void check_shapes(const T2Tensor &a, const T2Tensor &b) {
  if (a.amps.rows() != b.amps.rows() || a.amps.cols() != b.amps.cols())
    throw ShapeError("amplitude tensors have different pair-space shapes");
}

CMat rdm1(const CVec &psi, int n) {
  const auto jw = jw_ladder_ops(n);
  CMat d(n, n);
  std::vector<CVec> ann;
  for (int q = 0; q < n; ++q) ann.push_back(jw.create[q].adjoint() * psi);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) d(p, q) = ann[p].dot(ann[q]);
  return d;
}

double rel_drift(const CMat &a, const CMat &b) {
  const double ref = a.norm();
  const double diff = (b - a).norm();
  return ref > 0.0 ? diff / ref : diff;
}

}  // namespace

double basis_overlap(const RMat &qa, const RMat &qb) {
  if (qa.rows() != qb.rows() || qa.cols() != qb.cols() || qa.cols() == 0)
    throw ShapeError("overlap needs two bases of equal shape");
  return (qa.transpose() * qb).squaredNorm() / static_cast<double>(qa.cols());
}

double subspace_overlap(const T2Tensor &a, const T2Tensor &b, int r, OverlapKind kind) {
  check_shapes(a, b);
  if (r < 1) throw RankError("rank must be positive");
  const Svd sa = svd_of(a), sb = svd_of(b);
  if (r > std::min(sa.rank, sb.rank))
    throw RankError("rank " + std::to_string(r) + " exceeds the numerical rank (" +
                    std::to_string(std::min(sa.rank, sb.rank)) + ")");
  return overlap_from(sa, sb, r, kind);
}

OverlapCurve wauc(const T2Tensor &a, const T2Tensor &b, double eps_s, OverlapKind kind) {
  check_shapes(a, b);
  const Svd sa = svd_of(a), sb = svd_of(b);
  if (sa.rank == 0 || sb.rank == 0) throw ZeroTensorError("amplitude tensor is zero");
  OverlapCurve c;
  int r_eps = 0;
  for (int k = 0; k < sa.rank; ++k)
    if (sa.s(k) / sa.s(0) >= eps_s) ++r_eps;
  c.r_eps = std::min(r_eps, sb.rank);
  double tot = 0.0;
  for (int k = 0; k < c.r_eps; ++k) tot += sa.s(k) * sa.s(k);
  for (int r = 1; r <= c.r_eps; ++r) {
    const double w = sa.s(r - 1) * sa.s(r - 1) / tot;
    const double ov = overlap_from(sa, sb, r, kind);
    c.ranks.push_back(r);
    c.ov.push_back(ov);
    c.weights.push_back(w);
    c.wauc += w * ov;
  }
  return c;
}

std::vector<double> ladder_weights(const GeneratorPool &gen) {
  std::vector<double> w;
  for (const auto &l : gen.ladders) {
    const double u = wedge_pairs(l.x, l.y).squaredNorm();
    const double v = wedge_pairs(l.r, l.s).squaredNorm();
    w.push_back(l.coefficient * l.coefficient * u * v);
  }
  return w;
}

OneShotMask one_shot_mask(const GeneratorPool &gen, double eta) {
  if (gen.ladders.empty()) throw MaskError("empty generator pool");
  if (!(eta > 0.0 && eta <= 1.0)) throw ValidationError("eta must lie in (0, 1]");
  OneShotMask out;
  out.weights = ladder_weights(gen);
  const double total = std::accumulate(out.weights.begin(), out.weights.end(), 0.0);
  std::vector<int> order(out.weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return out.weights[a] > out.weights[b]; });
  std::vector<int> picked;
  double acc = 0.0;
  for (int s : order) {
    if (total > 0.0 && acc / total >= eta * (1.0 - 1e-12)) break;
    picked.push_back(s + 1);
    acc += out.weights[s];
  }
  out.coverage = total > 0.0 ? acc / total : 1.0;
  out.mask = Mask::of(picked, "eta=" + std::to_string(eta));
  return out;
}

DensityDrift density_matrix_drift(const GeneratorPool &gen_old, const GeneratorPool &gen_new,
                                  const Mask &mask, const CVec &reference, int n) {
  if (n > 8) throw ValidationError("density drift limited to n <= 8");
  if (gen_old.n_so != n || gen_new.n_so != n || gen_old.n_occ != gen_new.n_occ)
    throw ValidationError("pools do not share the register partition");
  if (reference.size() != (Eigen::Index{1} << n)) throw ShapeError("reference size");
  const double nrm = reference.norm();
  if (nrm == 0.0) throw ValidationError("reference state has zero norm");
  const CVec ref = reference / nrm;
  DensityDrift d;
  d.d_old = rdm1(exact_exp_sigma(gen_old, mask) * ref, n);
  d.d_new = rdm1(exact_exp_sigma(gen_new, mask) * ref, n);
  const int no = gen_new.n_occ, nv = n - no;
  d.occ_drift = rel_drift(d.d_old.topLeftCorner(no, no), d.d_new.topLeftCorner(no, no));
  d.vir_drift = rel_drift(d.d_old.bottomRightCorner(nv, nv), d.d_new.bottomRightCorner(nv, nv));
  d.trace_occ = d.d_new.topLeftCorner(no, no).trace().real();
  d.trace_vir = d.d_new.bottomRightCorner(nv, nv).trace().real();
  return d;
}

}  // namespace composer
