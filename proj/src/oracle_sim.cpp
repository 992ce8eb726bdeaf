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

#include "composer/oracle_sim.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "composer/errors.hpp"
#include "composer/fermion.hpp"

namespace composer {

namespace {

int argmax_abs(const CVec &u) {
  int best = 0;
  for (Eigen::Index k = 1; k < u.size(); ++k)
    if (std::abs(u(k)) > std::abs(u(best))) best = static_cast<int>(k);
  return best;
}

std::vector<int> range_modes(int lo, int hi) {
  std::vector<int> m;
  for (int k = lo; k < hi; ++k) m.push_back(k);
  return m;
}

// alpha-mode coordinates of a spin-paired one-body vector
CVec alpha_part(const CVec &u) {
  CVec a(u.size() / 2);
  for (Eigen::Index k = 0; k < a.size(); ++k) a(k) = u(2 * k);
  return a;
}

CMat hadamard_mix(const CMat &m0, const CMat &m1) {
  const Eigen::Index d = m0.rows();
  CMat w(2 * d, 2 * d);
  w.topLeftCorner(d, d) = 0.5 * (m0 + m1);
  w.topRightCorner(d, d) = 0.5 * (m0 - m1);
  w.bottomLeftCorner(d, d) = 0.5 * (m0 - m1);
  w.bottomRightCorner(d, d) = 0.5 * (m0 + m1);
  return w;
}

// |0><0|_A (x) I + |1><1|_A (x) (-R0) conjugated by H_A; block |vac><vac|
CMat vacuum_projector_unitary(int n) {
  const Eigen::Index d = Eigen::Index{1} << n;
  CMat mr = -CMat::Identity(d, d);
  mr(0, 0) = 1.0;
  return hadamard_mix(CMat::Identity(d, d), mr);
}

CMat pad_high(const CMat &u, int extra) {
  if (extra == 0) return u;
  const Eigen::Index e = Eigen::Index{1} << extra;
  return kron(CMat::Identity(e, e), u);
}

void perturb_first(LadderSchedule &s, double delta) {
  if (delta != 0.0 && !s.thetas.empty()) s.thetas[0] += delta;
}

CMat pair_operator(int n, int n_occ, const CVec &u_pairs, const CVec &v_pairs) {
  const int nv = n - n_occ;
  const auto vp = pair_list(nv), op = pair_list(n_occ);
  std::vector<FermionTerm> terms;
  for (std::size_t a = 0; a < vp.size(); ++a) {
    if (u_pairs(a) == 0.0) continue;
    for (std::size_t i = 0; i < op.size(); ++i) {
      if (v_pairs(i) == 0.0) continue;
      const int pa = n_occ + vp[a].first, pb = n_occ + vp[a].second;
      const int qi = op[i].first, qj = op[i].second;
      terms.push_back({u_pairs(a) * std::conj(v_pairs(i)),
                       {{pa, true}, {pb, true}, {qj, false}, {qi, false}}});
    }
  }
  return dense_operator(n, terms);
}

}  // namespace

CMat BlockEncoding::block() const { return extract_block(unitary, n_system); }

JordanWigner jw_ladder_ops(int n) {
  if (n < 0 || n > 24) throw ValidationError("register too large for the JW oracle");
  JordanWigner jw;
  jw.n = n;
  const std::uint64_t dim = std::uint64_t{1} << n;
  for (int p = 0; p < n; ++p) {
    std::vector<Eigen::Triplet<cplx>> trip;
    const std::uint64_t bit = std::uint64_t{1} << p;
    for (std::uint64_t x = 0; x < dim; ++x) {
      if (x & bit) continue;
      const int sign = (popcount(x & (bit - 1)) % 2) ? -1 : 1;
      trip.emplace_back(static_cast<int>(x | bit), static_cast<int>(x),
                        static_cast<double>(sign));
    }
    Eigen::SparseMatrix<cplx> m(dim, dim);
    m.setFromTriplets(trip.begin(), trip.end());
    jw.create.push_back(std::move(m));
  }
  return jw;
}

PivotTable default_pivots(const HamiltonianPool &ham, const GeneratorPool &gen) {
  PivotTable t;
  for (const auto &l : ham.one_body)
    t.one_body.push_back(argmax_abs(l.spin_paired ? alpha_part(l.u) : l.u));
  for (const auto &l : gen.ladders)
    t.generator.emplace_back(argmax_abs(wedge_pairs(l.x, l.y)),
                             argmax_abs(wedge_pairs(l.r, l.s)));
  return t;
}

// ---- dense operators -------------------------------------------------------

CMat dense_hamiltonian(const IntegralSet &ints, bool include_constant) {
  const int n = ints.n_so;
  CMat h = dense_one_body(n, ints.h.cast<cplx>());
  std::vector<cplx> g(ints.eri.size());
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = 0.5 * ints.eri[k];
  h += dense_two_body(n, g);
  if (include_constant) h += ints.e_nn * CMat::Identity(h.rows(), h.cols());
  return h;
}

CMat dense_channel_operator(const CholeskyChannel &ch, int n) {
  CMat c = CMat::Zero(n, n);
  for (int k = 0; k < ch.rank(); ++k) {
    const RVec q = ch.rotation.col(k);
    c += ch.eigvals(k) * (q * q.transpose()).cast<cplx>();
  }
  return dense_one_body(n, c);
}

CMat dense_pool_hamiltonian(const HamiltonianPool &pool, bool include_constant) {
  const int n = pool.n_so;
  const Eigen::Index dim = Eigen::Index{1} << n;
  CMat h = CMat::Zero(dim, dim);
  for (const auto &l : pool.one_body)
    h += l.coefficient * dense_ladder_operator(l, n, pool.n_elec);
  for (const auto &ch : pool.channels) {
    const CMat o = dense_channel_operator(ch, n);
    h += 0.5 * o * o;
  }
  if (include_constant) h += pool.e_nn * CMat::Identity(dim, dim);
  return h;
}

CMat dense_ladder_operator(const RankOneLadder &l, int n, int n_occ) {
  switch (l.kind) {
    case LadderKind::Bilinear: {
      CMat c = l.u * l.v.adjoint();
      if (l.spin_paired) {
        CMat b = CMat::Zero(n, n);
        for (int p = 0; p + 1 < n; p += 2)
          for (int q = 0; q + 1 < n; q += 2) b(p + 1, q + 1) = c(p, q);
        c += b;
      }
      return dense_one_body(n, c);
    }
    case LadderKind::PairExcitation:
      return pair_operator(n, n_occ, wedge_pairs(l.x, l.y), wedge_pairs(l.r, l.s));
    case LadderKind::ProjectedQuadratic:
      break;
  }
  throw ValidationError("quadratic ladders need their channel; use dense_channel_operator");
}

CMat dense_generator(const GeneratorPool &pool, const Mask &mask) {
  mask.check(pool.ell_sigma());
  const Eigen::Index dim = Eigen::Index{1} << pool.n_so;
  CMat s = CMat::Zero(dim, dim);
  for (int a : mask.indices) {
    const auto &l = pool.ladders[a - 1];
    const CMat op = dense_ladder_operator(l, pool.n_so, pool.n_occ);
    s += l.coefficient * (op - op.adjoint());
  }
  return s;
}

CMat exact_exp_sigma(const GeneratorPool &pool, const Mask &mask) {
  return expm_antihermitian(dense_generator(pool, mask));
}

// ---- encodings -------------------------------------------------------------

BlockEncoding dyad_block_encoding(const CVec &u, const CVec &v, double lam, int n,
                                  DyadForm form, int pivot_u, int pivot_v, double perturb) {
  if (lam < 0.0) throw ValidationError("dyad coefficient must be non-negative");
  if (u.size() != n || v.size() != n) throw ShapeError("dyad vectors must have length n");
  const Eigen::Index d = Eigen::Index{1} << n;
  BlockEncoding be;
  be.n_system = n;
  be.ancillas = 1;
  if (form == DyadForm::Prep) {
    auto su = one_electron_angles(u, pivot_u, true);
    auto sv = one_electron_angles(v, pivot_v, true);
    perturb_first(su, perturb);
    const CMat uu = ladder_unitary(su), uv = ladder_unitary(sv);
    const cplx ph = std::exp(kI * (su.global_phase - sv.global_phase));
    const CMat id2 = CMat::Identity(2, 2);
    be.unitary = ph * kron(id2, uu) * vacuum_projector_unitary(n) * kron(id2, uv.adjoint());
  } else {
    if (pivot_u < 0) pivot_u = argmax_abs(u);
    auto su = one_electron_angles(u, pivot_u, false);
    auto sv = one_electron_angles(v, pivot_u, false);
    perturb_first(su, perturb);
    const CMat uu = ladder_unitary(su), uv = ladder_unitary(sv);
    const cplx ph = std::exp(kI * (su.global_phase - sv.global_phase));
    // X_f CNOT_{pivot -> f}: block n_pivot
    const std::uint64_t bit = std::uint64_t{1} << pivot_u;
    CMat g = CMat::Zero(2 * d, 2 * d);
    for (Eigen::Index x = 0; x < d; ++x) {
      const bool occ = (static_cast<std::uint64_t>(x) & bit) != 0;
      for (int f = 0; f < 2; ++f) {
        const int f1 = occ ? f : 1 - f;
        g(f1 * d + x, f * d + x) = 1.0;
      }
    }
    const CMat id2 = CMat::Identity(2, 2);
    be.unitary = ph * kron(id2, uu) * g * kron(id2, uv.adjoint());
  }
  be.report.tag = "dyad";
  be.report.ancillas = 1;
  be.report.sector = 1;
  be.report.alpha = lam > 0.0 ? lam : 1.0;
  if (lam == 0.0) be.report.flags.push_back("DegenerateCoefficient");
  FockOperator target{dense_one_body(n, u * v.adjoint()) * (lam > 0.0 ? 1.0 : 0.0), n, "dyad"};
  be.report.measured_error = restricted_block_error(be.unitary, target, 1, 1);
  return be;
}

BlockEncoding pair_dyad_block_encoding(const CVec &u_pairs, const CVec &v_pairs, int n,
                                       int n_occ, int pivot_u, int pivot_v, double perturb) {
  const int nv = n - n_occ;
  if (u_pairs.size() != n_pairs(nv) || v_pairs.size() != n_pairs(n_occ))
    throw ShapeError("pair vectors do not match the orbital partition");
  auto su = two_electron_angles(u_pairs, range_modes(n_occ, n), n, pivot_u, true);
  auto sv = two_electron_angles(v_pairs, range_modes(0, n_occ), n, pivot_v, true);
  if (perturb != 0.0) {
    if (!su.thetas.empty())
      su.thetas[0] += perturb;
    else
      perturb_first(sv, perturb);
  }
  const CMat uu = ladder_unitary(su), uv = ladder_unitary(sv);
  const cplx ph = std::exp(kI * (su.global_phase - sv.global_phase));
  const CMat id2 = CMat::Identity(2, 2);
  BlockEncoding be;
  be.n_system = n;
  be.ancillas = 1;
  be.unitary = ph * kron(id2, uu) * vacuum_projector_unitary(n) * kron(id2, uv.adjoint());
  be.report.tag = "pair-dyad";
  be.report.ancillas = 1;
  be.report.sector = 2;
  FockOperator target{pair_operator(n, n_occ, u_pairs, v_pairs), n, "pair"};
  be.report.measured_error = restricted_block_error(be.unitary, target, 1, 2);
  return be;
}

CMat number_sum_unitary(int n, const CMat &frame, const std::vector<int> &flag_modes,
                        const RVec &lambdas, int index_width) {
  const int r = static_cast<int>(lambdas.size());
  if (static_cast<int>(flag_modes.size()) != r)
    throw ShapeError("one flag mode per eigenvalue");
  if (r > (1 << index_width)) throw CapacityError("index register too narrow");
  const Eigen::Index d = Eigen::Index{1} << n;
  const Eigen::Index nidx = Eigen::Index{1} << index_width;
  const Eigen::Index dim = 2 * d * nidx;

  double gamma = lambdas.cwiseAbs().sum();
  RVec amps = RVec::Zero(nidx);
  for (int k = 0; k < r; ++k)
    amps(k) = gamma > 0.0 ? std::sqrt(std::abs(lambdas(k)) / gamma) : 0.0;
  const CMat prep = tree_prep_unitary(tree_prep_angles(amps, index_width), index_width)
                        .cast<cplx>();

  // SELECT: label k < r applies sign(lambda_k) X_f CNOT_{flag_k -> f};
  // an empty spectrum applies a bare X_f; other labels do nothing
  CMat sel = CMat::Zero(dim, dim);
  for (Eigen::Index k = 0; k < nidx; ++k)
    for (Eigen::Index f = 0; f < 2; ++f)
      for (Eigen::Index x = 0; x < d; ++x) {
        const Eigen::Index col = (k * 2 + f) * d + x;
        if (k < r) {
          const bool occ = (static_cast<std::uint64_t>(x) >> flag_modes[k]) & 1;
          const Eigen::Index f1 = occ ? f : 1 - f;
          sel((k * 2 + f1) * d + x, col) = lambdas(k) < 0.0 ? -1.0 : 1.0;
        } else if (r == 0) {
          sel((k * 2 + (1 - f)) * d + x, col) = 1.0;
        } else {
          sel(col, col) = 1.0;
        }
      }
  const CMat id_fd = CMat::Identity(2 * d, 2 * d);
  const CMat pbig = kron(prep, id_fd);
  const CMat gbig = kron(CMat::Identity(2 * nidx, 2 * nidx), frame);
  return gbig * pbig.adjoint() * sel * pbig * gbig.adjoint();
}

CMat square_encoding(const CMat &w, int n, int ancillas) {
  const Eigen::Index d = w.rows();
  const Eigen::Index sys = Eigen::Index{1} << n;
  if (d != (sys << ancillas)) throw ShapeError("square_encoding: bad register size");
  CMat wr = w;
  // right-multiply by R = 2 Pi_0 - I
  wr.rightCols(d - sys) *= -1.0;
  const CMat m0 = wr * w;
  return hadamard_mix(m0, CMat::Identity(d, d));
}

BlockEncoding onebody_block_encoding(const RankOneLadder &l, int n, int pivot,
                                     double perturb) {
  if (l.kind != LadderKind::Bilinear) throw ValidationError("one-body branch must be bilinear");
  BlockEncoding be;
  be.n_system = n;
  CMat frame;
  std::vector<int> flags;
  RVec lam;
  int iw = 0;
  if (l.spin_paired) {
    const CVec ua = alpha_part(l.u);
    std::vector<int> am, bm;
    for (int k = 0; k < n / 2; ++k) {
      am.push_back(2 * k);
      bm.push_back(2 * k + 1);
    }
    auto sa = one_electron_angles(ua, am, n, pivot, false);
    auto sb = one_electron_angles(ua, bm, n, pivot, false);
    perturb_first(sa, perturb);
    frame = ladder_unitary(sa) * ladder_unitary(sb);
    flags = {sa.pivot, sb.pivot};
    lam = RVec::Ones(2);
    iw = 1;
    be.report.alpha = 2.0;
  } else {
    auto s = one_electron_angles(l.u, range_modes(0, n), n, pivot, false);
    perturb_first(s, perturb);
    frame = ladder_unitary(s);
    flags = {s.pivot};
    lam = RVec::Ones(1);
    be.report.alpha = 1.0;
  }
  be.unitary = number_sum_unitary(n, frame, flags, lam, iw);
  be.ancillas = 1 + iw;
  be.report.tag = "one-body";
  be.report.ancillas = be.ancillas;
  FockOperator target{dense_ladder_operator(l, n, 0) / be.report.alpha, n, "n_w"};
  be.report.measured_error = restricted_block_error(be.unitary, target, be.ancillas, -1);
  return be;
}

ChannelEncoding channel_block_encoding(const CholeskyChannel &ch, int n, int index_width,
                                       double perturb, int pad_rank) {
  const int r = std::max(ch.rank(), pad_rank);
  if (r > n) throw CapacityError("channel rank exceeds the register");
  RVec lam = RVec::Zero(r);
  lam.head(ch.rank()) = ch.eigvals;
  const int need = ceil_log2(static_cast<std::uint64_t>(std::max(r, 1)));
  if (index_width < 0) index_width = need;
  if (index_width < need)
    throw CapacityError("channel rank " + std::to_string(r) + " exceeds index register");
  OrbitalRotation rot = givens_decompose(complete_orthonormal(ch.rotation));
  if (perturb != 0.0 && !rot.rotations.empty()) rot.rotations[0].theta += perturb;
  std::vector<int> flags = range_modes(0, r);
  ChannelEncoding out;
  out.linear.n_system = n;
  out.linear.ancillas = 1 + index_width;
  out.linear.unitary =
      number_sum_unitary(n, orbital_rotation_unitary(rot), flags, lam, index_width);
  const double g = ch.eigvals.cwiseAbs().sum();
  out.linear.report.tag = "channel";
  out.linear.report.alpha = g;
  out.linear.report.ancillas = out.linear.ancillas;

  out.squared.n_system = n;
  out.squared.ancillas = out.linear.ancillas + 1;
  out.squared.unitary = square_encoding(out.linear.unitary, n, out.linear.ancillas);
  out.squared.report.tag = "channel-squared";
  out.squared.report.alpha = g * g;
  out.squared.report.ancillas = out.squared.ancillas;

  const CMat o = dense_channel_operator(ch, n);
  const double inv = g > 0.0 ? 1.0 / g : 0.0;
  out.linear.report.measured_error = restricted_block_error(
      out.linear.unitary, {o * inv, n, "O"}, out.linear.ancillas, -1);
  out.squared.report.measured_error = restricted_block_error(
      out.squared.unitary, {o * o * inv * inv, n, "O^2"}, out.squared.ancillas, -1);
  return out;
}

CMat multiplex_unitary(const RVec &amps, const std::vector<double> &phases,
                       const std::vector<CMat> &unitaries,
                       const std::vector<int> &branch_ancillas, int w, int t, int n) {
  const Eigen::Index nl = Eigen::Index{1} << w;
  if (amps.size() > nl) throw CapacityError("selector register too narrow");
  const Eigen::Index dw = Eigen::Index{1} << (t + n);
  RVec a = RVec::Zero(nl);
  a.head(amps.size()) = amps;
  const RMat p = tree_prep_unitary(tree_prep_angles(a, w), w).real();
  CMat out = CMat::Zero(nl * dw, nl * dw);
  for (Eigen::Index s = 0; s < nl; ++s) {
    CMat ms;
    const bool has = s < static_cast<Eigen::Index>(unitaries.size()) && unitaries[s].size() > 0;
    if (has) {
      const int ta = branch_ancillas[s];
      if (ta > t) throw CapacityError("workspace register too narrow");
      ms = pad_high(unitaries[s], t - ta);
    } else {
      ms = CMat::Identity(dw, dw);
    }
    if (s < static_cast<Eigen::Index>(phases.size()) && phases[s] != 0.0)
      ms *= std::exp(kI * phases[s]);
    for (Eigen::Index ia = 0; ia < nl; ++ia) {
      if (p(s, ia) == 0.0) continue;
      for (Eigen::Index ib = 0; ib < nl; ++ib) {
        const double c = p(s, ia) * p(s, ib);
        if (c == 0.0) continue;
        out.block(ia * dw, ib * dw, dw, dw) += c * ms;
      }
    }
  }
  return out;
}

BlockEncoding lcu_multiplex(const std::vector<LcuBranch> &br, int w, int n, int t) {
  double alpha = 0.0;
  int tmax = 0;
  for (const auto &b : br) {
    alpha += std::abs(b.coefficient) * b.alpha;
    tmax = std::max(tmax, b.ancillas);
  }
  if (t < 0) t = tmax;
  const int need = ceil_log2(static_cast<std::uint64_t>(std::max<std::size_t>(br.size(), 1)));
  if (w < 0) w = need;
  if (w < need) throw CapacityError("selector register too narrow for the pool");
  RVec amps(br.size());
  std::vector<double> phases;
  std::vector<CMat> us;
  std::vector<int> anc;
  double bound = 0.0;
  for (std::size_t s = 0; s < br.size(); ++s) {
    amps(s) = alpha > 0.0 ? std::sqrt(std::abs(br[s].coefficient) * br[s].alpha / alpha) : 0.0;
    phases.push_back(br[s].coefficient < 0.0 ? M_PI : 0.0);
    us.push_back(br[s].unitary);
    anc.push_back(br[s].ancillas);
    bound += std::abs(br[s].coefficient) * br[s].alpha * br[s].error;
  }
  BlockEncoding be;
  be.n_system = n;
  be.ancillas = w + t;
  be.unitary = multiplex_unitary(amps, phases, us, anc, w, t, n);
  be.report.alpha = alpha;
  be.report.ancillas = be.ancillas;
  be.report.eps_lcu_bound = alpha > 0.0 ? bound / alpha : 0.0;
  for (const auto &b : br) be.report.branch_errors.push_back(b.error);
  be.report.tag = "lcu";
  return be;
}

BlockEncoding hamiltonian_block_encoding(const HamiltonianPool &pool,
                                         const HamEncodingOptions &opt) {
  const int n = pool.n_so;
  std::vector<LcuBranch> br;
  const int r1 = static_cast<int>(pool.one_body.size());
  for (int s = 0; s < pool.ell_H(); ++s) {
    const auto it = opt.perturb.find(s);
    const double dl = it == opt.perturb.end() ? 0.0 : it->second;
    LcuBranch b;
    b.coefficient = pool.branch_coefficient(s);
    b.alpha = pool.branch_alpha(s);
    FockOperator target;
    target.n = n;
    if (s < r1) {
      const int piv = s < static_cast<int>(opt.pivots.size()) ? opt.pivots[s] : -1;
      const auto e = onebody_block_encoding(pool.one_body[s], n, piv, dl);
      b.unitary = e.unitary;
      b.ancillas = e.ancillas;
      target.matrix = dense_ladder_operator(pool.one_body[s], n, 0) / b.alpha;
    } else {
      const auto &ch = pool.channels[s - r1];
      const auto e =
          channel_block_encoding(ch, n, opt.channel_index_width, dl, opt.channel_pad_rank);
      b.unitary = e.squared.unitary;
      b.ancillas = e.squared.ancillas;
      const CMat o = dense_channel_operator(ch, n);
      target.matrix = b.alpha > 0.0 ? CMat(o * o / b.alpha) : CMat::Zero(o.rows(), o.cols());
    }
    b.error = restricted_block_error(b.unitary, target, b.ancillas, opt.sector);
    br.push_back(std::move(b));
  }
  BlockEncoding be = lcu_multiplex(br, opt.selector_width, n, opt.workspace_width);
  be.report.tag = "hamiltonian";
  be.report.sector = opt.sector;
  const CMat h = dense_pool_hamiltonian(pool, false);
  be.report.measured_error = restricted_block_error(
      be.unitary, {h / be.report.alpha, n, "H/alpha"}, be.ancillas, opt.sector);
  return be;
}

BlockEncoding generator_branch(const RankOneLadder &l, int n, int n_occ, int pivot_u,
                               int pivot_v, double perturb) {
  if (l.kind != LadderKind::PairExcitation)
    throw ValidationError("generator branch must be a pair excitation");
  const CVec up = wedge_pairs(l.x, l.y), vp = wedge_pairs(l.r, l.s);
  const auto d = pair_dyad_block_encoding(up, vp, n, n_occ, pivot_u, pivot_v, perturb);
  BlockEncoding be;
  be.n_system = n;
  be.ancillas = 2;
  be.unitary = hadamard_mix(kI * d.unitary, -kI * d.unitary.adjoint());
  be.report.tag = "generator-branch";
  be.report.alpha = GeneratorPool::ladder_alpha(l);
  be.report.ancillas = 2;
  be.report.sector = 2;
  const CMat op = pair_operator(n, n_occ, up, vp);
  const CMat a = kI * (op - op.adjoint());
  be.report.measured_error =
      restricted_block_error(be.unitary, {a / (2.0 * be.report.alpha), n, "A/2"}, 2, 2);
  return be;
}

BlockEncoding generator_block_encoding(const GeneratorPool &pool, const Mask &mask,
                                       const GenEncodingOptions &opt) {
  mask.check(pool.ell_sigma());
  const int n = pool.n_so;
  const int ell = pool.ell_sigma();
  double abar = 0.0;
  for (int s : mask.indices) {
    const auto &l = pool.ladders[s - 1];
    abar += 2.0 * std::abs(l.coefficient) * GeneratorPool::ladder_alpha(l);
  }
  double norm = opt.alpha_bar > 0.0 ? opt.alpha_bar : abar;
  if (abar > norm * (1.0 + 1e-12))
    throw ValidationError("alpha_bar override is below the masked pool norm");
  if (norm <= 0.0) norm = 1.0;  // empty mask: the block is zero

  const int need = ceil_log2(static_cast<std::uint64_t>(ell + 1));
  const int w = opt.selector_width < 0 ? need : opt.selector_width;
  if (w < need) throw CapacityError("selector register too narrow for the generator pool");
  const int t = opt.workspace_width < 0 ? 2 : opt.workspace_width;
  if (t < 2) throw CapacityError("generator workspace needs two qubits");

  const Eigen::Index nl = Eigen::Index{1} << w;
  RVec amps = RVec::Zero(nl);
  std::vector<double> phases(nl, 0.0);
  std::vector<CMat> us(nl);
  std::vector<int> anc(nl, 2);
  // null branch: X on the dyad ancilla
  {
    const Eigen::Index d = Eigen::Index{1} << n;
    CMat x = CMat::Zero(4 * d, 4 * d);
    for (Eigen::Index c = 0; c < 2; ++c)
      for (Eigen::Index a = 0; a < 2; ++a)
        x.block((2 * c + 1 - a) * d, (2 * c + a) * d, d, d) = CMat::Identity(d, d);
    us[0] = x;
  }
  double used = 0.0, bound = 0.0;
  std::vector<double> errs;
  for (int s = 1; s <= ell; ++s) {
    const auto &l = pool.ladders[s - 1];
    int pu = -1, pv = -1;
    if (s - 1 < static_cast<int>(opt.pivots.size())) std::tie(pu, pv) = opt.pivots[s - 1];
    const auto it = opt.perturb.find(s);
    const double dl = it == opt.perturb.end() ? 0.0 : it->second;
    const auto b = generator_branch(l, n, pool.n_occ, pu, pv, dl);
    us[s] = b.unitary;
    phases[s] = l.coefficient < 0.0 ? M_PI : 0.0;
    if (mask.contains(s)) {
      const double wgt = 2.0 * std::abs(l.coefficient) * b.report.alpha / norm;
      amps(s) = std::sqrt(wgt);
      used += wgt;
      bound += wgt * b.report.measured_error;
      errs.push_back(b.report.measured_error);
    }
  }
  amps(0) = std::sqrt(std::max(0.0, 1.0 - used));

  BlockEncoding be;
  be.n_system = n;
  be.ancillas = w + t;
  be.unitary = multiplex_unitary(amps, phases, us, anc, w, t, n);
  be.report.tag = "generator";
  be.report.alpha = norm;
  be.report.ancillas = be.ancillas;
  be.report.sector = opt.sector;
  be.report.branch_errors = errs;
  be.report.eps_lcu_bound = bound;
  const CMat a = kI * dense_generator(pool, mask) / norm;
  be.report.measured_error =
      restricted_block_error(be.unitary, {a, n, "i sigma/alpha_bar"}, be.ancillas, opt.sector);
  return be;
}

CMat extract_block(const CMat &w, int n) {
  const Eigen::Index d = Eigen::Index{1} << n;
  if (w.rows() < d) throw ShapeError("encoding smaller than the system register");
  return w.topLeftCorner(d, d);
}

double restricted_block_error(const CMat &w, const FockOperator &target, int ancillas,
                              int sector, const std::vector<std::uint64_t> *model_space) {
  const int n = target.n;
  if (w.rows() != (Eigen::Index{1} << (n + ancillas)))
    throw ShapeError("encoding size does not match n + ancillas");
  const CMat diff = extract_block(w, n) - target.matrix;
  std::vector<std::uint64_t> idx;
  if (sector >= 0) {
    idx = sector_indices(n, sector);
  } else {
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) idx.push_back(x);
  }
  if (model_space) {
    std::vector<std::uint64_t> keep;
    for (auto x : idx)
      if (std::find(model_space->begin(), model_space->end(), x) != model_space->end())
        keep.push_back(x);
    idx = std::move(keep);
  }
  if (idx.empty()) return 0.0;
  return spectral_norm(restrict_to(diff, idx));
}

bool preserves_sectors(const CMat &u, int n, double tol) {
  const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  for (Eigen::Index j = 0; j < u.cols(); ++j)
    for (Eigen::Index i = 0; i < u.rows(); ++i)
      if (std::abs(u(i, j)) > tol &&
          popcount(static_cast<std::uint64_t>(i) & mask) !=
              popcount(static_cast<std::uint64_t>(j) & mask))
        return false;
  return true;
}

}  // namespace composer
