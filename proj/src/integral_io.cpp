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

#include "composer/integral_io.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <regex>
#include <sstream>

#include "composer/errors.hpp"

namespace composer {

namespace {

std::size_t sp_index(int m, int p, int q, int r, int s) {
  const std::size_t n = static_cast<std::size_t>(m);
  return ((static_cast<std::size_t>(p) * n + q) * n + r) * n + s;
}

void set_eight(std::vector<double> &eri, int m, int i, int j, int k, int l,
               double v) {
  const int idx[8][4] = {{i, j, k, l}, {j, i, k, l}, {i, j, l, k},
                         {j, i, l, k}, {k, l, i, j}, {l, k, i, j},
                         {k, l, j, i}, {l, k, j, i}};
  for (const auto &t : idx) eri[sp_index(m, t[0], t[1], t[2], t[3])] = v;
}

std::string upper(std::string s) {
  for (auto &c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_real(std::string tok, double &out) {
  for (auto &c : tok)
    if (c == 'D' || c == 'd') c = 'E';
  char *end = nullptr;
  out = std::strtod(tok.c_str(), &end);
  return end && *end == '\0' && !tok.empty();
}

bool parse_int(const std::string &tok, long &out) {
  if (tok.empty()) return false;
  char *end = nullptr;
  out = std::strtol(tok.c_str(), &end, 10);
  return end && *end == '\0';
}

std::vector<std::string> split_ws(const std::string &s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

bool looks_like_body(const std::string &line) {
  const auto toks = split_ws(line);
  if (toks.size() != 5) return false;
  double v;
  long k;
  if (!parse_real(toks[0], v)) return false;
  for (int i = 1; i < 5; ++i)
    if (!parse_int(toks[i], k)) return false;
  return true;
}

struct NamelistEntry {
  std::vector<std::string> values;
  int line = 0;
};

}  // namespace

IntegralSet from_spatial(int n_spatial, int n_elec, double e_nn,
                         const RMat &h_spatial,
                         const std::vector<double> &eri_spatial,
                         const RVec &orb_energies_spatial) {
  const int m = n_spatial;
  if (n_elec < 0 || n_elec > 2 * m)
    throw ValidationError("NELEC=" + std::to_string(n_elec) +
                          " exceeds 2*NORB=" + std::to_string(2 * m));
  IntegralSet out;
  out.n_spatial = m;
  out.n_so = 2 * m;
  out.n_elec = n_elec;
  out.e_nn = e_nn;
  const int n = out.n_so;
  out.h = RMat::Zero(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (p % 2 == q % 2) out.h(p, q) = h_spatial(p / 2, q / 2);
  out.eri.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r) {
        if (p % 2 != r % 2) continue;
        for (int s = 0; s < n; ++s) {
          if (q % 2 != s % 2) continue;
          out.eri[out.eri_index(p, q, r, s)] =
              eri_spatial[sp_index(m, p / 2, r / 2, q / 2, s / 2)];
        }
      }
  if (orb_energies_spatial.size() == m) {
    out.orb_energies.resize(n);
    for (int p = 0; p < n; ++p) out.orb_energies(p) = orb_energies_spatial(p / 2);
  }
  return out;
}

IntegralSet parse_fcidump(std::istream &in) {
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);

  // Header: from the first non-blank line up to &END or '/', or until the
  // first line that already looks like an integral record.
  std::size_t li = 0;
  while (li < lines.size() && trim(lines[li]).empty()) ++li;
  if (li == lines.size()) throw ParseError("empty input, missing namelist header", 1);
  const int header_line = static_cast<int>(li) + 1;

  std::map<std::string, NamelistEntry> keys;
  std::string current;
  bool terminated = false;
  static const std::regex eq_ws("\\s*=\\s*");
  for (; li < lines.size() && !terminated; ++li) {
    std::string text = lines[li];
    if (!keys.empty() && looks_like_body(text)) break;
    std::string up = upper(text);
    auto pos_end = up.find("&END");
    if (pos_end != std::string::npos) {
      text = text.substr(0, pos_end);
      terminated = true;
    } else {
      const std::string t = trim(text);
      if (!t.empty() && t.back() == '/') {
        text = t.substr(0, t.size() - 1);
        terminated = true;
      }
    }
    up = upper(text);
    auto pos_fci = up.find("&FCI");
    if (pos_fci != std::string::npos) text.erase(pos_fci, 4);
    text = std::regex_replace(text, eq_ws, "=");
    std::replace(text.begin(), text.end(), ',', ' ');
    for (const auto &tok : split_ws(text)) {
      const auto eq = tok.find('=');
      if (eq != std::string::npos) {
        current = upper(tok.substr(0, eq));
        if (current.empty())
          throw ParseError("malformed namelist token '" + tok + "'",
                           static_cast<int>(li) + 1);
        keys[current].line = static_cast<int>(li) + 1;
        const std::string val = tok.substr(eq + 1);
        if (!val.empty()) keys[current].values.push_back(val);
      } else {
        if (current.empty())
          throw ParseError("malformed namelist token '" + tok + "'",
                           static_cast<int>(li) + 1);
        keys[current].values.push_back(tok);
      }
    }
  }

  auto get_int = [&](const std::string &key) -> long {
    auto it = keys.find(key);
    if (it == keys.end())
      throw ParseError("namelist is missing " + key, header_line);
    long v;
    if (it->second.values.size() != 1 || !parse_int(it->second.values[0], v))
      throw ParseError("malformed value for " + key, it->second.line);
    return v;
  };
  const long norb = get_int("NORB");
  const long nelec = get_int("NELEC");
  if (norb <= 0) throw ParseError("NORB must be positive", keys["NORB"].line);
  if (nelec < 0) throw ParseError("NELEC must be nonnegative", keys["NELEC"].line);
  // ORBSYM / ISYM / MS2 are read but not used.
  if (nelec > 2 * norb)
    throw ValidationError("NELEC=" + std::to_string(nelec) + " exceeds 2*NORB=" +
                          std::to_string(2 * norb));

  const int m = static_cast<int>(norb);
  RMat h = RMat::Zero(m, m);
  std::vector<double> eri(static_cast<std::size_t>(m) * m * m * m, 0.0);
  RVec eps = RVec::Zero(m);
  bool have_eps = false;
  double e_nn = 0.0;

  for (; li < lines.size(); ++li) {
    const int ln = static_cast<int>(li) + 1;
    const auto toks = split_ws(lines[li]);
    if (toks.empty()) continue;
    if (toks.size() != 5) throw ParseError("expected 'value i j k l'", ln);
    double v;
    if (!parse_real(toks[0], v)) throw ParseError("bad value '" + toks[0] + "'", ln);
    long idx[4];
    for (int k = 0; k < 4; ++k) {
      if (!parse_int(toks[k + 1], idx[k]))
        throw ParseError("bad index '" + toks[k + 1] + "'", ln);
      if (idx[k] < 0 || idx[k] > norb)
        throw ParseError("index " + std::to_string(idx[k]) + " out of range 0.." +
                             std::to_string(norb),
                         ln);
    }
    const long i = idx[0], j = idx[1], k = idx[2], l = idx[3];
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      e_nn = v;
    } else if (i > 0 && j > 0 && k > 0 && l > 0) {
      set_eight(eri, m, i - 1, j - 1, k - 1, l - 1, v);
    } else if (i > 0 && j > 0 && k == 0 && l == 0) {
      h(i - 1, j - 1) = v;
      h(j - 1, i - 1) = v;
    } else if (i > 0 && j == 0 && k == 0 && l == 0) {
      eps(i - 1) = v;
      have_eps = true;
    } else {
      throw ParseError("unsupported index pattern", ln);
    }
  }
  return from_spatial(m, static_cast<int>(nelec), e_nn, h, eri,
                      have_eps ? eps : RVec());
}

IntegralSet parse_fcidump_text(const std::string &text) {
  std::istringstream is(text);
  return parse_fcidump(is);
}

IntegralSet load_fcidump(const std::string &path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open " + path);
  return parse_fcidump(f);
}

std::string write_fcidump(const IntegralSet &ints) {
  if (!is_spin_restricted(ints.h, 0.0))
    throw ValidationError("FCIDUMP output needs spin-restricted integrals");
  const int m = ints.n_spatial;
  std::ostringstream os;
  os << "&FCI NORB=" << m << ",NELEC=" << ints.n_elec << ",MS2=0,\n ORBSYM=";
  for (int k = 0; k < m; ++k) os << "1,";
  os << "\n ISYM=1,\n&END\n";
  char buf[96];
  auto rec = [&](double v, int i, int j, int k, int l) {
    std::snprintf(buf, sizeof buf, "%.17g %d %d %d %d\n", v, i, j, k, l);
    os << buf;
  };
  // spatial (ij|kl) = <(2i)(2k)|(2j)(2l)>
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l <= k; ++l) {
          if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l) continue;
          const double v = ints.eri_at(2 * i, 2 * k, 2 * j, 2 * l);
          if (v != 0.0) rec(v, i + 1, j + 1, k + 1, l + 1);
        }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = ints.h(2 * i, 2 * j);
      if (v != 0.0) rec(v, i + 1, j + 1, 0, 0);
    }
  if (ints.has_orb_energies())
    for (int i = 0; i < m; ++i) rec(ints.orb_energies(2 * i), i + 1, 0, 0, 0);
  rec(ints.e_nn, 0, 0, 0, 0);
  return os.str();
}

namespace {

// Closed-shell Fock in an orthonormal spatial basis: F = h + 2J - K.
RMat spatial_fock(const RMat &h, const std::vector<double> &eri, int m,
                  const RMat &dens) {
  RMat f = h;
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q) {
      double acc = 0.0;
      for (int r = 0; r < m; ++r)
        for (int s = 0; s < m; ++s)
          acc += dens(r, s) * (2.0 * eri[sp_index(m, p, q, r, s)] -
                               eri[sp_index(m, p, r, q, s)]);
      f(p, q) += acc;
    }
  return f;
}

RMat density_from(const RMat &c, int nocc) {
  const RMat co = c.leftCols(nocc);
  return co * co.transpose();
}

double commutator_norm(const RMat &f, const RMat &dens) {
  return (f * dens - dens * f).cwiseAbs().maxCoeff();
}

// Restricted SCF with DIIS, falling back to level shifting. Returns false when
// no aufbau solution is found.
bool rhf_orbitals(const RMat &h, const std::vector<double> &eri, int m, int nocc,
                  RMat &c_out, RVec &eps) {
  const double tol = 1e-12;
  Eigen::SelfAdjointEigenSolver<RMat> es(h);
  RMat dens = density_from(es.eigenvectors(), nocc);
  bool converged = false;
  std::vector<RMat> fs, errs;
  const int max_hist = 8;
  for (int it = 0; it < 300 && !converged; ++it) {
    RMat f = spatial_fock(h, eri, m, dens);
    RMat err = f * dens - dens * f;
    if (err.cwiseAbs().maxCoeff() < tol) {
      converged = true;
      break;
    }
    fs.push_back(f);
    errs.push_back(err);
    if (static_cast<int>(fs.size()) > max_hist) {
      fs.erase(fs.begin());
      errs.erase(errs.begin());
    }
    RMat fx = f;
    const int k = static_cast<int>(fs.size());
    if (k >= 2) {
      RMat b = RMat::Zero(k + 1, k + 1);
      RVec rhs = RVec::Zero(k + 1);
      for (int a = 0; a < k; ++a)
        for (int bb = 0; bb < k; ++bb) b(a, bb) = (errs[a].array() * errs[bb].array()).sum();
      for (int a = 0; a < k; ++a) b(a, k) = b(k, a) = -1.0;
      rhs(k) = -1.0;
      RVec coef = b.colPivHouseholderQr().solve(rhs);
      if (coef.allFinite()) {
        fx.setZero();
        for (int a = 0; a < k; ++a) fx += coef(a) * fs[a];
      }
    }
    Eigen::SelfAdjointEigenSolver<RMat> fe(fx);
    RMat newdens = density_from(fe.eigenvectors(), nocc);
    dens = (it < 5) ? RMat(0.5 * dens + 0.5 * newdens) : newdens;
  }
  const RMat id = RMat::Identity(m, m);
  for (double shift : {0.5, 2.0, 8.0}) {
    if (converged) break;
    Eigen::SelfAdjointEigenSolver<RMat> e0(h);
    dens = density_from(e0.eigenvectors(), nocc);
    for (int it = 0; it < 4000; ++it) {
      const RMat f = spatial_fock(h, eri, m, dens);
      if (commutator_norm(f, dens) < tol) {
        converged = true;
        break;
      }
      Eigen::SelfAdjointEigenSolver<RMat> fe(f + shift * (id - dens));
      dens = density_from(fe.eigenvectors(), nocc);
    }
  }
  if (!converged) return false;
  const RMat f = spatial_fock(h, eri, m, dens);
  Eigen::SelfAdjointEigenSolver<RMat> fe(f);
  // aufbau: the occupied space must be spanned by the lowest eigenvectors
  if (nocc > 0 && nocc < m) {
    if (fe.eigenvalues()(nocc) - fe.eigenvalues()(nocc - 1) < 1e-6) return false;
    const RMat low = density_from(fe.eigenvectors(), nocc);
    if ((low - dens).cwiseAbs().maxCoeff() > 1e-8) return false;
  }
  eps = fe.eigenvalues();
  c_out = fe.eigenvectors();
  return true;
}

}  // namespace

IntegralSet synth_instance(std::uint64_t seed, int n_spatial, int n_elec) {
  if (n_spatial < 1 || n_spatial > 8)
    throw ValidationError("synth_instance supports 1..8 spatial orbitals");
  if (n_elec % 2 != 0) throw ValidationError("n_elec must be even");
  if (n_elec < 0 || n_elec > 2 * n_spatial)
    throw ValidationError("n_elec exceeds 2*n_spatial");
  const int m = n_spatial;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  // redraw from the same stream until the closed-shell SCF has an aufbau
  // solution, so the result stays a pure function of the seed
  RMat h(m, m), c;
  std::vector<double> eri(static_cast<std::size_t>(m) * m * m * m, 0.0);
  RVec eps;
  bool ok = false;
  for (int attempt = 0; attempt < 200 && !ok; ++attempt) {
    for (int p = 0; p < m; ++p)
      for (int q = 0; q <= p; ++q) h(p, q) = h(q, p) = unif(rng);
    std::fill(eri.begin(), eri.end(), 0.0);
    const double scale = 0.5;
    for (int mu = 0; mu < m; ++mu) {
      RMat g(m, m);
      for (int p = 0; p < m; ++p)
        for (int q = 0; q <= p; ++q) g(p, q) = g(q, p) = scale * unif(rng);
      for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q)
          for (int r = 0; r < m; ++r)
            for (int s = 0; s < m; ++s) eri[sp_index(m, p, q, r, s)] += g(p, q) * g(r, s);
    }
    ok = rhf_orbitals(h, eri, m, n_elec / 2, c, eps);
  }
  if (!ok) throw ValidationError("closed-shell SCF did not converge");

  // rotate to the canonical basis
  const RMat hmo = c.transpose() * h * c;
  std::vector<double> t1(eri.size(), 0.0), t2(eri.size(), 0.0);
  auto transform_axis = [&](const std::vector<double> &src,
                            std::vector<double> &dst, int axis) {
    std::fill(dst.begin(), dst.end(), 0.0);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int cc = 0; cc < m; ++cc)
          for (int d = 0; d < m; ++d) {
            int id[4] = {a, b, cc, d};
            const double v = src[sp_index(m, a, b, cc, d)];
            if (v == 0.0) continue;
            for (int x = 0; x < m; ++x) {
              int od[4] = {id[0], id[1], id[2], id[3]};
              od[axis] = x;
              dst[sp_index(m, od[0], od[1], od[2], od[3])] += c(id[axis], x) * v;
            }
          }
  };
  transform_axis(eri, t1, 0);
  transform_axis(t1, t2, 1);
  transform_axis(t2, t1, 2);
  transform_axis(t1, t2, 3);
  // restore exact 8-fold symmetry lost to roundoff
  std::vector<double> sym(eri.size(), 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l <= k; ++l) {
          if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l) continue;
          const int idx[8][4] = {{i, j, k, l}, {j, i, k, l}, {i, j, l, k},
                                 {j, i, l, k}, {k, l, i, j}, {l, k, i, j},
                                 {k, l, j, i}, {l, k, j, i}};
          double acc = 0.0;
          for (const auto &t : idx) acc += t2[sp_index(m, t[0], t[1], t[2], t[3])];
          set_eight(sym, m, i, j, k, l, acc / 8.0);
        }
  const RMat hsym = 0.5 * (hmo + hmo.transpose());
  return from_spatial(m, n_elec, 0.0, hsym, sym, eps);
}

RMat mean_field_shift(const IntegralSet &ints) {
  const int n = ints.n_so;
  RMat out = ints.h;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      double acc = 0.0;
      for (int s = 0; s < n; ++s) acc += ints.eri_at(p, q, s, s);
      out(p, q) -= 0.5 * acc;
    }
  return out;
}

RMat supermatrix(const IntegralSet &ints) {
  const int n = ints.n_so;
  RMat m(n * n, n * n);
  for (int p = 0; p < n; ++p)
    for (int r = 0; r < n; ++r)
      for (int q = 0; q < n; ++q)
        for (int s = 0; s < n; ++s) m(p * n + r, q * n + s) = ints.eri_at(p, q, r, s);
  return m;
}

double supermatrix_min_eigenvalue(const IntegralSet &ints) {
  if (ints.n_so == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<RMat> es(supermatrix(ints), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

void validate(const IntegralSet &ints) {
  const int n = ints.n_so;
  if (n != 2 * ints.n_spatial) throw ValidationError("n_so != 2*n_spatial");
  if (ints.h.rows() != n || ints.h.cols() != n) throw ValidationError("h has wrong shape");
  if (ints.eri.size() != static_cast<std::size_t>(n) * n * n * n)
    throw ValidationError("eri has wrong size");
  if ((ints.h - ints.h.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ValidationError("h is not Hermitian");
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          const double v = ints.eri_at(p, q, r, s);
          if (std::abs(v - ints.eri_at(q, p, s, r)) > 1e-12 ||
              std::abs(v - ints.eri_at(r, s, p, q)) > 1e-12)
            throw ValidationError("eri symmetry violated at <" + std::to_string(p) +
                                  std::to_string(q) + "|" + std::to_string(r) +
                                  std::to_string(s) + ">");
        }
  if (ints.n_elec < 0 || ints.n_elec > n) throw ValidationError("bad electron count");
}

bool is_spin_restricted(const RMat &h, double tol) {
  const Eigen::Index n = h.rows();
  if (n % 2 != 0) return false;
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index q = 0; q < n; ++q) {
      if (p % 2 != q % 2) {
        if (std::abs(h(p, q)) > tol) return false;
      } else if (p % 2 == 0) {
        if (std::abs(h(p, q) - h(p + 1, q + 1)) > tol) return false;
      }
    }
  return true;
}

RMat closed_shell_fock(const IntegralSet &ints) {
  const int n = ints.n_so;
  RMat f = ints.h;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int i = 0; i < ints.n_elec; ++i)
        f(p, q) += ints.eri_at(p, i, q, i) - ints.eri_at(p, i, i, q);
  return f;
}

RVec orbital_energies(const IntegralSet &ints) {
  if (ints.has_orb_energies()) return ints.orb_energies;
  Eigen::SelfAdjointEigenSolver<RMat> es(closed_shell_fock(ints), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

bool approx_equal(const IntegralSet &a, const IntegralSet &b, double tol) {
  if (a.n_spatial != b.n_spatial || a.n_so != b.n_so || a.n_elec != b.n_elec)
    return false;
  if (std::abs(a.e_nn - b.e_nn) > tol) return false;
  if ((a.h - b.h).cwiseAbs().maxCoeff() > tol) return false;
  if (a.eri.size() != b.eri.size()) return false;
  for (std::size_t k = 0; k < a.eri.size(); ++k)
    if (std::abs(a.eri[k] - b.eri[k]) > tol) return false;
  if (a.orb_energies.size() != b.orb_energies.size()) return false;
  if (a.orb_energies.size() &&
      (a.orb_energies - b.orb_energies).cwiseAbs().maxCoeff() > tol)
    return false;
  return true;
}

}  // namespace composer
