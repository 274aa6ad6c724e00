#pragma once

#include <functional>
#include <set>
#include <vector>

#include "cartanrep/cartan.hpp"
#include "cartanrep/module.hpp"

namespace oracle {

using cartanrep::CartanDatum;
using cartanrep::IntVec;
using cartanrep::Matrix;
using cartanrep::Module;
using cartanrep::PrimeField;
using cartanrep::Rational;

// Rank-4 Dynkin data written out by hand, all with minimal symmetrizers.
inline CartanDatum A4() {
  return cartanrep::validate_datum({{2, -1, 0, 0}, {-1, 2, -1, 0}, {0, -1, 2, -1}, {0, 0, -1, 2}}, {1, 1, 1, 1});
}
inline CartanDatum B4() {
  return cartanrep::validate_datum({{2, -1, 0, 0}, {-1, 2, -1, 0}, {0, -1, 2, -1}, {0, 0, -2, 2}}, {2, 2, 2, 1});
}
inline CartanDatum C4() {
  return cartanrep::validate_datum({{2, -1, 0, 0}, {-1, 2, -1, 0}, {0, -1, 2, -2}, {0, 0, -1, 2}}, {1, 1, 1, 2});
}
inline CartanDatum D4() {
  return cartanrep::validate_datum({{2, -1, 0, 0}, {-1, 2, -1, -1}, {0, -1, 2, 0}, {0, -1, 0, 2}}, {1, 1, 1, 1});
}
inline CartanDatum F4() {
  return cartanrep::validate_datum({{2, -1, 0, 0}, {-1, 2, -2, 0}, {0, -1, 2, -1}, {0, 0, -1, 2}}, {1, 1, 2, 2});
}

struct Named {
  const char* name;
  CartanDatum d;
  std::size_t positive_roots;
  int coxeter_number;
};

inline std::vector<Named> dynkin_up_to_rank4() {
  using namespace cartanrep::data;
  return {{"A1", A1(), 1, 2},  {"A2", A2(), 3, 3},  {"B2", B2(), 4, 4},   {"G2", G2(), 6, 6},
          {"A3", A3(), 6, 4},  {"B3", B3(), 9, 6},  {"C3", C3(), 9, 6},   {"A4", A4(), 10, 5},
          {"B4", B4(), 16, 8}, {"C4", C4(), 16, 8}, {"D4", D4(), 12, 6},  {"F4", F4(), 24, 12}};
}

// -R^{-1}(C-R) by Gauss-Jordan over Q, with r_ii = 1 and r_ij = c_ij for (j,i) in Omega.
inline std::vector<std::vector<mpq_class>> coxeter_from_R(const CartanDatum& d, const cartanrep::Orientation& o) {
  const int n = d.n;
  std::vector<std::vector<mpq_class>> R(n, std::vector<mpq_class>(n, 0)), X(n, std::vector<mpq_class>(n, 0));
  for (int i = 0; i < n; ++i) {
    R[i][i] = 1;
    for (int j = 0; j < n; ++j)
      if (o.count({j, i})) R[i][j] = d.C(i, j);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) X[i][j] = -(mpq_class(d.C(i, j)) - R[i][j]);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    while (R[piv][col] == 0) ++piv;
    std::swap(R[piv], R[col]);
    std::swap(X[piv], X[col]);
    const mpq_class s = R[col][col];
    for (int j = 0; j < n; ++j) {
      R[col][j] /= s;
      X[col][j] /= s;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || R[r][col] == 0) continue;
      const mpq_class f = R[r][col];
      for (int j = 0; j < n; ++j) {
        R[r][j] -= f * R[col][j];
        X[r][j] -= f * X[col][j];
      }
    }
  }
  return X;
}

// Every subspace of F_p^n as a canonical (reduced echelon) row list.
using Space = std::vector<std::vector<std::uint32_t>>;

inline Space rref(Space rows, std::uint32_t p) {
  const PrimeField f(p);
  const std::size_t n = rows.empty() ? 0 : rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    const auto inv = f.inv(rows[r][c]);
    for (auto& x : rows[r]) x = f.mul(x, inv);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k == r || rows[k][c] == 0) continue;
      const auto s = rows[k][c];
      for (std::size_t j = 0; j < n; ++j) rows[k][j] = f.sub(rows[k][j], f.mul(s, rows[r][j]));
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

inline std::set<Space> all_subspaces(std::size_t n, std::uint32_t p) {
  std::vector<std::vector<std::uint32_t>> vecs;
  std::vector<std::uint32_t> v(n, 0);
  std::function<void(std::size_t)> gen = [&](std::size_t k) {
    if (k == n) {
      vecs.push_back(v);
      return;
    }
    for (std::uint32_t a = 0; a < p; ++a) {
      v[k] = a;
      gen(k + 1);
    }
  };
  gen(0);
  std::set<Space> seen{Space{}};
  std::vector<Space> frontier{Space{}};
  while (!frontier.empty()) {
    std::vector<Space> next;
    for (const auto& s : frontier)
      for (const auto& x : vecs) {
        Space t = s;
        t.push_back(x);
        t = rref(t, p);
        if (t.size() == s.size() + 1 && seen.insert(t).second) next.push_back(t);
      }
    frontier = std::move(next);
  }
  return seen;
}

// Total space of a module as the direct sum of its vertex spaces.
inline std::vector<std::size_t> offsets(const Module<PrimeField>& m) {
  std::vector<std::size_t> off(m.n() + 1, 0);
  for (int i = 0; i < m.n(); ++i) off[i + 1] = off[i] + m.dims[i];
  return off;
}

inline std::vector<std::uint32_t> apply_block(const Matrix<PrimeField>& a, std::size_t src_off, std::size_t tgt_off,
                                              const std::vector<std::uint32_t>& x, std::size_t total) {
  const auto& f = a.field();
  std::vector<std::uint32_t> y(total, 0);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) y[tgt_off + r] = f.add(y[tgt_off + r], f.mul(a(r, c), x[src_off + c]));
  return y;
}

inline bool in_span(const Space& s, const std::vector<std::uint32_t>& v, std::uint32_t p) {
  Space t = s;
  t.push_back(v);
  return rref(t, p).size() == s.size();
}

// Locally free submodules of rank e, by brute force over all subspaces of the total space.
inline std::size_t brute_locally_free_count(const Module<PrimeField>& m, const IntVec& e) {
  const auto p = m.field.prime();
  const auto off = offsets(m);
  const auto total = off.back();
  std::size_t count = 0;
  for (const auto& s : all_subspaces(total, p)) {
    bool ok = true;
    for (int i = 0; i < m.n() && ok; ++i)
      for (const auto& row : s) {
        std::vector<std::uint32_t> x(total, 0);
        for (std::size_t k = off[i]; k < off[i + 1]; ++k) x[k] = row[k];
        if (!in_span(s, x, p)) ok = false;
      }
    if (!ok) continue;
    std::vector<std::size_t> dims(m.n(), 0);
    for (int i = 0; i < m.n(); ++i) {
      Space part;
      for (const auto& row : s) {
        std::vector<std::uint32_t> x(total, 0);
        for (std::size_t k = off[i]; k < off[i + 1]; ++k) x[k] = row[k];
        part.push_back(x);
      }
      dims[i] = rref(part, p).size();
    }
    for (const auto& row : s) {
      for (int i = 0; i < m.n() && ok; ++i)
        if (!in_span(s, apply_block(m.eps[i], off[i], off[i], row, total), p)) ok = false;
      for (std::size_t a = 0; a < m.slots.size() && ok; ++a) {
        const auto& sl = m.slots[a];
        if (!in_span(s, apply_block(m.arrows[a], off[sl.src], off[sl.tgt], row, total), p)) ok = false;
      }
    }
    if (!ok) continue;
    for (int i = 0; i < m.n() && ok; ++i) {
      const auto c = static_cast<std::size_t>(m.datum.D[i]);
      if (dims[i] != c * static_cast<std::size_t>(e[i])) ok = false;
      // free over K[eps]/eps^c: the image of eps^{c-1} has dimension e_i
      Space img;
      for (const auto& row : s) {
        auto x = row;
        for (std::size_t t = 0; t + 1 < c; ++t) x = apply_block(m.eps[i], off[i], off[i], x, total);
        std::vector<std::uint32_t> y(total, 0);
        for (std::size_t k = off[i]; k < off[i + 1]; ++k) y[k] = x[k];
        img.push_back(y);
      }
      if (rref(img, p).size() != static_cast<std::size_t>(e[i])) ok = false;
    }
    count += ok;
  }
  return count;
}

// Number of homomorphisms M -> N over F_p, by enumerating every tuple of vertex maps.
inline std::uint64_t brute_hom_count(const Module<PrimeField>& m, const Module<PrimeField>& n) {
  const auto& f = m.field;
  const int nv = m.n();
  std::vector<Matrix<PrimeField>> maps;
  std::size_t entries = 0;
  for (int i = 0; i < nv; ++i) {
    maps.emplace_back(f, n.dims[i], m.dims[i]);
    entries += n.dims[i] * m.dims[i];
  }
  std::uint64_t total = 1;
  for (std::size_t k = 0; k < entries; ++k) total *= f.prime();
  std::uint64_t count = 0;
  for (std::uint64_t code = 0; code < total; ++code) {
    auto x = code;
    for (auto& g : maps)
      for (std::size_t r = 0; r < g.rows(); ++r)
        for (std::size_t c = 0; c < g.cols(); ++c) {
          g(r, c) = static_cast<std::uint32_t>(x % f.prime());
          x /= f.prime();
        }
    bool ok = true;
    for (int i = 0; i < nv && ok; ++i) ok = maps[i] * m.eps[i] == n.eps[i] * maps[i];
    for (std::size_t a = 0; a < m.slots.size() && ok; ++a) {
      const auto& sl = m.slots[a];
      ok = maps[sl.tgt] * m.arrows[a] == n.arrows[a] * maps[sl.src];
    }
    count += ok;
  }
  return count;
}

inline std::size_t log_p(std::uint64_t x, std::uint32_t p) {
  std::size_t k = 0;
  while (x > 1) {
    x /= p;
    ++k;
  }
  return k;
}

}  // namespace oracle
