#include "cartanrep/module.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <tuple>

namespace cartanrep {

std::vector<ArrowSlot> arrow_slots(const CartanDatum& d, const Orientation& o, Algebra alg) {
  std::vector<ArrowSlot> out;
  for (auto [i, j] : o) {
    const int g = static_cast<int>(d.g(i, j));
    const int t = static_cast<int>(std::gcd(d.D[i], d.D[j]));
    for (int k = 0; k < g; ++k) {
      ArrowSlot s;
      s.i = i;
      s.j = j;
      s.k = k;
      s.src = j;
      s.tgt = i;
      s.src_exp = static_cast<int>(d.D[j]) / t;
      s.tgt_exp = static_cast<int>(d.D[i]) / t;
      out.push_back(s);
    }
  }
  if (alg == Algebra::Pi) {
    const std::size_t forward = out.size();
    for (std::size_t a = 0; a < forward; ++a) {
      ArrowSlot s = out[a];
      s.reversed = true;
      std::swap(s.src, s.tgt);
      std::swap(s.src_exp, s.tgt_exp);
      s.partner = static_cast<int>(a);
      out[a].partner = static_cast<int>(forward + a);
      out.push_back(s);
    }
  }
  return out;
}

template <class K>
Matrix<K> jordan_rect(const K& field, int c, std::size_t r) {
  Matrix<K> e(field, c * r, c * r);
  for (std::size_t b = 0; b < r; ++b)
    for (int s = 0; s + 1 < c; ++s) e(b * c + s + 1, b * c + s) = field.one();
  return e;
}

template <class K>
Module<K> zero_module(const K& field, const CartanDatum& d, const Orientation& o, Algebra alg) {
  return jordan_skeleton(field, d, o, IntVec(d.n, 0), alg);
}

template <class K>
Module<K> jordan_skeleton(const K& field, const CartanDatum& d, const Orientation& o, const IntVec& r,
                          Algebra alg) {
  validate_orientation(d, o);
  Module<K> m;
  m.field = field;
  m.datum = d;
  m.omega = o;
  m.algebra = alg;
  m.slots = arrow_slots(d, o, alg);
  for (int i = 0; i < d.n; ++i) {
    if (r[i] < 0) throw MathError(Errc::ShapeMismatch, "negative rank");
    m.dims.push_back(static_cast<std::size_t>(d.D[i] * r[i]));
    m.eps.push_back(jordan_rect(field, static_cast<int>(d.D[i]), static_cast<std::size_t>(r[i])));
  }
  for (const auto& s : m.slots) m.arrows.emplace_back(field, m.dims[s.tgt], m.dims[s.src]);
  return m;
}

template <class K>
Module<K> generalized_simple(const K& field, const CartanDatum& d, const Orientation& o, int i, Algebra alg) {
  return jordan_skeleton(field, d, o, simple_root(d.n, i), alg);
}

template <class K>
std::vector<std::string> check_relations(const Module<K>& m) {
  const int n = m.n();
  if (m.dims.size() != static_cast<std::size_t>(n) || m.eps.size() != static_cast<std::size_t>(n) ||
      m.arrows.size() != m.slots.size())
    throw MathError(Errc::ShapeMismatch, "module component counts do not match the datum");
  for (int i = 0; i < n; ++i)
    if (m.eps[i].rows() != m.dims[i] || m.eps[i].cols() != m.dims[i])
      throw MathError(Errc::ShapeMismatch, "eps_" + std::to_string(i + 1) + " has wrong shape");
  for (std::size_t a = 0; a < m.slots.size(); ++a) {
    const auto& s = m.slots[a];
    if (m.arrows[a].rows() != m.dims[s.tgt] || m.arrows[a].cols() != m.dims[s.src])
      throw MathError(Errc::ShapeMismatch, "arrow matrix has wrong shape");
  }
  std::vector<std::string> bad;
  for (int i = 0; i < n; ++i)
    if (!power(m.eps[i], static_cast<int>(m.datum.D[i])).is_zero())
      bad.push_back("eps_" + std::to_string(i + 1) + "^" + std::to_string(m.datum.D[i]) + " != 0");
  for (std::size_t a = 0; a < m.slots.size(); ++a) {
    const auto& s = m.slots[a];
    const auto lhs = power(m.eps[s.tgt], s.tgt_exp) * m.arrows[a];
    const auto rhs = m.arrows[a] * power(m.eps[s.src], s.src_exp);
    if (lhs != rhs)
      bad.push_back("eps_" + std::to_string(s.tgt + 1) + "^" + std::to_string(s.tgt_exp) + " A != A eps_" +
                    std::to_string(s.src + 1) + "^" + std::to_string(s.src_exp) + " on arrow " +
                    std::to_string(s.src + 1) + "->" + std::to_string(s.tgt + 1));
  }
  if (m.algebra == Algebra::Pi) {
    for (int k = 0; k < n; ++k) {
      Matrix<K> mesh(m.field, m.dims[k], m.dims[k]);
      for (std::size_t a = 0; a < m.slots.size(); ++a) {
        const auto& s = m.slots[a];
        if (s.tgt != k) continue;
        const auto cyc = m.arrows[a] * m.arrows[s.partner];
        const int L = s.tgt_exp;
        Matrix<K> sum(m.field, m.dims[k], m.dims[k]);
        for (int t = 0; t < L; ++t) sum = sum + power(m.eps[k], L - 1 - t) * cyc * power(m.eps[k], t);
        mesh = s.reversed ? mesh - sum : mesh + sum;
      }
      if (!mesh.is_zero()) bad.push_back("mesh relation fails at vertex " + std::to_string(k + 1));
    }
  }
  return bad;
}

template <class K>
std::optional<IntVec> is_locally_free(const Module<K>& m) {
  IntVec r(m.n());
  for (int i = 0; i < m.n(); ++i) {
    const auto c = m.datum.D[i];
    const auto d = static_cast<std::int64_t>(m.dims[i]);
    if (d % c != 0) return std::nullopt;
    Matrix<K> p = Matrix<K>::identity(m.field, m.dims[i]);
    for (int t = 1; t <= c; ++t) {
      p = p * m.eps[i];
      if (static_cast<std::int64_t>(rank(p)) != (c - t) * (d / c)) return std::nullopt;
    }
    r[i] = d / c;
  }
  return r;
}

template <class K>
Module<K> change_basis(const Module<K>& m, const std::vector<Matrix<K>>& basis) {
  Module<K> out = m;
  std::vector<Matrix<K>> inv;
  for (int i = 0; i < m.n(); ++i) {
    auto bi = inverse(basis[i]);
    if (!bi) throw MathError(Errc::InternalMismatch, "change_basis: singular basis");
    inv.push_back(*bi);
    out.eps[i] = inv[i] * m.eps[i] * basis[i];
  }
  for (std::size_t a = 0; a < m.slots.size(); ++a) {
    const auto& s = m.slots[a];
    out.arrows[a] = inv[s.tgt] * m.arrows[a] * basis[s.src];
  }
  return out;
}

namespace {

template <class K>
bool is_jordan_rect(const Matrix<K>& e, int c) {
  if (e.rows() % c != 0) return false;
  return e == jordan_rect(e.field(), c, e.rows() / c);
}

// Matrix of a linear map Mat(a x b) -> Mat(c x d), columns indexed by vec(X).
template <class K, class F>
Matrix<K> linear_map_matrix(const K& field, std::size_t a, std::size_t b, std::size_t out_rows, F&& f) {
  std::vector<Matrix<K>> cols;
  std::size_t out_len = 0;
  for (std::size_t j = 0; j < b; ++j)
    for (std::size_t i = 0; i < a; ++i) {
      Matrix<K> x(field, a, b);
      x(i, j) = field.one();
      cols.push_back(vec(f(x)));
      out_len = cols.back().rows();
    }
  if (cols.empty()) return Matrix<K>(field, out_rows, 0);
  Matrix<K> m(field, out_len, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) m.set_block(0, c, cols[c]);
  return m;
}

// Basis of {f : f epsM = epsN f}, f of shape dN x dM.
template <class K>
std::vector<Matrix<K>> commutant_basis(const Matrix<K>& em, const Matrix<K>& en, int c) {
  const K& k = em.field();
  const std::size_t dm = em.rows(), dn = en.rows();
  std::vector<Matrix<K>> out;
  if (dm == 0 || dn == 0) return out;
  if (is_jordan_rect(em, c) && is_jordan_rect(en, c)) {
    const std::size_t rm = dm / c, rn = dn / c;
    for (std::size_t bi = 0; bi < rn; ++bi)
      for (std::size_t bj = 0; bj < rm; ++bj)
        for (int u = 0; u < c; ++u) {
          Matrix<K> f(k, dn, dm);
          for (int s = 0; s + u < c; ++s) f(bi * c + s + u, bj * c + s) = k.one();
          out.push_back(std::move(f));
        }
    return out;
  }
  const auto map = linear_map_matrix(k, dn, dm, dn * dm, [&](const Matrix<K>& f) { return f * em - en * f; });
  const auto ker = kernel(map);
  for (std::size_t c2 = 0; c2 < ker.cols(); ++c2) out.push_back(unvec(ker, dn, dm, c2));
  return out;
}

template <class K>
Matrix<K> stack_columns(const K& field, const std::vector<Matrix<K>>& cols, std::size_t len) {
  Matrix<K> m(field, len, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) m.set_block(0, c, cols[c]);
  return m;
}

template <class K>
void check_same_shape(const Module<K>& a, const Module<K>& b) {
  if (!(a.datum == b.datum) || a.omega != b.omega || a.algebra != b.algebra || !(a.field == b.field))
    throw MathError(Errc::SpecMismatch, "modules live over different algebras");
}

}  // namespace

template <class K>
bool same_shape(const Module<K>& a, const Module<K>& b) {
  return a.datum == b.datum && a.omega == b.omega && a.algebra == b.algebra && a.dims == b.dims;
}

template <class K>
std::optional<Module<K>> normalize_jordan(const Module<K>& m) {
  if (!is_locally_free(m)) return std::nullopt;
  bool already = true;
  for (int i = 0; i < m.n(); ++i)
    if (!is_jordan_rect(m.eps[i], static_cast<int>(m.datum.D[i]))) already = false;
  if (already) return m;
  std::vector<Matrix<K>> basis;
  for (int i = 0; i < m.n(); ++i) {
    const int c = static_cast<int>(m.datum.D[i]);
    const std::size_t d = m.dims[i];
    Matrix<K> b(m.field, d, d);
    if (d > 0) {
      const auto gens = complement_basis(column_basis(m.eps[i]));
      for (std::size_t g = 0; g < gens.cols(); ++g) {
        Matrix<K> v = gens.column(g);
        for (int s = 0; s < c; ++s) {
          b.set_block(0, g * c + s, v);
          v = m.eps[i] * v;
        }
      }
    }
    basis.push_back(std::move(b));
  }
  return change_basis(m, basis);
}

template <class K>
std::vector<std::vector<Matrix<K>>> arrow_solution_basis(const Module<K>& sk) {
  std::vector<std::vector<Matrix<K>>> out;
  for (std::size_t a = 0; a < sk.slots.size(); ++a) {
    const auto& s = sk.slots[a];
    const std::size_t dt = sk.dims[s.tgt], ds = sk.dims[s.src];
    if (dt == 0 || ds == 0) continue;
    const auto et = power(sk.eps[s.tgt], s.tgt_exp);
    const auto es = power(sk.eps[s.src], s.src_exp);
    const auto map = linear_map_matrix(sk.field, dt, ds, dt * ds, [&](const Matrix<K>& x) { return et * x - x * es; });
    const auto ker = kernel(map);
    for (std::size_t c = 0; c < ker.cols(); ++c) {
      std::vector<Matrix<K>> tuple;
      for (std::size_t b = 0; b < sk.slots.size(); ++b)
        tuple.emplace_back(sk.field, sk.dims[sk.slots[b].tgt], sk.dims[sk.slots[b].src]);
      tuple[a] = unvec(ker, dt, ds, c);
      out.push_back(std::move(tuple));
    }
  }
  return out;
}

template <class K>
Module<K> random_locally_free(const K& field, const CartanDatum& d, const Orientation& o, const IntVec& r,
                              std::uint64_t seed) {
  Module<K> m = jordan_skeleton(field, d, o, r, Algebra::H);
  std::mt19937_64 rng(seed);
  for (const auto& b : arrow_solution_basis(m)) {
    const auto x = field.random(rng);
    if (field.is_zero(x)) continue;
    for (std::size_t a = 0; a < m.arrows.size(); ++a) m.arrows[a] = m.arrows[a] + b[a].scaled(x);
  }
  return m;
}

template <class K>
Module<K> direct_sum(const Module<K>& a, const Module<K>& b) {
  check_same_shape(a, b);
  Module<K> m = a;
  for (int i = 0; i < a.n(); ++i) {
    m.dims[i] = a.dims[i] + b.dims[i];
    m.eps[i] = block_diag(a.eps[i], b.eps[i]);
  }
  for (std::size_t s = 0; s < a.slots.size(); ++s) m.arrows[s] = block_diag(a.arrows[s], b.arrows[s]);
  return m;
}

template <class K>
Module<K> twist(const Module<K>& m) {
  Module<K> t = m;
  for (auto& a : t.arrows) a = -a;
  return t;
}

template <class K>
bool is_homomorphism(const Module<K>& m, const Module<K>& n, const Hom<K>& f) {
  for (int i = 0; i < m.n(); ++i)
    if (f[i] * m.eps[i] != n.eps[i] * f[i]) return false;
  for (std::size_t a = 0; a < m.slots.size(); ++a) {
    const auto& s = m.slots[a];
    if (f[s.tgt] * m.arrows[a] != n.arrows[a] * f[s.src]) return false;
  }
  return true;
}

template <class K>
std::vector<Hom<K>> hom_basis(const Module<K>& m, const Module<K>& n) {
  check_same_shape(m, n);
  const K& k = m.field;
  const int nv = m.n();
  std::vector<std::vector<Matrix<K>>> local(nv);
  std::vector<std::size_t> offset(nv + 1, 0);
  for (int i = 0; i < nv; ++i) {
    local[i] = commutant_basis(m.eps[i], n.eps[i], static_cast<int>(m.datum.D[i]));
    offset[i + 1] = offset[i] + local[i].size();
  }
  const std::size_t unknowns = offset[nv];
  std::vector<Hom<K>> out;
  if (unknowns == 0) return out;

  std::size_t eq_rows = 0;
  for (const auto& s : m.slots) eq_rows += n.dims[s.tgt] * m.dims[s.src];
  Matrix<K> sys(k, eq_rows, unknowns);
  std::size_t row = 0;
  for (std::size_t a = 0; a < m.slots.size(); ++a) {
    const auto& s = m.slots[a];
    const std::size_t len = n.dims[s.tgt] * m.dims[s.src];
    if (len == 0) continue;
    for (std::size_t b = 0; b < local[s.tgt].size(); ++b)
      sys.set_block(row, offset[s.tgt] + b, vec(local[s.tgt][b] * m.arrows[a]));
    for (std::size_t b = 0; b < local[s.src].size(); ++b) {
      const auto col = vec(n.arrows[a] * local[s.src][b]);
      for (std::size_t r = 0; r < len; ++r)
        sys(row + r, offset[s.src] + b) = k.sub(sys(row + r, offset[s.src] + b), col(r, 0));
    }
    row += len;
  }
  const auto ker = kernel(sys);
  for (std::size_t c = 0; c < ker.cols(); ++c) {
    Hom<K> f;
    for (int i = 0; i < nv; ++i) {
      Matrix<K> fi(k, n.dims[i], m.dims[i]);
      for (std::size_t b = 0; b < local[i].size(); ++b) {
        const auto& x = ker(offset[i] + b, c);
        if (!k.is_zero(x)) fi = fi + local[i][b].scaled(x);
      }
      f.push_back(std::move(fi));
    }
    out.push_back(std::move(f));
  }
  return out;
}

template <class K>
std::size_t hom_dim(const Module<K>& m, const Module<K>& n) {
  return hom_basis(m, n).size();
}

template <class K>
std::vector<std::vector<Matrix<K>>> ext1_cocycles(const Module<K>& m, const Module<K>& n) {
  check_same_shape(m, n);
  const K& k = m.field;
  // per-arrow solutions of the linearized commutation relation
  std::vector<std::vector<Matrix<K>>> basis;  // each entry: full arrow tuple
  auto empty_tuple = [&]() {
    std::vector<Matrix<K>> t;
    for (const auto& s : m.slots) t.emplace_back(k, n.dims[s.tgt], m.dims[s.src]);
    return t;
  };
  for (std::size_t a = 0; a < m.slots.size(); ++a) {
    const auto& s = m.slots[a];
    const std::size_t dt = n.dims[s.tgt], ds = m.dims[s.src];
    if (dt == 0 || ds == 0) continue;
    const auto et = power(n.eps[s.tgt], s.tgt_exp);
    const auto es = power(m.eps[s.src], s.src_exp);
    const auto map = linear_map_matrix(k, dt, ds, dt * ds, [&](const Matrix<K>& x) { return et * x - x * es; });
    const auto ker = kernel(map);
    for (std::size_t c = 0; c < ker.cols(); ++c) {
      auto t = empty_tuple();
      t[a] = unvec(ker, dt, ds, c);
      basis.push_back(std::move(t));
    }
  }
  if (m.algebra != Algebra::Pi || basis.empty()) return basis;

  // linearized mesh relation
  auto mesh = [&](const std::vector<Matrix<K>>& x) {
    std::vector<Matrix<K>> parts;
    std::size_t len = 0;
    for (int v = 0; v < m.n(); ++v) {
      Matrix<K> acc(k, n.dims[v], m.dims[v]);
      for (std::size_t a = 0; a < m.slots.size(); ++a) {
        const auto& s = m.slots[a];
        if (s.tgt != v) continue;
        const auto b = static_cast<std::size_t>(s.partner);
        const auto lin = x[a] * m.arrows[b] + n.arrows[a] * x[b];
        Matrix<K> sum(k, n.dims[v], m.dims[v]);
        for (int t = 0; t < s.tgt_exp; ++t) sum = sum + power(n.eps[v], s.tgt_exp - 1 - t) * lin * power(m.eps[v], t);
        acc = s.reversed ? acc - sum : acc + sum;
      }
      len += acc.rows() * acc.cols();
      parts.push_back(vec(acc));
    }
    Matrix<K> out(k, len, 1);
    std::size_t r = 0;
    for (const auto& p : parts) {
      out.set_block(r, 0, p);
      r += p.rows();
    }
    return out;
  };
  std::vector<Matrix<K>> cols;
  for (const auto& b : basis) cols.push_back(mesh(b));
  const auto sys = stack_columns(k, cols, cols[0].rows());
  const auto ker = kernel(sys);
  std::vector<std::vector<Matrix<K>>> out;
  for (std::size_t c = 0; c < ker.cols(); ++c) {
    auto t = empty_tuple();
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const auto& x = ker(b, c);
      if (k.is_zero(x)) continue;
      for (std::size_t a = 0; a < t.size(); ++a) t[a] = t[a] + basis[b][a].scaled(x);
    }
    out.push_back(std::move(t));
  }
  return out;
}

template <class K>
std::size_t ext1_presentation(const Module<K>& m, const Module<K>& n) {
  if (!is_locally_free(m)) throw MathError(Errc::NotLocallyFree, "Ext^1 needs a locally free first argument");
  const K& k = m.field;
  const auto z = ext1_cocycles(m, n);
  std::vector<Matrix<K>> cob;
  std::size_t len = 0;
  for (const auto& s : m.slots) len += n.dims[s.tgt] * m.dims[s.src];
  if (len == 0) return z.size();
  for (int i = 0; i < m.n(); ++i)
    for (const auto& h : commutant_basis(m.eps[i], n.eps[i], static_cast<int>(m.datum.D[i]))) {
      Matrix<K> col(k, len, 1);
      std::size_t r = 0;
      for (std::size_t a = 0; a < m.slots.size(); ++a) {
        const auto& s = m.slots[a];
        const std::size_t l = n.dims[s.tgt] * m.dims[s.src];
        Matrix<K> x(k, n.dims[s.tgt], m.dims[s.src]);
        if (s.tgt == i) x = x + h * m.arrows[a];
        if (s.src == i) x = x - n.arrows[a] * h;
        if (l) col.set_block(r, 0, vec(x));
        r += l;
      }
      cob.push_back(std::move(col));
    }
  const std::size_t rk = cob.empty() ? 0 : rank(stack_columns(k, cob, len));
  if (rk > z.size()) throw MathError(Errc::InternalMismatch, "coboundaries exceed cocycles");
  return z.size() - rk;
}

template <class K>
Module<K> extension(const Module<K>& m, const Module<K>& n, const std::vector<Matrix<K>>& x) {
  check_same_shape(m, n);
  Module<K> e = direct_sum(n, m);
  for (std::size_t a = 0; a < e.slots.size(); ++a) {
    const auto& s = e.slots[a];
    if (x[a].rows() && x[a].cols()) e.arrows[a].set_block(0, n.dims[s.src], x[a]);
  }
  return e;
}

template <class K>
std::size_t ext1_dim(const Module<K>& m, const Module<K>& n) {
  const auto rm = is_locally_free(m);
  if (!rm) throw MathError(Errc::NotLocallyFree, "ext1_dim: first argument is not locally free");
  const std::size_t e1 = ext1_presentation(m, n);
  if (m.algebra == Algebra::H) {
    if (const auto rn = is_locally_free(n)) {
      const auto h = static_cast<std::int64_t>(hom_dim(m, n));
      const auto e2 = h - euler_form(m.datum, m.omega, *rm, *rn);
      if (e2 != static_cast<std::int64_t>(e1))
        throw MathError(Errc::InternalMismatch, "Ext^1 by resolution (" + std::to_string(e1) +
                                                    ") != dim Hom - <rk M, rk N> (" + std::to_string(e2) + ")");
    }
  }
  return e1;
}

namespace {

template <class K>
bool hom_invertible(const Hom<K>& f) {
  for (const auto& fi : f)
    if (!is_invertible(fi)) return false;
  return true;
}

}  // namespace

template <class K>
bool is_isomorphic(const Module<K>& m, const Module<K>& n, std::uint64_t seed) {
  check_same_shape(m, n);
  if (m.dims != n.dims) return false;
  const auto basis = hom_basis(m, n);
  const auto e = hom_dim(m, m);
  if (basis.size() != e || hom_dim(n, m) != e || hom_dim(n, n) != e) return false;
  if (basis.empty()) return m.total_dim() == 0;
  const K& k = m.field;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  auto combo = [&](const std::vector<typename K::Elem>& x) {
    Hom<K> f;
    for (int i = 0; i < m.n(); ++i) {
      Matrix<K> fi(k, n.dims[i], m.dims[i]);
      for (std::size_t b = 0; b < basis.size(); ++b)
        if (!k.is_zero(x[b])) fi = fi + basis[b][i].scaled(x[b]);
      f.push_back(std::move(fi));
    }
    return f;
  };
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<typename K::Elem> x;
    for (std::size_t b = 0; b < basis.size(); ++b) x.push_back(k.random(rng, 3 + attempt));
    if (hom_invertible(combo(x))) return true;
  }
  if constexpr (std::is_same_v<K, PrimeField>) {
    std::uint64_t total = 1;
    for (std::size_t b = 0; b < basis.size() && total <= 1000000; ++b) total *= k.order();
    if (total <= 1000000) {
      for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::vector<typename K::Elem> x;
        std::uint64_t v = idx;
        for (std::size_t b = 0; b < basis.size(); ++b) {
          x.push_back(k.element(v % k.order()));
          v /= k.order();
        }
        if (hom_invertible(combo(x))) return true;
      }
    }
  }
  return false;
}

bool is_indecomposable(const Module<Rational>& m) {
  const auto basis = hom_basis(m, m);
  const std::size_t e = basis.size();
  if (e == 0) return false;
  Rational q;
  // flatten endomorphisms to coordinate vectors
  auto flat = [&](const Hom<Rational>& f) {
    std::size_t len = 0;
    for (const auto& fi : f) len += fi.rows() * fi.cols();
    Matrix<Rational> v(q, len, 1);
    std::size_t r = 0;
    for (const auto& fi : f) {
      if (fi.rows() != 0 && fi.cols() != 0) v.set_block(r, 0, vec(fi));
      r += fi.rows() * fi.cols();
    }
    return v;
  };
  std::vector<Matrix<Rational>> cols;
  for (const auto& b : basis) cols.push_back(flat(b));
  const auto B = stack_columns(q, cols, cols[0].rows());
  // left regular representation L_x(y) = x o y in basis coordinates
  std::vector<Matrix<Rational>> L;
  for (std::size_t x = 0; x < e; ++x) {
    Matrix<Rational> prods(q, B.rows(), e);
    for (std::size_t y = 0; y < e; ++y) {
      Hom<Rational> xy;
      for (int i = 0; i < m.n(); ++i) xy.push_back(basis[x][i] * basis[y][i]);
      prods.set_block(0, y, flat(xy));
    }
    auto coords = solve(B, prods);
    if (!coords) throw MathError(Errc::InternalMismatch, "End(M) not closed under composition");
    L.push_back(*coords);
  }
  Matrix<Rational> gram(q, e, e);
  for (std::size_t x = 0; x < e; ++x)
    for (std::size_t y = 0; y < e; ++y) {
      const auto p = L[x] * L[y];
      mpq_class tr = 0;
      for (std::size_t t = 0; t < e; ++t) tr += p(t, t);
      gram(x, y) = tr;
    }
  return rank(gram) == 1;
}

// ----------------------------------------------------- projectives via paths

namespace {

// A path in normal form: arrows in application order a_1..a_m (a_1 leaves the
// source), exponents f_0..f_m with f_s applied right after a_s (f_0 at the
// source). Normal form: f_s < src_exp(a_{s+1}) for s < m, f_m < c_{target}.
struct Path {
  std::vector<int> arrows;
  std::vector<int> exps;
  bool operator<(const Path& o) const { return std::tie(arrows, exps) < std::tie(o.arrows, o.exps); }
  bool operator==(const Path& o) const { return arrows == o.arrows && exps == o.exps; }
};

struct PathAlgebra {
  CartanDatum d;
  std::vector<ArrowSlot> slots;

  int target(const Path& p, int start) const { return p.arrows.empty() ? start : slots[p.arrows.back()].tgt; }

  int bound(const Path& p, std::size_t s, int start) const {
    if (s < p.arrows.size()) return slots[p.arrows[s]].src_exp;
    return static_cast<int>(d.D[target(p, start)]);
  }

  // all normal-form paths starting at vertex v
  std::vector<Path> paths_from(int v) const {
    std::vector<Path> out;
    std::function<void(Path&, int)> grow = [&](Path& p, int at) {
      // close the path here with a final exponent
      for (int f = 0; f < d.D[at]; ++f) {
        Path q = p;
        q.exps.push_back(f);
        out.push_back(q);
      }
      for (std::size_t a = 0; a < slots.size(); ++a) {
        if (slots[a].src != at) continue;
        for (int f = 0; f < slots[a].src_exp; ++f) {
          p.exps.push_back(f);
          p.arrows.push_back(static_cast<int>(a));
          grow(p, slots[a].tgt);
          p.arrows.pop_back();
          p.exps.pop_back();
        }
      }
    };
    Path p;
    grow(p, v);
    std::sort(out.begin(), out.end());
    return out;
  }

  // left multiplication by eps at the target
  std::optional<Path> left_eps(Path p, int start) const {
    const int t = target(p, start);
    if (++p.exps.back() >= d.D[t]) return std::nullopt;
    return p;
  }

  // left multiplication by arrow a (src(a) = target of p)
  std::optional<Path> left_arrow(Path p, int a) const {
    const auto& s = slots[a];
    const int f = p.exps.back();
    const int q = f / s.src_exp;
    p.exps.back() = f % s.src_exp;
    const int nf = q * s.tgt_exp;
    if (nf >= d.D[s.tgt]) return std::nullopt;
    p.arrows.push_back(a);
    p.exps.push_back(nf);
    return p;
  }

  // right multiplication by eps at the source, carrying toward the target
  std::optional<Path> right_eps(Path p, int start) const {
    p.exps[0] += 1;
    for (std::size_t s = 0; s < p.exps.size(); ++s) {
      const int b = bound(p, s, start);
      if (p.exps[s] < b) return p;
      if (s + 1 == p.exps.size()) return std::nullopt;
      const auto& arr = slots[p.arrows[s]];
      const int q = p.exps[s] / arr.src_exp;
      p.exps[s] %= arr.src_exp;
      p.exps[s + 1] += q * arr.tgt_exp;
    }
    return p;
  }

  // right multiplication by arrow a (tgt(a) = source of p): a is applied first
  Path right_arrow(const Path& p, int a) const {
    Path q;
    q.arrows.push_back(a);
    q.arrows.insert(q.arrows.end(), p.arrows.begin(), p.arrows.end());
    q.exps.push_back(0);
    q.exps.insert(q.exps.end(), p.exps.begin(), p.exps.end());
    return q;
  }
};

}  // namespace

template <class K>
Module<K> projective_module(const K& field, const CartanDatum& d, const Orientation& o, int i) {
  Module<K> m = zero_module(field, d, o, Algebra::H);
  PathAlgebra alg{d, m.slots};
  const auto all = alg.paths_from(i);
  std::vector<std::vector<Path>> at(d.n);
  for (const auto& p : all) at[alg.target(p, i)].push_back(p);
  auto index = [&](int v, const Path& p) {
    auto it = std::lower_bound(at[v].begin(), at[v].end(), p);
    return static_cast<std::size_t>(it - at[v].begin());
  };
  for (int v = 0; v < d.n; ++v) {
    m.dims[v] = at[v].size();
    m.eps[v] = Matrix<K>(field, m.dims[v], m.dims[v]);
    for (std::size_t c = 0; c < at[v].size(); ++c)
      if (auto q = alg.left_eps(at[v][c], i)) m.eps[v](index(v, *q), c) = field.one();
  }
  for (std::size_t a = 0; a < m.slots.size(); ++a) {
    const auto& s = m.slots[a];
    m.arrows[a] = Matrix<K>(field, m.dims[s.tgt], m.dims[s.src]);
    for (std::size_t c = 0; c < at[s.src].size(); ++c)
      if (auto q = alg.left_arrow(at[s.src][c], static_cast<int>(a))) m.arrows[a](index(s.tgt, *q), c) = field.one();
  }
  return m;
}

template <class K>
Module<K> injective_module(const K& field, const CartanDatum& d, const Orientation& o, int i) {
  Module<K> m = zero_module(field, d, o, Algebra::H);
  PathAlgebra alg{d, m.slots};
  // basis of e_i H: normal-form paths ending at i, grouped by source
  std::vector<std::vector<Path>> at(d.n);
  for (int v = 0; v < d.n; ++v) {
    for (const auto& p : alg.paths_from(v))
      if (alg.target(p, v) == i) at[v].push_back(p);
  }
  auto index = [&](int v, const Path& p) {
    auto it = std::lower_bound(at[v].begin(), at[v].end(), p);
    if (it == at[v].end() || !(*it == p)) throw MathError(Errc::InternalMismatch, "path not in normal-form basis");
    return static_cast<std::size_t>(it - at[v].begin());
  };
  for (int v = 0; v < d.n; ++v) {
    m.dims[v] = at[v].size();
    // (eps phi)(p) = phi(p eps): matrix is the transpose of right multiplication
    Matrix<K> r(field, m.dims[v], m.dims[v]);
    for (std::size_t c = 0; c < at[v].size(); ++c)
      if (auto q = alg.right_eps(at[v][c], v)) r(index(v, *q), c) = field.one();
    m.eps[v] = r.transpose();
  }
  for (std::size_t a = 0; a < m.slots.size(); ++a) {
    const auto& s = m.slots[a];
    // right multiplication by a maps paths from tgt(a) to paths from src(a)
    Matrix<K> r(field, m.dims[s.src], m.dims[s.tgt]);
    for (std::size_t c = 0; c < at[s.tgt].size(); ++c)
      r(index(s.src, alg.right_arrow(at[s.tgt][c], static_cast<int>(a))), c) = field.one();
    m.arrows[a] = r.transpose();
  }
  return m;
}

// ---------------------------------------------------- sub and quotient

template <class K>
bool is_submodule(const Module<K>& m, const std::vector<Matrix<K>>& u) {
  for (int i = 0; i < m.n(); ++i)
    if (!contains(u[i], m.eps[i] * u[i])) return false;
  for (std::size_t a = 0; a < m.slots.size(); ++a) {
    const auto& s = m.slots[a];
    if (!contains(u[s.tgt], m.arrows[a] * u[s.src])) return false;
  }
  return true;
}

namespace {

// Left inverse on the column space of a full-column-rank matrix.
template <class K>
Matrix<K> left_inverse(const Matrix<K>& u) {
  const K& k = u.field();
  if (u.cols() == 0) return Matrix<K>(k, 0, u.rows());
  auto t = u.transpose();
  const auto rows = rref_in_place(t);
  Matrix<K> sq(k, u.cols(), u.cols());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < u.cols(); ++c) sq(r, c) = u(rows[r], c);
  const auto inv = inverse(sq);
  if (!inv) throw MathError(Errc::InternalMismatch, "left_inverse: rank deficient");
  Matrix<K> sel(k, u.cols(), u.rows());
  for (std::size_t r = 0; r < rows.size(); ++r) sel(r, rows[r]) = k.one();
  return (*inv) * sel;
}

}  // namespace

template <class K>
Module<K> submodule(const Module<K>& m, const std::vector<Matrix<K>>& u) {
  Module<K> s = m;
  std::vector<Matrix<K>> li;
  for (int i = 0; i < m.n(); ++i) {
    li.push_back(left_inverse(u[i]));
    s.dims[i] = u[i].cols();
    s.eps[i] = li[i] * m.eps[i] * u[i];
  }
  for (std::size_t a = 0; a < m.slots.size(); ++a) {
    const auto& sl = m.slots[a];
    s.arrows[a] = li[sl.tgt] * m.arrows[a] * u[sl.src];
  }
  return s;
}

template <class K>
Module<K> quotient(const Module<K>& m, const std::vector<Matrix<K>>& u) {
  Module<K> q = m;
  std::vector<Matrix<K>> comp, proj;
  for (int i = 0; i < m.n(); ++i) {
    const auto c = complement_basis(u[i]);
    const auto full = hstack(u[i], c);
    const auto inv = inverse(full);
    if (!inv) throw MathError(Errc::InternalMismatch, "quotient: dependent basis");
    proj.push_back(inv->block(u[i].cols(), 0, c.cols(), m.dims[i]));
    comp.push_back(c);
    q.dims[i] = c.cols();
    q.eps[i] = proj[i] * m.eps[i] * c;
  }
  for (std::size_t a = 0; a < m.slots.size(); ++a) {
    const auto& sl = m.slots[a];
    q.arrows[a] = proj[sl.tgt] * m.arrows[a] * comp[sl.src];
  }
  return q;
}

Module<PrimeField> reduce_mod(const Module<Rational>& m, const PrimeField& f) {
  auto red = [&](const Matrix<Rational>& x) {
    Matrix<PrimeField> y(f, x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < x.cols(); ++j) {
        const auto& v = x(i, j);
        const auto den = mpz_class(v.get_den() % f.prime());
        if (den == 0) throw MathError(Errc::BadReduction, "denominator divisible by " + std::to_string(f.prime()));
        const auto num = mpz_class(v.get_num() % f.prime());
        y(i, j) = f.div(f.from_int(num.get_si()), f.from_int(den.get_si()));
      }
    return y;
  };
  Module<PrimeField> r;
  r.field = f;
  r.datum = m.datum;
  r.omega = m.omega;
  r.algebra = m.algebra;
  r.slots = m.slots;
  r.dims = m.dims;
  for (const auto& e : m.eps) r.eps.push_back(red(e));
  for (const auto& a : m.arrows) r.arrows.push_back(red(a));
  return r;
}

template <class K>
Module<K> to_pi(const Module<K>& m) {
  if (m.algebra == Algebra::Pi) return m;
  Module<K> p = m;
  p.algebra = Algebra::Pi;
  p.slots = arrow_slots(m.datum, m.omega, Algebra::Pi);
  for (std::size_t a = m.slots.size(); a < p.slots.size(); ++a)
    p.arrows.emplace_back(m.field, m.dims[p.slots[a].tgt], m.dims[p.slots[a].src]);
  return p;
}

template <class K>
Module<K> restrict_to_h(const Module<K>& m) {
  if (m.algebra == Algebra::H) return m;
  Module<K> h = m;
  h.algebra = Algebra::H;
  h.slots = arrow_slots(m.datum, m.omega, Algebra::H);
  h.arrows.resize(h.slots.size());
  return h;
}

#define CARTANREP_INSTANTIATE(K)                                                                              \
  template Matrix<K> jordan_rect(const K&, int, std::size_t);                                                 \
  template Module<K> zero_module(const K&, const CartanDatum&, const Orientation&, Algebra);                  \
  template Module<K> generalized_simple(const K&, const CartanDatum&, const Orientation&, int, Algebra);      \
  template Module<K> jordan_skeleton(const K&, const CartanDatum&, const Orientation&, const IntVec&, Algebra); \
  template std::vector<std::string> check_relations(const Module<K>&);                                        \
  template std::optional<IntVec> is_locally_free(const Module<K>&);                                           \
  template std::optional<Module<K>> normalize_jordan(const Module<K>&);                                       \
  template Module<K> change_basis(const Module<K>&, const std::vector<Matrix<K>>&);                           \
  template std::vector<std::vector<Matrix<K>>> arrow_solution_basis(const Module<K>&);                        \
  template Module<K> random_locally_free(const K&, const CartanDatum&, const Orientation&, const IntVec&,     \
                                         std::uint64_t);                                                      \
  template Module<K> direct_sum(const Module<K>&, const Module<K>&);                                          \
  template Module<K> twist(const Module<K>&);                                                                 \
  template std::vector<Hom<K>> hom_basis(const Module<K>&, const Module<K>&);                                 \
  template std::size_t hom_dim(const Module<K>&, const Module<K>&);                                           \
  template bool is_homomorphism(const Module<K>&, const Module<K>&, const Hom<K>&);                           \
  template std::size_t ext1_presentation(const Module<K>&, const Module<K>&);                                 \
  template std::vector<std::vector<Matrix<K>>> ext1_cocycles(const Module<K>&, const Module<K>&);             \
  template Module<K> extension(const Module<K>&, const Module<K>&, const std::vector<Matrix<K>>&);            \
  template std::size_t ext1_dim(const Module<K>&, const Module<K>&);                                          \
  template bool is_isomorphic(const Module<K>&, const Module<K>&, std::uint64_t);                             \
  template Module<K> projective_module(const K&, const CartanDatum&, const Orientation&, int);                \
  template Module<K> injective_module(const K&, const CartanDatum&, const Orientation&, int);                 \
  template Module<K> submodule(const Module<K>&, const std::vector<Matrix<K>>&);                              \
  template Module<K> quotient(const Module<K>&, const std::vector<Matrix<K>>&);                               \
  template bool is_submodule(const Module<K>&, const std::vector<Matrix<K>>&);                                \
  template Module<K> to_pi(const Module<K>&);                                                                 \
  template Module<K> restrict_to_h(const Module<K>&);                                                         \
  template bool same_shape(const Module<K>&, const Module<K>&);

CARTANREP_INSTANTIATE(Rational)
CARTANREP_INSTANTIATE(PrimeField)

}  // namespace cartanrep
