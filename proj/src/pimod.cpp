#include "cartanrep/pimod.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <type_traits>

namespace cartanrep {

namespace {

template <class K>
void require_pi(const Module<K>& m, const char* op) {
  if (m.algebra != Algebra::Pi) throw MathError(Errc::SpecMismatch, std::string(op) + " expects a Pi-module");
}

// Partition from n_t = rank eps^{t-1} - rank eps^t (number of blocks of size >= t).
template <class K>
Partition partition_of(const Matrix<K>& e, int c) {
  std::vector<std::size_t> rk{e.rows()};
  Matrix<K> p = Matrix<K>::identity(e.field(), e.rows());
  for (int t = 1; t <= c + 1; ++t) {
    p = p * e;
    rk.push_back(rank(p));
  }
  Partition parts;
  for (int t = c; t >= 1; --t) {
    const auto ge_t = rk[t - 1] - rk[t];
    const auto ge_next = rk[t] - rk[t + 1];
    for (std::size_t x = ge_next; x < ge_t; ++x) parts.push_back(t);
  }
  return parts;
}

bool all_free(const Partition& p, int c) {
  return std::all_of(p.begin(), p.end(), [c](int x) { return x == c; });
}

template <class K>
std::string fingerprint(const Module<K>& m) {
  std::ostringstream os;
  for (auto d : m.dims) os << d << ',';
  for (const auto& e : m.eps) os << e.str() << ';';
  for (const auto& a : m.arrows) os << a.str() << ';';
  return os.str();
}

template <class K>
std::vector<Matrix<K>> full_spaces(const Module<K>& m) {
  std::vector<Matrix<K>> u;
  for (int i = 0; i < m.n(); ++i) u.push_back(Matrix<K>::identity(m.field, m.dims[i]));
  return u;
}

template <class K>
std::vector<Matrix<K>> empty_spaces(const Module<K>& m) {
  std::vector<Matrix<K>> u;
  for (int i = 0; i < m.n(); ++i) u.emplace_back(m.field, m.dims[i], 0);
  return u;
}

template <class K>
Matrix<K> cyclic_span(const Matrix<K>& eps, const Matrix<K>& v, int c) {
  Matrix<K> out(v.field(), v.rows(), 0);
  Matrix<K> w = v;
  for (int t = 0; t < c; ++t) {
    out = hstack(out, w);
    w = eps * w;
  }
  return out;
}

template <class K>
class EFilterSearch {
 public:
  EFilterSearch(std::size_t budget, std::uint64_t seed) : budget_(budget), rng_(seed) {}

  bool run(const Module<K>& m, std::vector<int>& witness) {
    if (++nodes_ > budget_)
      throw MathError(Errc::SearchBudgetExceeded, "E-filtration search exceeded " + std::to_string(budget_) + " nodes");
    if (m.total_dim() == 0) return true;
    const auto key = fingerprint(m);
    if (dead_.count(key)) return false;
    const auto j = normalize_jordan(m);
    if (!j) return false;
    bool exhaustive = true;
    for (int i = 0; i < m.n(); ++i) {
      const int c = static_cast<int>(m.datum.D[i]);
      const auto w = out_kernel(*j, i);
      if (w.cols() == 0) continue;
      bool complete = false;
      for (const auto& v : candidates(*j, i, w, complete)) {
        auto u = empty_spaces(*j);
        u[i] = cyclic_span(j->eps[i], v, c);
        witness.push_back(i);
        if (run(quotient(*j, u), witness)) return true;
        witness.pop_back();
      }
      if (!complete) exhaustive = false;
    }
    if (!exhaustive) inconclusive_ = true;
    else dead_.insert(key);
    return false;
  }

  std::size_t nodes() const { return nodes_; }
  bool inconclusive() const { return inconclusive_; }

 private:
  // Generators v in W with eps^{c-1} v != 0; `complete` reports whether every rank-one free submodule in W is hit.
  std::vector<Matrix<K>> candidates(const Module<K>& m, int i, const Matrix<K>& w, bool& complete) {
    const int c = static_cast<int>(m.datum.D[i]);
    const auto top = power(m.eps[i], c - 1);
    std::vector<Matrix<K>> out;
    auto consider = [&](const Matrix<K>& v) {
      if ((top * v).is_zero()) return;
      for (const auto& x : out)
        if (contains(cyclic_span(m.eps[i], x, c), v)) return;
      out.push_back(v);
    };
    const K& f = m.field;
    const std::size_t dim = w.cols();
    if (rank(top * w) == 0) {
      complete = true;
      return out;
    }
    if (dim == static_cast<std::size_t>(c)) {
      complete = true;
      consider(w.column(0));
      for (std::size_t b = 1; b < dim; ++b) consider(w.column(b));
      return out;
    }
    if constexpr (std::is_same_v<K, PrimeField>) {
      std::uint64_t total = 1;
      bool small = true;
      for (std::size_t b = 0; b < dim && small; ++b) {
        total *= f.order();
        if (total > 20000) small = false;
      }
      if (small) {
        complete = true;
        // projective points: first nonzero coordinate equal to one
        for (std::size_t lead = 0; lead < dim; ++lead) {
          std::uint64_t rest = 1;
          for (std::size_t b = lead + 1; b < dim; ++b) rest *= f.order();
          for (std::uint64_t code = 0; code < rest; ++code) {
            Matrix<K> coeff(f, dim, 1);
            coeff(lead, 0) = f.one();
            std::uint64_t x = code;
            for (std::size_t b = lead + 1; b < dim; ++b) {
              coeff(b, 0) = f.element(x % f.order());
              x /= f.order();
            }
            consider(w * coeff);
          }
        }
        return out;
      }
    }
    complete = false;
    for (std::size_t b = 0; b < dim; ++b) consider(w.column(b));
    for (int s = 0; s < 64; ++s) {
      Matrix<K> coeff(f, dim, 1);
      for (std::size_t b = 0; b < dim; ++b) coeff(b, 0) = f.random(rng_);
      consider(w * coeff);
    }
    return out;
  }

  std::size_t budget_;
  std::size_t nodes_ = 0;
  bool inconclusive_ = false;
  std::mt19937_64 rng_;
  std::set<std::string> dead_;
};

template <class K>
class CrystalCheck {
 public:
  bool run(const Module<K>& m) {
    if (m.total_dim() == 0) return true;
    const auto key = fingerprint(m);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool ok = true;
    for (int j = 0; j < m.n() && ok; ++j) {
      const int c = static_cast<int>(m.datum.D[j]);
      const auto fs = fac_sub(m, j);
      if (!all_free(fs.fac, c) || !all_free(fs.sub, c)) ok = false;
    }
    for (int j = 0; j < m.n() && ok; ++j) {
      const auto fs = fac_sub(m, j);
      if (!fs.fac.empty() && !run(kernel_part(m, j))) ok = false;
      if (ok && !fs.sub.empty() && !run(cokernel_part(m, j))) ok = false;
    }
    memo_[key] = ok;
    return ok;
  }

 private:
  std::map<std::string, bool> memo_;
};

// Residual of the reversed-arrow commutation and all mesh relations, flattened.
template <class K>
Matrix<K> pi_residual(const Module<K>& m) {
  Matrix<K> out(m.field, 0, 1);
  for (std::size_t a = 0; a < m.slots.size(); ++a) {
    const auto& s = m.slots[a];
    if (!s.reversed) continue;
    out = vstack(out, vec(Matrix<K>(power(m.eps[s.tgt], s.tgt_exp) * m.arrows[a] -
                                    m.arrows[a] * power(m.eps[s.src], s.src_exp))));
  }
  for (int k = 0; k < m.n(); ++k) {
    Matrix<K> mesh(m.field, m.dims[k], m.dims[k]);
    for (std::size_t a = 0; a < m.slots.size(); ++a) {
      const auto& s = m.slots[a];
      if (s.tgt != k) continue;
      const auto cyc = m.arrows[a] * m.arrows[s.partner];
      Matrix<K> sum(m.field, m.dims[k], m.dims[k]);
      for (int t = 0; t < s.tgt_exp; ++t) sum = sum + power(m.eps[k], s.tgt_exp - 1 - t) * cyc * power(m.eps[k], t);
      mesh = s.reversed ? mesh - sum : mesh + sum;
    }
    out = vstack(out, vec(mesh));
  }
  return out;
}

}  // namespace

template <class K>
Module<K> from_h_module(const Module<K>& m) {
  if (!check_relations(m).empty()) throw MathError(Errc::SpecMismatch, "from_h_module: relations fail");
  return to_pi(m);
}

template <class K>
Matrix<K> in_image(const Module<K>& m, int k) {
  const int c = static_cast<int>(m.datum.D[k]);
  Matrix<K> cols(m.field, m.dims[k], 0);
  for (std::size_t a = 0; a < m.slots.size(); ++a)
    if (m.slots[a].tgt == k) cols = hstack(cols, cyclic_span(m.eps[k], m.arrows[a], c));
  return column_basis(cols);
}

template <class K>
Matrix<K> out_kernel(const Module<K>& m, int k) {
  const int c = static_cast<int>(m.datum.D[k]);
  Matrix<K> rows(m.field, 0, m.dims[k]);
  for (std::size_t a = 0; a < m.slots.size(); ++a) {
    if (m.slots[a].src != k) continue;
    Matrix<K> p = m.arrows[a];
    for (int t = 0; t < c; ++t) {
      rows = vstack(rows, p);
      p = p * m.eps[k];
    }
  }
  return kernel(rows);
}

template <class K>
Partition partition_on_subspace(const Matrix<K>& eps, const Matrix<K>& u, int c) {
  if (u.cols() == 0) return {};
  const auto li = solve(u, eps * u);
  if (!li) throw MathError(Errc::InternalMismatch, "subspace is not eps-stable");
  return partition_of(*li, c);
}

template <class K>
Partition partition_on_quotient(const Matrix<K>& eps, const Matrix<K>& u, int c) {
  const auto comp = complement_basis(u);
  if (comp.cols() == 0) return {};
  const auto inv = inverse(hstack(u, comp));
  const auto proj = inv->block(u.cols(), 0, comp.cols(), eps.rows());
  return partition_of(Matrix<K>(proj * eps * comp), c);
}

template <class K>
FacSub fac_sub(const Module<K>& m, int k) {
  const int c = static_cast<int>(m.datum.D[k]);
  return {partition_on_quotient(m.eps[k], in_image(m, k), c), partition_on_subspace(m.eps[k], out_kernel(m, k), c)};
}

template <class K>
Module<K> kernel_part(const Module<K>& m, int j) {
  auto u = full_spaces(m);
  u[j] = in_image(m, j);
  return submodule(m, u);
}

template <class K>
Module<K> cokernel_part(const Module<K>& m, int j) {
  auto u = empty_spaces(m);
  u[j] = out_kernel(m, j);
  return quotient(m, u);
}

template <class K>
EFilterResult is_E_filtered(const Module<K>& m, std::size_t budget, std::uint64_t seed) {
  EFilterSearch<K> search(budget, seed);
  EFilterResult r;
  if (!is_locally_free(m)) {
    r.nodes = 1;
    return r;
  }
  r.filtered = search.run(m, r.witness);
  r.nodes = search.nodes();
  if (!r.filtered) {
    r.witness.clear();
    if (search.inconclusive())
      throw MathError(Errc::SearchBudgetExceeded,
                      "no E-filtration found among sampled generators after " + std::to_string(r.nodes) + " nodes");
  }
  return r;
}

template <class K>
bool is_crystal_module(const Module<K>& m) {
  CrystalCheck<K> check;
  return check.run(m);
}

template <class K>
int phi(const Module<K>& m, int i) {
  const auto fs = fac_sub(m, i);
  if (!all_free(fs.sub, static_cast<int>(m.datum.D[i])))
    throw MathError(Errc::Undefined, "sub_" + std::to_string(i + 1) + " is not free");
  return static_cast<int>(fs.sub.size());
}

template <class K>
int phi_star(const Module<K>& m, int i) {
  const auto fs = fac_sub(m, i);
  if (!all_free(fs.fac, static_cast<int>(m.datum.D[i])))
    throw MathError(Errc::Undefined, "fac_" + std::to_string(i + 1) + " is not free");
  return static_cast<int>(fs.fac.size());
}

template <class K>
Module<K> random_E_filtered(const K& field, const CartanDatum& d, const Orientation& o, const std::vector<int>& seq,
                            std::uint64_t seed) {
  if (seq.empty()) return zero_module(field, d, o, Algebra::Pi);
  std::mt19937_64 rng(seed);
  Module<K> x = generalized_simple(field, d, o, seq.back(), Algebra::Pi);
  for (std::size_t k = seq.size() - 1; k-- > 0;) {
    const auto e = generalized_simple(field, d, o, seq[k], Algebra::Pi);
    const auto basis = ext1_cocycles(x, e);
    std::vector<Matrix<K>> z;
    for (std::size_t a = 0; a < x.slots.size(); ++a) z.emplace_back(field, e.dims[x.slots[a].tgt], x.dims[x.slots[a].src]);
    for (const auto& b : basis) {
      const auto s = field.random(rng);
      for (std::size_t a = 0; a < z.size(); ++a) z[a] = z[a] + b[a].scaled(s);
    }
    if constexpr (std::is_same_v<K, Rational>) {
      mpz_class l = 1;
      for (const auto& za : z)
        for (const auto& v : za.data()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den().get_mpz_t());
      for (auto& za : z) za = za.scaled(Rational::Elem(l));
    }
    x = extension(x, e, z);
  }
  return x;
}

template <class K>
Module<K> random_pi_module(const K& field, const CartanDatum& d, const Orientation& o, const IntVec& r,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Module<K> h = jordan_skeleton(field, d, o, r, Algebra::H);
  // half of the basis directions are dropped so that special positions are reached
  for (const auto& b : arrow_solution_basis(h)) {
    if (rng() & 1) continue;
    const auto x = field.random(rng);
    for (std::size_t a = 0; a < h.arrows.size(); ++a) h.arrows[a] = h.arrows[a] + b[a].scaled(x);
  }
  Module<K> m = to_pi(h);
  const std::size_t nf = h.slots.size();
  std::vector<std::pair<std::size_t, std::size_t>> coord;  // (slot, entry)
  for (std::size_t a = nf; a < m.slots.size(); ++a)
    for (std::size_t e = 0; e < m.arrows[a].rows() * m.arrows[a].cols(); ++e) coord.emplace_back(a, e);
  Matrix<K> sys(field, pi_residual(m).rows(), coord.size());
  for (std::size_t x = 0; x < coord.size(); ++x) {
    Module<K> u = m;
    auto& mat = u.arrows[coord[x].first];
    mat(coord[x].second % mat.rows(), coord[x].second / mat.rows()) = field.one();
    sys.set_block(0, x, pi_residual(u));
  }
  const auto ker = kernel(sys);
  Matrix<K> coeff(field, ker.cols(), 1);
  for (std::size_t b = 0; b < ker.cols(); ++b) coeff(b, 0) = field.random(rng);
  const auto sol = ker * coeff;
  for (std::size_t x = 0; x < coord.size(); ++x) {
    auto& mat = m.arrows[coord[x].first];
    mat(coord[x].second % mat.rows(), coord[x].second / mat.rows()) = sol(x, 0);
  }
  return m;
}

template <class K>
std::size_t hom_pi(const Module<K>& m, const Module<K>& n) {
  require_pi(m, "hom_pi");
  require_pi(n, "hom_pi");
  return hom_dim(m, n);
}

template <class K>
std::size_t ext1_pi(const Module<K>& m, const Module<K>& n) {
  require_pi(m, "ext1_pi");
  require_pi(n, "ext1_pi");
  if (!is_locally_free(m)) throw MathError(Errc::NotLocallyFree, "ext1_pi: first argument is not locally free");
  return ext1_presentation(m, n);
}

std::int64_t cb_prediction(std::size_t hom_mn, std::size_t hom_nm, const CartanDatum& d, const IntVec& rm,
                           const IntVec& rn) {
  return static_cast<std::int64_t>(hom_mn + hom_nm) - sym_form(d, rm, rn);
}

#define CARTANREP_PIMOD(K)                                                                                     \
  template Module<K> from_h_module(const Module<K>&);                                                          \
  template Matrix<K> in_image(const Module<K>&, int);                                                          \
  template Matrix<K> out_kernel(const Module<K>&, int);                                                        \
  template FacSub fac_sub(const Module<K>&, int);                                                              \
  template Partition partition_on_subspace(const Matrix<K>&, const Matrix<K>&, int);                           \
  template Partition partition_on_quotient(const Matrix<K>&, const Matrix<K>&, int);                           \
  template Module<K> kernel_part(const Module<K>&, int);                                                       \
  template Module<K> cokernel_part(const Module<K>&, int);                                                     \
  template EFilterResult is_E_filtered(const Module<K>&, std::size_t, std::uint64_t);                          \
  template bool is_crystal_module(const Module<K>&);                                                           \
  template int phi(const Module<K>&, int);                                                                     \
  template int phi_star(const Module<K>&, int);                                                                \
  template Module<K> random_E_filtered(const K&, const CartanDatum&, const Orientation&, const std::vector<int>&, \
                                       std::uint64_t);                                                         \
  template Module<K> random_pi_module(const K&, const CartanDatum&, const Orientation&, const IntVec&,         \
                                      std::uint64_t);                                                          \
  template std::size_t hom_pi(const Module<K>&, const Module<K>&);                                             \
  template std::size_t ext1_pi(const Module<K>&, const Module<K>&);

CARTANREP_PIMOD(Rational)
CARTANREP_PIMOD(PrimeField)

}  // namespace cartanrep
