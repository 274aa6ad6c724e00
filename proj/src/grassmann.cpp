#include "cartanrep/grassmann.hpp"

#include <memory>
#include <optional>
#include <sstream>

#include "cartanrep/pimod.hpp"

namespace cartanrep {

using FpMatrix = Matrix<PrimeField>;
using FpModule = Module<PrimeField>;

namespace {

std::uint32_t next_prime(std::uint32_t p) {
  do ++p;
  while (!PrimeField::is_prime(p));
  return p;
}

std::vector<FpMatrix> empty_spaces(const FpModule& m) {
  std::vector<FpMatrix> u;
  for (int i = 0; i < m.n(); ++i) u.emplace_back(m.field, m.dims[i], 0);
  return u;
}

FpModule jordan_or_throw(const FpModule& m) {
  auto j = normalize_jordan(m);
  if (!j) throw MathError(Errc::NotLocallyFree, "counting needs a locally free module");
  return *j;
}

IntVec rank_of(const FpModule& m) {
  IntVec r(m.n());
  for (int i = 0; i < m.n(); ++i) r[i] = static_cast<std::int64_t>(m.dims[i]) / m.datum.D[i];
  return r;
}

class Budget {
 public:
  explicit Budget(std::size_t limit) : limit_(limit) {}
  void tick() {
    if (++used_ > limit_)
      throw MathError(Errc::TooLarge, "subspace enumeration exceeded " + std::to_string(limit_) + " echelon forms");
  }

 private:
  std::size_t limit_;
  std::size_t used_ = 0;
};

bool enumerate_free(const PrimeField& f, int c, std::size_t r, std::size_t e,
                    const std::function<bool(const FpMatrix&)>& visit) {
  if (e > r) return true;
  const std::uint64_t p = f.order();
  std::vector<std::size_t> piv(e);
  for (std::size_t s = 0; s < e; ++s) piv[s] = s;
  while (true) {
    std::vector<bool> is_piv(r, false);
    for (auto x : piv) is_piv[x] = true;
    // free slots (generator, coordinate, eps-degree)
    std::vector<std::tuple<std::size_t, std::size_t, int>> slots;
    for (std::size_t s = 0; s < e; ++s)
      for (std::size_t j = 0; j < r; ++j) {
        if (is_piv[j]) continue;
        for (int u = (j > piv[s] ? 0 : 1); u < c; ++u) slots.emplace_back(s, j, u);
      }
    std::vector<std::uint64_t> digit(slots.size(), 0);
    while (true) {
      FpMatrix basis(f, r * c, e * c);
      for (std::size_t s = 0; s < e; ++s)
        for (int t = 0; t < c; ++t) basis(piv[s] * c + t, s * c + t) = f.one();
      for (std::size_t x = 0; x < slots.size(); ++x) {
        if (digit[x] == 0) continue;
        const auto [s, j, u] = slots[x];
        for (int t = 0; u + t < c; ++t) basis(j * c + u + t, s * c + t) = f.element(digit[x]);
      }
      if (!visit(basis)) return false;
      std::size_t x = 0;
      while (x < digit.size() && ++digit[x] == p) digit[x++] = 0;
      if (x == digit.size()) break;
    }
    // next pivot subset
    std::size_t s = e;
    while (s > 0 && piv[s - 1] == r - e + s - 1) --s;
    if (s == 0) break;
    ++piv[s - 1];
    for (std::size_t t = s; t < e; ++t) piv[t] = piv[t - 1] + 1;
  }
  return true;
}

// Submodule search with vertices in `order`; vertices in `closed` have c = 1 and
// only enumerated neighbours, so they are handled between S and L.
class SubmoduleSearch {
 public:
  SubmoduleSearch(const FpModule& m, const IntVec& e, std::size_t budget) : m_(m), e_(e), budget_(budget) {
    const int n = m.n();
    std::vector<bool> in_closed(n, false);
    for (int i = 0; i < n; ++i) {
      if (m.datum.D[i] != 1) continue;
      bool ok = true;
      for (int j = 0; j < n; ++j)
        if (in_closed[j] && m.datum.adjacent(i, j)) ok = false;
      if (ok) in_closed[i] = true;
    }
    for (int i = 0; i < n; ++i) (in_closed[i] ? closed_ : order_).push_back(i);
    u_ = empty_spaces(m);
    chosen_.assign(n, false);
  }

  mpz_class count() {
    mpz_class total = 0;
    walk(0, [&](mpz_class w) {
      total += w;
      return true;
    }, true);
    return total;
  }

  void visit(const std::function<bool(const std::vector<FpMatrix>&)>& f) {
    walk(0, [&](mpz_class) { return f(u_); }, false);
  }

 private:
  bool arrows_ok(int v) const {
    for (std::size_t a = 0; a < m_.slots.size(); ++a) {
      const auto& s = m_.slots[a];
      if ((s.src != v && s.tgt != v) || !chosen_[s.src] || !chosen_[s.tgt]) continue;
      if (!contains(u_[s.tgt], FpMatrix(m_.arrows[a] * u_[s.src]))) return false;
    }
    return true;
  }

  // S = sum of images of incoming arrows, L = intersection of preimages along outgoing arrows.
  std::pair<FpMatrix, FpMatrix> bounds(int v) const {
    const PrimeField& f = m_.field;
    FpMatrix s(f, m_.dims[v], 0);
    FpMatrix rows(f, 0, m_.dims[v]);
    for (std::size_t a = 0; a < m_.slots.size(); ++a) {
      const auto& sl = m_.slots[a];
      if (sl.tgt == v) s = hstack(s, FpMatrix(m_.arrows[a] * u_[sl.src]));
      if (sl.src == v) rows = vstack(rows, FpMatrix(annihilator(u_[sl.tgt]) * m_.arrows[a]));
    }
    return {column_basis(s), kernel(rows)};
  }

  bool walk(std::size_t idx, const std::function<bool(mpz_class)>& leaf, bool counting) {
    if (idx < order_.size()) {
      const int v = order_[idx];
      return enumerate_free(m_.field, static_cast<int>(m_.datum.D[v]), m_.dims[v] / m_.datum.D[v],
                            static_cast<std::size_t>(e_[v]), [&](const FpMatrix& b) {
                              budget_.tick();
                              u_[v] = b;
                              chosen_[v] = true;
                              bool go = true;
                              if (arrows_ok(v)) go = walk(idx + 1, leaf, counting);
                              chosen_[v] = false;
                              return go;
                            });
    }
    if (counting) {
      mpz_class w = 1;
      for (int v : closed_) {
        const auto [s, l] = bounds(v);
        if (!contains(l, s)) return true;
        const auto ds = static_cast<std::int64_t>(s.cols()), dl = static_cast<std::int64_t>(l.cols());
        w *= gaussian_binomial(dl - ds, e_[v] - ds, m_.field.order());
        if (w == 0) return true;
      }
      return leaf(w);
    }
    return walk_closed(0, leaf);
  }

  bool walk_closed(std::size_t idx, const std::function<bool(mpz_class)>& leaf) {
    if (idx == closed_.size()) return leaf(1);
    const int v = closed_[idx];
    const auto [s, l] = bounds(v);
    if (!contains(l, s)) return true;
    const auto ds = s.cols();
    if (static_cast<std::size_t>(e_[v]) < ds) return true;
    FpMatrix aug = hstack(s, l);
    const auto piv = rref_in_place(aug);
    std::vector<std::size_t> extra;
    for (auto p : piv)
      if (p >= ds) extra.push_back(p - ds);
    const FpMatrix t = l.columns(extra);
    return enumerate_free(m_.field, 1, t.cols(), e_[v] - ds, [&](const FpMatrix& x) {
      budget_.tick();
      u_[v] = hstack(s, FpMatrix(t * x));
      chosen_[v] = true;
      const bool go = walk_closed(idx + 1, leaf);
      chosen_[v] = false;
      return go;
    });
  }

  const FpModule& m_;
  IntVec e_;
  Budget budget_;
  std::vector<int> order_, closed_;
  std::vector<FpMatrix> u_;
  std::vector<bool> chosen_;
};

void check_rank(const FpModule& m, const IntVec& e) {
  if (e.size() != static_cast<std::size_t>(m.n())) throw MathError(Errc::ShapeMismatch, "rank vector length");
}

std::string fingerprint(const FpModule& m) {
  std::ostringstream os;
  for (auto d : m.dims) os << d << ',';
  for (const auto& a : m.arrows) os << a.str() << ';';
  return os.str();
}

class EFlagCounter {
 public:
  EFlagCounter(const std::vector<int>& word, std::size_t budget) : word_(word), budget_(budget) {}

  mpz_class run(const FpModule& x, std::size_t pos) {
    if (pos == word_.size()) return x.total_dim() == 0 ? 1 : 0;
    IntVec need(x.n(), 0);
    for (std::size_t t = pos; t < word_.size(); ++t) ++need[word_[t]];
    if (rank_of(x) != need) return 0;
    const auto key = std::to_string(pos) + "|" + fingerprint(x);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const int j = word_[pos];
    const int c = static_cast<int>(x.datum.D[j]);
    const auto w = out_kernel(x, j);
    mpz_class total = 0;
    if (!(power(x.eps[j], c - 1) * w).is_zero()) {
      enumerate_free(x.field, c, x.dims[j] / c, 1, [&](const FpMatrix& u) {
        budget_.tick();
        if (!contains(w, u)) return true;
        auto sub = empty_spaces(x);
        sub[j] = u;
        if (auto q = normalize_jordan(quotient(x, sub))) total += run(*q, pos + 1);
        return true;
      });
    }
    memo_[key] = total;
    return total;
  }

 private:
  std::vector<int> word_;
  Budget budget_;
  std::map<std::string, mpz_class> memo_;
};

// Flags with prescribed subquotient ranks; a factor with a target must also be isomorphic to it.
class IsoFlagSearch {
 public:
  IsoFlagSearch(const std::vector<IntVec>& betas, const std::vector<std::optional<FpModule>>& targets,
                std::size_t budget, bool existence)
      : betas_(betas), targets_(targets), budget_(budget), existence_(existence) {
    for (std::size_t k = 0; k < targets_.size(); ++k) {
      const auto& t = targets_[k];
      const auto self = euler_form(t ? t->datum : CartanDatum{}, t ? t->omega : Orientation{}, betas_[k], betas_[k]);
      rigid_.push_back(t && static_cast<std::int64_t>(hom_dim(*t, *t)) == self);
      self_.push_back(self);
    }
  }

  mpz_class run(const FpModule& x, std::size_t pos) {
    if (pos == betas_.size()) return x.total_dim() == 0 ? 1 : 0;
    const auto& beta = betas_[pos];
    const auto r = rank_of(x);
    for (int i = 0; i < x.n(); ++i)
      if (beta[i] > r[i]) return 0;
    mpz_class total = 0;
    for_each_locally_free_submodule(
        x, beta,
        [&](const std::vector<FpMatrix>& u) {
          budget_.tick();
          if (const auto& t = targets_[pos]) {
            const auto s = submodule(x, u);
            const bool iso = rigid_[pos] ? static_cast<std::int64_t>(hom_dim(s, s)) == self_[pos] : is_isomorphic(s, *t);
            if (!iso) return true;
          }
          const auto q = normalize_jordan(quotient(x, u));
          if (!q) return true;
          total += run(*q, pos + 1);
          return !(existence_ && total > 0);
        },
        kCountBudget);
    return total;
  }

 private:
  std::vector<IntVec> betas_;
  std::vector<std::optional<FpModule>> targets_;
  Budget budget_;
  bool existence_;
  std::vector<bool> rigid_;
  std::vector<std::int64_t> self_;
};

CartanDatum datum_of(const Family& fam, const std::vector<std::uint32_t>& primes) {
  for (auto p : primes) {
    try {
      return fam(PrimeField(p)).datum;
    } catch (const MathError& e) {
      if (e.code() != Errc::BadReduction) throw;
    }
  }
  throw MathError(Errc::BadReduction, "no sampled prime gives a good reduction");
}

mpz_class factorial(std::int64_t n) {
  mpz_class r = 1;
  for (std::int64_t k = 2; k <= n; ++k) r *= k;
  return r;
}

}  // namespace

mpz_class CountingPolynomial::at(std::int64_t q) const {
  mpz_class v = 0;
  for (std::size_t d = coeffs.size(); d-- > 0;) v = v * q + coeffs[d];
  return v;
}

std::string CountingPolynomial::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t d = coeffs.size(); d-- > 0;) {
    if (coeffs[d] == 0) continue;
    os << (first ? "" : " + ") << coeffs[d];
    if (d > 0) os << "*q" << (d > 1 ? "^" + std::to_string(d) : "");
    first = false;
  }
  return first ? "0" : os.str();
}

const std::vector<std::uint32_t>& default_primes() {
  static const std::vector<std::uint32_t> p{5, 7, 11, 13, 17};
  return p;
}

mpz_class gaussian_binomial(std::int64_t n, std::int64_t k, std::uint64_t q) {
  if (k < 0 || k > n) return 0;
  mpz_class num = 1, den = 1, qq = static_cast<unsigned long>(q);
  for (std::int64_t i = 0; i < k; ++i) {
    mpz_class a, b;
    mpz_pow_ui(a.get_mpz_t(), qq.get_mpz_t(), static_cast<unsigned long>(n - i));
    mpz_pow_ui(b.get_mpz_t(), qq.get_mpz_t(), static_cast<unsigned long>(i + 1));
    num *= a - 1;
    den *= b - 1;
  }
  return num / den;
}

void for_each_free_submodule(const PrimeField& f, int c, std::size_t r, std::size_t e,
                             const std::function<void(const FpMatrix&)>& visit) {
  enumerate_free(f, c, r, e, [&](const FpMatrix& b) {
    visit(b);
    return true;
  });
}

mpz_class count_locally_free_submodules(const FpModule& m, const IntVec& e, std::size_t budget) {
  check_rank(m, e);
  const auto j = jordan_or_throw(m);
  const auto r = rank_of(j);
  for (int i = 0; i < j.n(); ++i)
    if (e[i] < 0 || e[i] > r[i]) return 0;
  SubmoduleSearch search(j, e, budget);
  return search.count();
}

void for_each_locally_free_submodule(const FpModule& m, const IntVec& e,
                                     const std::function<bool(const std::vector<FpMatrix>&)>& visit,
                                     std::size_t budget) {
  check_rank(m, e);
  const auto j = jordan_or_throw(m);
  if (!(j.eps == m.eps)) throw MathError(Errc::SpecMismatch, "enumeration expects Jordan-normalized eps");
  const auto r = rank_of(j);
  for (int i = 0; i < j.n(); ++i)
    if (e[i] < 0 || e[i] > r[i]) return;
  SubmoduleSearch search(j, e, budget);
  search.visit(visit);
}

mpz_class count_E_flags(const FpModule& m, const std::vector<int>& word, std::size_t budget) {
  const auto j = normalize_jordan(m);
  if (!j) return 0;
  EFlagCounter counter(word, budget);
  return counter.run(*j, 0);
}

CountingPolynomial interpolate_counts(const std::function<mpz_class(const PrimeField&)>& count, std::int64_t degree_bound,
                                      const std::vector<std::uint32_t>& primes) {
  CountingPolynomial poly;
  poly.degree_bound = degree_bound;
  const std::size_t needed = static_cast<std::size_t>(std::max<std::int64_t>(degree_bound, 0)) + 2;
  std::size_t next = 0;
  std::uint32_t p = 0;
  while (next < primes.size() || poly.samples.size() < needed) {
    p = next < primes.size() ? primes[next++] : next_prime(std::max<std::uint32_t>(p, 17));
    try {
      poly.samples.emplace_back(p, count(PrimeField(p)));
    } catch (const MathError& e) {
      if (e.code() != Errc::BadReduction) throw;
    }
  }
  const auto& pts = poly.samples;
  for (std::size_t d = 0; d + 1 < pts.size() && static_cast<std::int64_t>(d) <= degree_bound; ++d) {
    // Lagrange through the first d+1 points
    std::vector<mpq_class> c(d + 1, 0);
    for (std::size_t a = 0; a <= d; ++a) {
      std::vector<mpq_class> basis{1};
      mpq_class denom = 1;
      for (std::size_t b = 0; b <= d; ++b) {
        if (b == a) continue;
        std::vector<mpq_class> next_basis(basis.size() + 1, 0);
        for (std::size_t t = 0; t < basis.size(); ++t) {
          next_basis[t + 1] += basis[t];
          next_basis[t] -= basis[t] * static_cast<long>(pts[b].first);
        }
        basis = next_basis;
        denom *= static_cast<long>(pts[a].first) - static_cast<long>(pts[b].first);
      }
      for (std::size_t t = 0; t <= d; ++t) c[t] += basis[t] * mpq_class(pts[a].second) / denom;
    }
    bool ok = true;
    for (std::size_t a = d + 1; a < pts.size() && ok; ++a) {
      mpq_class v = 0;
      for (std::size_t t = c.size(); t-- > 0;) v = v * static_cast<long>(pts[a].first) + c[t];
      if (v != mpq_class(pts[a].second)) ok = false;
    }
    if (!ok) continue;
    for (auto& x : c) {
      x.canonicalize();
      if (x.get_den() != 1)
        throw MathError(Errc::InterpolationInconsistent, "counts fit a polynomial with non-integral coefficients");
      poly.coeffs.push_back(x.get_num());
    }
    return poly;
  }
  std::ostringstream os;
  for (const auto& [q, v] : pts) os << " (" << q << ", " << v << ")";
  throw MathError(Errc::InterpolationInconsistent,
                  "no polynomial of degree <= " + std::to_string(degree_bound) + " fits the counts" + os.str());
}

Family integral_family(const Module<Rational>& m) {
  struct Print {
    std::vector<std::size_t> arrow_ranks;
    std::size_t end = 0;
    std::vector<std::size_t> hom_in, hom_out;
  };
  auto take = [](const auto& x) {
    using K = std::decay_t<decltype(x.field)>;
    Print p;
    for (const auto& a : x.arrows) p.arrow_ranks.push_back(rank(a));
    p.end = hom_dim(x, x);
    for (int i = 0; i < x.n(); ++i) {
      const auto e = generalized_simple(x.field, x.datum, x.omega, i, x.algebra);
      p.hom_in.push_back(hom_dim(Module<K>(e), x));
      p.hom_out.push_back(hom_dim(x, Module<K>(e)));
    }
    return p;
  };
  auto base = std::make_shared<Module<Rational>>(m);
  auto ref = std::make_shared<Print>(take(m));
  return [base, ref, take](const PrimeField& f) {
    auto red = reduce_mod(*base, f);
    auto j = normalize_jordan(red);
    if (!j) throw MathError(Errc::BadReduction, "reduction mod " + std::to_string(f.prime()) + " is not locally free");
    const auto p = take(*j);
    if (p.arrow_ranks != ref->arrow_ranks || p.end != ref->end || p.hom_in != ref->hom_in || p.hom_out != ref->hom_out)
      throw MathError(Errc::BadReduction, "module invariants change mod " + std::to_string(f.prime()));
    return *j;
  };
}

std::int64_t grassmannian_degree_bound(const CartanDatum& d, const IntVec& r, const IntVec& e) {
  std::int64_t b = 0;
  for (int i = 0; i < d.n; ++i) b += d.D[i] * e[i] * (r[i] - e[i]);
  return b;
}

CountingPolynomial grlf_polynomial(const Family& fam, const IntVec& rank, const IntVec& e,
                                   const std::vector<std::uint32_t>& primes) {
  const auto d = datum_of(fam, primes);
  return interpolate_counts([&](const PrimeField& f) { return count_locally_free_submodules(fam(f), e); },
                            grassmannian_degree_bound(d, rank, e), primes);
}

std::int64_t euler_char_grlf(const Family& fam, const IntVec& rank, const IntVec& e,
                             const std::vector<std::uint32_t>& primes) {
  return grlf_polynomial(fam, rank, e, primes).euler();
}

FPolynomial f_polynomial(const Family& fam, const IntVec& rank, const std::vector<std::uint32_t>& primes) {
  FPolynomial out;
  IntVec e(rank.size(), 0);
  while (true) {
    const auto chi = euler_char_grlf(fam, rank, e, primes);
    if (chi != 0) out[e] = chi;
    std::size_t i = 0;
    while (i < e.size() && ++e[i] > rank[i]) e[i++] = 0;
    if (i == e.size()) break;
  }
  return out;
}

IntVec g_vector(const CartanDatum& d, const Orientation& o, const IntVec& rank) {
  const auto R = forms(d, o).R;
  IntVec g(d.n, 0);
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j) g[i] -= R(i, j) * rank[j];
  return g;
}

CountingPolynomial flag_polynomial(const Family& fam, const IntVec& rank, const std::vector<int>& word,
                                   const std::vector<std::uint32_t>& primes) {
  IntVec content(rank.size(), 0);
  for (int j : word) ++content[j];
  CountingPolynomial zero;
  zero.coeffs = {};
  if (content != rank) return zero;
  const auto d = datum_of(fam, primes);
  std::int64_t bound = 0;
  IntVec left = rank;
  for (int j : word) {
    bound += d.D[j] * (left[j] - 1);
    --left[j];
  }
  return interpolate_counts([&](const PrimeField& f) { return count_E_flags(fam(f), word); }, bound, primes);
}

std::int64_t flag_euler(const Family& fam, const IntVec& rank, const std::vector<int>& word,
                        const std::vector<std::uint32_t>& primes) {
  return flag_polynomial(fam, rank, word, primes).euler();
}

mpq_class theta_eval(const WordCombination& combo, const Family& fam, const IntVec& rank,
                     const std::vector<std::uint32_t>& primes) {
  mpq_class v = 0;
  for (const auto& [coeff, word] : combo)
    if (coeff != 0) v += coeff * flag_euler(fam, rank, word, primes);
  return v;
}

WordCombination serre_combination(const CartanDatum& d, int i, int j) {
  const auto n = 1 - d.C(i, j);
  WordCombination out;
  mpz_class binom = 1;
  for (std::int64_t k = 0; k <= n; ++k) {
    std::vector<int> w(static_cast<std::size_t>(n - k), i);
    w.push_back(j);
    w.insert(w.end(), static_cast<std::size_t>(k), i);
    out.emplace_back(mpq_class(k % 2 == 0 ? binom : -binom), w);
    binom = binom * (n - k) / (k + 1);
  }
  return out;
}

mpz_class count_iso_flags(const FpModule& m, const std::vector<FpModule>& factors, std::size_t budget) {
  const auto j = normalize_jordan(m);
  if (!j) return 0;
  std::vector<IntVec> betas;
  std::vector<std::optional<FpModule>> targets;
  for (const auto& t : factors) {
    betas.push_back(rank_of(t));
    targets.emplace_back(t);
  }
  IsoFlagSearch search(betas, targets, budget, false);
  return search.run(*j, 0);
}

mpq_class pbw_pairing(const CartanDatum& d, const Orientation& o, const std::vector<std::int64_t>& m,
                      const std::vector<std::int64_t>& n, const std::vector<std::uint32_t>& primes) {
  const auto betas = beta_gamma_sequences(d, *admissible_words(d, o).w0).beta;
  const std::size_t r = betas.size();
  if (m.size() != r || n.size() != r) throw MathError(Errc::ShapeMismatch, "multiplicity vectors need one entry per root");
  IntVec wm(d.n, 0), wn(d.n, 0);
  for (std::size_t k = 0; k < r; ++k)
    for (int i = 0; i < d.n; ++i) {
      wm[i] += m[k] * betas[k][i];
      wn[i] += n[k] * betas[k][i];
    }
  if (wm != wn) return 0;
  std::map<std::uint32_t, RootModuleTable<PrimeField>> tables;
  auto table = [&](const PrimeField& f) -> const RootModuleTable<PrimeField>& {
    auto it = tables.find(f.prime());
    if (it == tables.end()) it = tables.emplace(f.prime(), all_root_modules(f, d, o)).first;
    return it->second;
  };
  std::int64_t bound = 0;
  IntVec left = wm;
  for (std::size_t k = r; k-- > 0;)
    for (std::int64_t c = 0; c < n[k]; ++c) {
      bound += grassmannian_degree_bound(d, left, betas[k]);
      for (int i = 0; i < d.n; ++i) left[i] -= betas[k][i];
    }
  const auto poly = interpolate_counts(
      [&](const PrimeField& f) {
        const auto& t = table(f);
        FpModule x = zero_module(f, d, o);
        for (std::size_t k = 0; k < r; ++k)
          for (std::int64_t c = 0; c < m[k]; ++c) x = direct_sum(x, t.modules[k]);
        std::vector<FpModule> factors;
        for (std::size_t k = r; k-- > 0;)
          for (std::int64_t c = 0; c < n[k]; ++c) factors.push_back(t.modules[k]);
        return count_iso_flags(x, factors);
      },
      bound, primes);
  mpz_class norm = 1;
  for (auto x : n) norm *= factorial(x);
  mpq_class v(poly.at(1), norm);
  v.canonicalize();
  return v;
}

std::vector<std::pair<std::uint32_t, bool>> filtration_exists(const Family& fam, const std::vector<FlagFactor>& factors,
                                                              const std::vector<std::uint32_t>& primes) {
  std::vector<std::pair<std::uint32_t, bool>> out;
  for (auto p : primes) {
    const PrimeField f(p);
    try {
      const auto x = normalize_jordan(fam(f));
      if (!x) throw MathError(Errc::NotLocallyFree, "filtration_exists needs a locally free module");
      std::vector<IntVec> betas;
      std::vector<std::optional<FpModule>> targets;
      for (const auto& fac : factors) {
        betas.push_back(fac.beta);
        targets.emplace_back();
        if (fac.iso) {
          targets.back() = fac.iso(f);
          if (rank_of(*targets.back()) != fac.beta) throw MathError(Errc::ShapeMismatch, "factor rank mismatch");
        }
      }
      IsoFlagSearch search(betas, targets, kCountBudget, true);
      out.emplace_back(p, search.run(*x, 0) > 0);
    } catch (const MathError& e) {
      if (e.code() != Errc::BadReduction) throw;
    }
  }
  return out;
}

}  // namespace cartanrep
