#include <gtest/gtest.h>

#include "cartanrep/grassmann.hpp"
#include "oracles.hpp"

using namespace cartanrep;

namespace {

Polynomial poly(std::initializer_list<std::pair<IntVec, long>> terms) {
  Polynomial p;
  for (const auto& [e, c] : terms) p[e] = c;
  return p;
}

}  // namespace

TEST(Grassmann, GaussianBinomialCountsSubspaces) {
  for (std::uint32_t p : {2u, 3u})
    for (std::size_t n = 0; n <= 4; ++n) {
      std::vector<std::size_t> by_dim(n + 1, 0);
      for (const auto& s : oracle::all_subspaces(n, p)) ++by_dim[s.size()];
      for (std::size_t k = 0; k <= n; ++k) EXPECT_EQ(gaussian_binomial(n, k, p), by_dim[k]) << n << " " << k;
    }
}

TEST(Grassmann, FreeSubmodulesOfFreeModule) {
  // free rank-e submodules of H^r, H = F_p[eps]/eps^c: [r,e]_p p^{(c-1)e(r-e)}
  for (std::uint32_t p : {2u, 3u})
    for (int c : {1, 2, 3})
      for (std::size_t r = 1; r <= 2; ++r)
        for (std::size_t e = 0; e <= r; ++e) {
          std::size_t n = 0;
          for_each_free_submodule(PrimeField(p), c, r, e, [&](const Matrix<PrimeField>& u) {
            EXPECT_EQ(u.rows(), c * r);
            EXPECT_EQ(rank(u), c * e);
            ++n;
          });
          mpz_class want = gaussian_binomial(r, e, p);
          for (std::size_t t = 0; t < (c - 1) * e * (r - e); ++t) want *= p;
          EXPECT_EQ(mpz_class(static_cast<unsigned long>(n)), want) << p << " " << c << " " << r << " " << e;
        }
}

TEST(Grassmann, LocallyFreeCountAgainstBruteForce) {
  struct Case {
    CartanDatum d;
    IntVec r;
    std::uint32_t p;
  };
  const std::vector<Case> cases{{data::B2(), {1, 1}, 3}, {data::B2(), {1, 1}, 5}, {data::G2(), {1, 1}, 2},
                                {data::B2(), {2, 1}, 2}, {data::B2(), {1, 2}, 2}, {data::A3(), {1, 1, 1}, 3}};
  for (const auto& [d, r, p] : cases) {
    const auto o = default_orientation(d);
    for (std::uint64_t s = 0; s < 3; ++s) {
      const auto m = random_locally_free(PrimeField(p), d, o, r, s);
      IntVec e(d.n, 0);
      while (true) {
        EXPECT_EQ(count_locally_free_submodules(m, e), oracle::brute_locally_free_count(m, e));
        std::size_t i = 0;
        while (i < e.size() && ++e[i] > r[i]) e[i++] = 0;
        if (i == e.size()) break;
      }
    }
  }
}

TEST(Grassmann, VisitAgreesWithCount) {
  const PrimeField f(3);
  const auto d = data::B2();
  const auto m = random_locally_free(f, d, default_orientation(d), IntVec{1, 2}, 4);
  const IntVec e{1, 1};
  std::size_t n = 0;
  for_each_locally_free_submodule(m, e, [&](const std::vector<Matrix<PrimeField>>& u) {
    EXPECT_TRUE(is_submodule(m, u));
    ++n;
    return true;
  });
  EXPECT_EQ(count_locally_free_submodules(m, e), n);
}

TEST(Grassmann, EFlagsOfSemisimple) {
  const auto d = data::B2();
  const auto o = default_orientation(d);
  for (std::uint32_t p : {5u, 7u}) {
    const PrimeField f(p);
    const auto e1 = generalized_simple(f, d, o, 0);
    const auto m = direct_sum(e1, e1);
    EXPECT_EQ(count_E_flags(m, {0, 0}), mpz_class(static_cast<unsigned long>(p) * p + p));
    const auto e2 = generalized_simple(f, d, o, 1);
    const auto s = direct_sum(e1, e2);
    EXPECT_EQ(count_E_flags(s, {0, 1}), 1);
    EXPECT_EQ(count_E_flags(s, {1, 0}), 1);
    EXPECT_EQ(count_E_flags(s, {0, 0}), 0);
  }
}

TEST(Grassmann, InterpolationRecoversPolynomial) {
  const auto poly = interpolate_counts(
      [](const PrimeField& f) -> mpz_class {
        const mpz_class q = f.prime();
        return q * q * q + 2 * q + 1;
      },
      4);
  EXPECT_EQ(poly.coeffs, (std::vector<mpz_class>{1, 2, 0, 1}));
  EXPECT_EQ(poly.euler(), 4);
  EXPECT_THROW(interpolate_counts([](const PrimeField& f) { return mpz_class(f.prime() % 4); }, 2), MathError);
}

TEST(Grassmann, A2FPolynomials) {
  // quiver 2 -> 1: S_1, P_2 = (1,1), S_2
  const auto d = data::A2();
  const Orientation o{{0, 1}};
  const auto t = all_root_modules(Rational(), d, o);
  std::map<IntVec, Polynomial> want{{{1, 0}, poly({{{0, 0}, 1}, {{1, 0}, 1}})},
                                    {{0, 1}, poly({{{0, 0}, 1}, {{0, 1}, 1}})},
                                    {{1, 1}, poly({{{0, 0}, 1}, {{1, 0}, 1}, {{1, 1}, 1}})}};
  for (std::size_t k = 0; k < t.modules.size(); ++k)
    EXPECT_EQ(f_polynomial(integral_family(t.modules[k]), t.beta[k]), want.at(t.beta[k]));
}

TEST(Grassmann, GrassmannianOfSemisimple) {
  const auto d = data::B2();
  const auto o = default_orientation(d);
  const Rational q;
  const auto e1 = generalized_simple(q, d, o, 0);
  const auto fam = integral_family(direct_sum(e1, e1));
  const auto g = grlf_polynomial(fam, {2, 0}, {1, 0});
  EXPECT_EQ(g.coeffs, (std::vector<mpz_class>{0, 1, 1}));
  EXPECT_EQ(euler_char_grlf(fam, {2, 0}, {1, 0}), 2);
}

TEST(Grassmann, SymmetrizerIndependentFlagEuler) {
  const Rational q;
  const auto d = data::B2();
  const auto d2 = scale_symmetrizer(d, 2);
  const auto o = default_orientation(d);
  const auto t = all_root_modules(q, d, o);
  const auto t2 = all_root_modules(q, d2, o);
  for (std::size_t k = 0; k < t.beta.size(); ++k) {
    const auto& b = t.beta[k];
    std::vector<int> word;
    for (int i = 0; i < d.n; ++i)
      for (std::int64_t x = 0; x < b[i]; ++x) word.push_back(i);
    do {
      EXPECT_EQ(flag_euler(integral_family(t.modules[k]), b, word),
                flag_euler(integral_family(t2.modules[k]), t2.beta[k], word));
    } while (std::next_permutation(word.begin(), word.end()));
  }
}

TEST(Grassmann, SerreCombinationShape) {
  const auto c = serre_combination(data::B2(), 0, 1);
  ASSERT_EQ(c.size(), 3u);
  std::map<std::vector<int>, mpq_class> got;
  for (const auto& [coef, word] : c) got[word] = coef;
  EXPECT_EQ(got.at({0, 0, 1}), 1);
  EXPECT_EQ(got.at({0, 1, 0}), -2);
  EXPECT_EQ(got.at({1, 0, 0}), 1);
  EXPECT_EQ(serre_combination(data::G2(), 1, 0).size(), 5u);
}

TEST(Grassmann, SerreVanishesOnRandomModules) {
  const Rational q;
  const auto d = data::B2();
  const auto o = default_orientation(d);
  const auto combo = serre_combination(d, 0, 1);
  for (std::uint64_t s = 0; s < 5; ++s)
    EXPECT_EQ(theta_eval(combo, integral_family(random_locally_free(q, d, o, IntVec{2, 1}, s)), {2, 1}), 0);
}

TEST(Grassmann, DualPbwSmallWeights) {
  const auto d = data::B2();
  const auto o = default_orientation(d);
  const std::vector<std::vector<std::int64_t>> ms{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1},
                                                   {1, 0, 0, 1}, {2, 0, 0, 0}};
  for (const auto& m : ms)
    for (const auto& n : ms) EXPECT_EQ(pbw_pairing(d, o, m, n), m == n ? 1 : 0);
}

TEST(Grassmann, BadReductionSkipped) {
  const Rational q;
  const auto d = data::A2();
  const Orientation o{{0, 1}};
  auto m = jordan_skeleton(q, d, o, IntVec{1, 1});
  m.arrows[0](0, 0) = 5;
  const auto fam = integral_family(m);
  EXPECT_THROW(fam(PrimeField(5)), MathError);
  EXPECT_NO_THROW(fam(PrimeField(7)));
  const auto g = grlf_polynomial(fam, {1, 1}, {1, 0});
  EXPECT_EQ(g.euler(), 1);
  for (const auto& [p, n] : g.samples) EXPECT_NE(p, 5u);
}
