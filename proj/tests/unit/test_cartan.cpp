#include <gtest/gtest.h>

#include <set>

#include "cartanrep/cartan.hpp"
#include "oracles.hpp"

using namespace cartanrep;

namespace {

IntMatrix power(const IntMatrix& m, int k) {
  IntMatrix r = IntMatrix::identity(m.rows());
  for (int t = 0; t < k; ++t) r = r * m;
  return r;
}

}  // namespace

TEST(Datum, RejectsBadInput) {
  auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const MathError& e) {
      return e.code();
    }
    return Errc::InternalMismatch;
  };
  EXPECT_EQ(code([] { validate_datum({{2, 1}, {-1, 2}}, {1, 1}); }), Errc::NotCartan);
  EXPECT_EQ(code([] { validate_datum({{2, 0}, {-1, 2}}, {1, 1}); }), Errc::NotSymmetrizer);
  EXPECT_EQ(code([] { validate_datum({{2, -1}, {-2, 2}}, {1, 1}); }), Errc::NotSymmetrizer);
  EXPECT_EQ(code([] { validate_datum({{2, -1}, {-2, 2}}, {-2, -1}); }), Errc::NonPositiveSymmetrizer);
  const auto a3 = data::A3();
  EXPECT_EQ(code([&] { validate_orientation(a3, {{0, 1}, {1, 0}, {1, 2}}); }), Errc::InvalidOrientation);
  EXPECT_EQ(code([&] { validate_orientation(a3, {{0, 1}}); }), Errc::InvalidOrientation);
}

TEST(Datum, GcdMatrix) {
  const auto g2 = data::G2();
  EXPECT_EQ(g2.g(0, 1), 1);
  const auto d = validate_datum({{2, -2}, {-2, 2}}, {1, 1});
  EXPECT_EQ(d.g(0, 1), 2);
}

TEST(Roots, CountsMatchClassification) {
  for (const auto& [name, d, count, h] : oracle::dynkin_up_to_rank4()) {
    SCOPED_TRACE(name);
    EXPECT_EQ(positive_roots(d).size(), count);
    const auto a = positive_roots_by_orbit(d);
    const auto b = positive_roots(d);
    EXPECT_EQ(std::set<RootVector>(a.begin(), a.end()), std::set<RootVector>(b.begin(), b.end()));
  }
}

TEST(Roots, B2AndG2Explicit) {
  const auto b2 = positive_roots(data::B2());
  EXPECT_EQ(std::set<RootVector>(b2.begin(), b2.end()), (std::set<RootVector>{{1, 0}, {0, 1}, {1, 1}, {1, 2}}));
  const auto g2 = positive_roots(data::G2());
  EXPECT_EQ(std::set<RootVector>(g2.begin(), g2.end()),
            (std::set<RootVector>{{1, 0}, {0, 1}, {1, 1}, {1, 2}, {1, 3}, {2, 3}}));
}

TEST(Roots, AffineA1IsInfinite) {
  const auto d = validate_datum({{2, -2}, {-2, 2}}, {1, 1});
  EXPECT_FALSE(is_dynkin(d).dynkin);
  EXPECT_THROW(positive_roots(d), MathError);
  const auto orbit = weyl_orbit(d, {1, 0}, 6);
  EXPECT_TRUE(orbit.truncated);
}

TEST(Weyl, ReflectionsPreserveSymmetricForm) {
  for (const auto& [name, d, count, h] : oracle::dynkin_up_to_rank4()) {
    const auto roots = positive_roots(d);
    for (int i = 0; i < d.n; ++i)
      for (const auto& a : roots)
        for (const auto& b : roots)
          EXPECT_EQ(sym_form(d, reflect_root(d, i, a), reflect_root(d, i, b)), sym_form(d, a, b)) << name;
  }
}

TEST(Weyl, CoxeterElementHasCoxeterNumberOrder) {
  for (const auto& [name, d, count, h] : oracle::dynkin_up_to_rank4()) {
    SCOPED_TRACE(name);
    const auto cox = forms(d, default_orientation(d)).coxeter;
    EXPECT_EQ(power(cox, h), IntMatrix::identity(d.n));
    for (int k = 1; k < h; ++k) EXPECT_NE(power(cox, k), IntMatrix::identity(d.n));
  }
}

TEST(Forms, CoxeterMatchesRInverse) {
  for (const auto& [name, d, count, h] : oracle::dynkin_up_to_rank4())
    for (std::int64_t s : {1, 2}) {
      const auto ds = scale_symmetrizer(d, s);
      for (const auto& o : all_orientations(ds)) {
        const auto want = oracle::coxeter_from_R(ds, o);
        const auto got = forms(ds, o).coxeter;
        for (int i = 0; i < d.n; ++i)
          for (int j = 0; j < d.n; ++j) EXPECT_EQ(mpq_class(got(i, j)), want[i][j]) << name;
      }
    }
}

TEST(Forms, B2Example) {
  const auto d = data::B2();
  const auto f = forms(d, {{0, 1}});
  EXPECT_EQ(f.gram_sym, IntMatrix::from_rows({{4, -2}, {-2, 2}}));
  EXPECT_EQ(f.coxeter, IntMatrix::from_rows({{-1, 1}, {-2, 1}}));
}

TEST(Forms, EulerSymmetrizes) {
  const auto d = data::G2();
  for (const auto& o : all_orientations(d))
    for (std::int64_t a0 = 0; a0 < 3; ++a0)
      for (std::int64_t a1 = 0; a1 < 3; ++a1)
        for (std::int64_t b0 = 0; b0 < 3; ++b0)
          for (std::int64_t b1 = 0; b1 < 3; ++b1) {
            const IntVec a{a0, a1}, b{b0, b1};
            EXPECT_EQ(euler_form(d, o, a, b) + euler_form(d, o, b, a), sym_form(d, a, b));
          }
}

TEST(Orientation, CountAndReflection) {
  EXPECT_EQ(all_orientations(data::A3()).size(), 4u);
  EXPECT_EQ(all_orientations(oracle::D4()).size(), 8u);
  const auto d = data::A3();
  const Orientation o{{0, 1}, {1, 2}};
  EXPECT_TRUE(is_sink(o, 0));
  EXPECT_TRUE(is_source(o, 2));
  EXPECT_EQ(reflect_orientation(d, o, 0), (Orientation{{1, 0}, {1, 2}}));
  EXPECT_THROW(reflect_orientation(d, o, 1), MathError);
}

TEST(Words, AdmissibleAndReduced) {
  for (const auto& [name, d, count, h] : oracle::dynkin_up_to_rank4()) {
    SCOPED_TRACE(name);
    for (const auto& o : all_orientations(d)) {
      const auto w = admissible_words(d, o);
      ASSERT_TRUE(w.w0.has_value());
      EXPECT_EQ(w.w0->letters.size(), count);
      EXPECT_EQ(std::set<int>(w.coxeter.letters.begin(), w.coxeter.letters.end()).size(),
                static_cast<std::size_t>(d.n));
      Orientation cur = o;
      for (int k : w.w0->letters) {
        EXPECT_TRUE(is_sink(cur, k));
        cur = reflect_orientation(d, cur, k);
      }
      const auto bg = beta_gamma_sequences(d, *w.w0);
      const auto roots = positive_roots(d);
      EXPECT_EQ(std::set<RootVector>(bg.beta.begin(), bg.beta.end()), std::set<RootVector>(roots.begin(), roots.end()));
    }
  }
}

TEST(Words, NonReducedRejected) {
  EXPECT_THROW(beta_gamma_sequences(data::B2(), WeylWord{{0, 0}, false}), MathError);
}

TEST(Kostant, B2BruteForce) {
  const auto d = data::B2();
  for (std::int64_t a = 0; a <= 3; ++a)
    for (std::int64_t b = 0; b <= 4; ++b) {
      std::int64_t n = 0;
      for (std::int64_t m0 = 0; m0 <= a; ++m0)
        for (std::int64_t m2 = 0; m0 + m2 <= a; ++m2)
          for (std::int64_t m3 = 0; m0 + m2 + m3 <= a; ++m3)
            if (m0 + m2 + m3 == a && b - m2 - 2 * m3 >= 0) ++n;
      EXPECT_EQ(kostant_count(d, {a, b}), n) << a << "," << b;
    }
}
