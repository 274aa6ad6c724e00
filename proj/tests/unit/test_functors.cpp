#include <gtest/gtest.h>

#include <set>

#include "cartanrep/functors.hpp"
#include "oracles.hpp"

using namespace cartanrep;

namespace {

IntVec hand_reflect(const CartanDatum& d, int k, IntVec r) {
  std::int64_t s = 0;
  for (int j = 0; j < d.n; ++j) s += d.C(k, j) * r[j];
  r[k] -= s;
  return r;
}

bool has_summand(const Module<Rational>& m, const Module<Rational>& e) {
  // E_k is rigid with End = H_k, so it is a summand iff some f: E->M, g: M->E compose to a unit.
  for (const auto& f : hom_basis(e, m))
    for (const auto& g : hom_basis(m, e)) {
      const auto k = e.dims.size();
      for (std::size_t i = 0; i < k; ++i)
        if (e.dims[i] > 0 && rank(g[i] * f[i]) == e.dims[i]) return true;
    }
  return false;
}

}  // namespace

TEST(Reflection, RankFollowsSimpleReflection) {
  const Rational q;
  for (const auto& d : {data::B2(), data::G2()}) {
    const Orientation o{{0, 1}};  // vertex 0 is a sink
    for (std::uint64_t s = 0; s < 6; ++s) {
      const IntVec r{static_cast<std::int64_t>(s % 2), 1 + static_cast<std::int64_t>(s % 3)};
      const auto m = random_locally_free(q, d, o, r, s);
      if (has_summand(m, generalized_simple(q, d, o, 0))) continue;
      const auto fm = reflect_plus(m, 0);
      EXPECT_TRUE(check_relations(fm).empty());
      EXPECT_EQ(is_locally_free(fm), hand_reflect(d, 0, r));
      EXPECT_EQ(fm.omega, reflect_orientation(d, o, 0));
      const auto back = reflect_minus(fm, 0);
      EXPECT_TRUE(is_isomorphic(back, m));
    }
  }
}

TEST(Reflection, KillsSimpleAtSink) {
  const Rational q;
  const auto d = data::B2();
  const Orientation o{{0, 1}};
  EXPECT_EQ(reflect_plus(generalized_simple(q, d, o, 0), 0).total_dim(), 0u);
  EXPECT_THROW(reflect_plus(generalized_simple(q, d, o, 1), 1), MathError);
}

TEST(RootModules, GabrielBijection) {
  const Rational q;
  for (const auto& d : {data::B2(), data::G2(), data::B3(), data::C3()}) {
    for (const auto& o : all_orientations(d)) {
      const auto t = all_root_modules(q, d, o);
      const auto roots = positive_roots(d);
      ASSERT_EQ(t.modules.size(), roots.size());
      std::set<IntVec> ranks;
      for (std::size_t k = 0; k < t.modules.size(); ++k) {
        const auto& m = t.modules[k];
        const auto r = is_locally_free(m);
        ASSERT_TRUE(r.has_value());
        EXPECT_EQ(*r, t.beta[k]);
        ranks.insert(*r);
        EXPECT_EQ(ext1_dim(m, m), 0u);
        EXPECT_EQ(static_cast<std::int64_t>(hom_dim(m, m)), euler_form(d, o, *r, *r));
        EXPECT_TRUE(is_indecomposable(m));
      }
      EXPECT_EQ(ranks, std::set<IntVec>(roots.begin(), roots.end()));
    }
  }
}

TEST(RootModules, HomExtTriangle) {
  const Rational q;
  for (const auto& d : {data::B2(), data::G2(), data::B3()}) {
    const auto o = default_orientation(d);
    const auto t = all_root_modules(q, d, o);
    const auto tab = homext_table(t);
    for (std::size_t i = 0; i < t.beta.size(); ++i)
      for (std::size_t j = 0; j < t.beta.size(); ++j) {
        const auto e = euler_form(d, o, t.beta[i], t.beta[j]);
        EXPECT_EQ(tab[i][j].hom - tab[i][j].ext, e);
        if (i <= j) EXPECT_EQ(tab[i][j].ext, 0) << i << "," << j;
        else EXPECT_EQ(tab[i][j].hom, 0) << i << "," << j;
      }
  }
}

TEST(Tau, ProjectivesVanishAndRanksRotate) {
  const Rational q;
  for (const auto& d : {data::B2(), data::G2()}) {
    const auto o = default_orientation(d);
    const auto cox = oracle::coxeter_from_R(d, o);
    for (int i = 0; i < d.n; ++i) {
      EXPECT_EQ(tau(projective_module(q, d, o, i)).total_dim(), 0u);
      EXPECT_EQ(tau_minus(injective_module(q, d, o, i)).total_dim(), 0u);
    }
    std::set<IntVec> proj;
    for (int i = 0; i < d.n; ++i) proj.insert(*is_locally_free(projective_module(q, d, o, i)));
    const auto t = all_root_modules(q, d, o);
    for (std::size_t k = 0; k < t.modules.size(); ++k) {
      if (proj.count(t.beta[k])) continue;
      const auto r = is_locally_free(tau(t.modules[k]));
      ASSERT_TRUE(r.has_value());
      for (int i = 0; i < d.n; ++i) {
        mpq_class s = 0;
        for (int j = 0; j < d.n; ++j) s += cox[i][j] * t.beta[k][j];
        EXPECT_EQ(mpq_class((*r)[i]), s);
      }
      EXPECT_TRUE(is_isomorphic(tau_minus(tau(t.modules[k])), t.modules[k]));
    }
  }
}
