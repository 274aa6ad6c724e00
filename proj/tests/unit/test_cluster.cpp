#include <gtest/gtest.h>

#include "cartanrep/cluster.hpp"
#include "oracles.hpp"

using namespace cartanrep;

namespace {

std::int64_t det(const std::vector<IntVec>& cols) {
  const auto n = cols.size();
  if (n == 1) return cols[0][0];
  std::int64_t s = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<IntVec> minor;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      IntVec c;
      for (std::size_t i = 1; i < n; ++i) c.push_back(cols[k][i]);
      minor.push_back(c);
    }
    s += (j % 2 ? -1 : 1) * cols[j][0] * det(minor);
  }
  return s;
}

}  // namespace

TEST(Cluster, InitialExchangeMatrix) {
  const auto s = initial_seed(data::B2(), {{0, 1}});
  EXPECT_EQ(std::abs(s.B(0, 1)), 1);
  EXPECT_EQ(std::abs(s.B(1, 0)), 2);
  EXPECT_LT(s.B(0, 1) * s.B(1, 0), 0);
  const auto g = initial_seed(data::G2(), {{0, 1}});
  EXPECT_EQ(std::abs(g.B(0, 1) * g.B(1, 0)), 3);
  EXPECT_EQ(initial_seed(data::A1(), {}).B, IntMatrix(1, 1));
  EXPECT_THROW(initial_seed(validate_datum({{2, -2}, {-2, 2}}, {1, 1}), {{0, 1}}), MathError);
}

TEST(Cluster, A1Mutation) {
  const auto s = mutate(initial_seed(data::A1(), {}), 0);
  Polynomial want;
  want[IntVec{0}] = 1;
  want[IntVec{1}] = 1;
  EXPECT_EQ(s.F[0], want);
  EXPECT_EQ(s.G[0], IntVec{-1});
}

TEST(Cluster, MutationIsInvolutive) {
  for (const auto& d : {data::A3(), data::B3(), data::G2()}) {
    auto s = initial_seed(d, default_orientation(d));
    for (int step = 0; step < 7; ++step) {
      const int k = (step * 5 + 1) % d.n;
      EXPECT_EQ(mutate(mutate(s, k), k), s);
      s = mutate(s, k);
      for (int i = 0; i < d.n; ++i)
        for (int j = 0; j < d.n; ++j) EXPECT_EQ(d.D[i] * s.B(i, j), -d.D[j] * s.B(j, i));
      EXPECT_EQ(std::abs(det(s.G)), 1);
      for (const auto& f : s.F) EXPECT_EQ(f.at(IntVec(d.n, 0)), 1);
    }
  }
}

TEST(Cluster, FiniteTypeVariableCounts) {
  for (const auto& [name, d, count, h] : oracle::dynkin_up_to_rank4()) {
    if (std::string(name) == "F4" || std::string(name) == "B4" || std::string(name) == "C4") continue;
    SCOPED_TRACE(name);
    const auto vars = enumerate_variables(initial_seed(d, default_orientation(d)));
    EXPECT_EQ(vars.size(), count + static_cast<std::size_t>(d.n));
  }
}

TEST(Cluster, MatchReportCountsMisses) {
  const auto d = data::A2();
  const auto vars = enumerate_variables(initial_seed(d, {{0, 1}}));
  std::vector<ClusterVariable> side(vars.begin(), vars.end());
  side.push_back({Polynomial{{IntVec{0, 0}, 3}}, IntVec{9, 9}});
  const auto r = match_report(side, vars);
  EXPECT_EQ(r.total, side.size());
  EXPECT_EQ(r.matched, vars.size());
  EXPECT_EQ(r.misses.size(), 1u);
  EXPECT_FALSE(r.ok());
}
