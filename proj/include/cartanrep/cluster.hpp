#pragma once

#include <set>
#include <string>
#include <vector>

#include "cartanrep/cartan.hpp"
#include "cartanrep/polynomial.hpp"

namespace cartanrep {

struct ClusterSeed {
  IntMatrix B;     // exchange matrix
  IntMatrix Cmat;  // coefficient rows (principal coefficients start at the identity)
  IntMatrix B0;    // initial exchange matrix
  std::vector<Polynomial> F;
  std::vector<IntVec> G;
  int sign = 1;  // +1: b_ij = c_ij for (i,j) in Omega

  bool operator==(const ClusterSeed& o) const { return B == o.B && Cmat == o.Cmat && F == o.F && G == o.G; }
};

struct ClusterVariable {
  Polynomial F;
  IntVec g;
  auto operator<=>(const ClusterVariable&) const = default;
};

ClusterSeed initial_seed(const CartanDatum& d, const Orientation& o, int sign = 1);

ClusterSeed mutate(const ClusterSeed& s, int k);

std::set<ClusterVariable> enumerate_variables(const ClusterSeed& s, std::size_t seed_bound = 100000);

struct MatchReport {
  std::size_t matched = 0;
  std::size_t total = 0;
  int sign = 1;
  std::vector<std::string> misses;
  bool ok() const { return matched == total; }
};

MatchReport match_report(const std::vector<ClusterVariable>& module_side, const std::set<ClusterVariable>& cluster_side);

// Tries the given B-matrix sign first and the opposite sign once.
MatchReport calibrated_match(const CartanDatum& d, const Orientation& o, const std::vector<ClusterVariable>& module_side);

}  // namespace cartanrep
