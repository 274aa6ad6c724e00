#include "cartanrep/cluster.hpp"

#include <deque>
#include <sstream>

namespace cartanrep {

namespace {

std::int64_t pos(std::int64_t x) { return x > 0 ? x : 0; }

std::string seed_key(const ClusterSeed& s) {
  std::ostringstream os;
  os << s.B.str() << '|' << s.Cmat.str() << '|';
  for (const auto& f : s.F) os << poly_str(f) << ';';
  for (const auto& g : s.G) {
    for (auto x : g) os << x << ',';
    os << ';';
  }
  return os.str();
}

std::string describe(const ClusterVariable& v) {
  std::ostringstream os;
  os << "F = " << poly_str(v.F) << ", g = (";
  for (std::size_t i = 0; i < v.g.size(); ++i) os << (i ? "," : "") << v.g[i];
  os << ")";
  return os.str();
}

}  // namespace

ClusterSeed initial_seed(const CartanDatum& d, const Orientation& o, int sign) {
  if (!is_dynkin(d).dynkin) throw MathError(Errc::NotDynkin, "cluster oracle needs a Dynkin datum");
  validate_orientation(d, o);
  const int n = d.n;
  ClusterSeed s;
  s.sign = sign;
  s.B = IntMatrix(n, n);
  for (const auto& [i, j] : o) {
    s.B(i, j) = sign * d.C(i, j);
    s.B(j, i) = -sign * d.C(j, i);
  }
  s.B0 = s.B;
  s.Cmat = IntMatrix::identity(n);
  for (int i = 0; i < n; ++i) {
    s.F.push_back(poly_one(n));
    IntVec g(n, 0);
    g[i] = 1;
    s.G.push_back(g);
  }
  return s;
}

ClusterSeed mutate(const ClusterSeed& s, int k) {
  const int n = static_cast<int>(s.B.rows());
  ClusterSeed t = s;
  // F and g use the exchange data before mutation
  Polynomial plus = poly_one(n), minus = poly_one(n);
  IntVec yp(n, 0), ym(n, 0);
  for (int j = 0; j < n; ++j) {
    yp[j] = pos(s.Cmat(j, k));
    ym[j] = pos(-s.Cmat(j, k));
  }
  plus = poly_monomial(yp);
  minus = poly_monomial(ym);
  for (int i = 0; i < n; ++i) {
    if (i == k) continue;
    plus = poly_mul(plus, poly_pow(s.F[i], pos(s.B(i, k)), n));
    minus = poly_mul(minus, poly_pow(s.F[i], pos(-s.B(i, k)), n));
  }
  t.F[k] = poly_exact_div(poly_add(plus, minus), s.F[k]);
  IntVec g(n, 0);
  for (int r = 0; r < n; ++r) {
    g[r] = -s.G[k][r];
    for (int i = 0; i < n; ++i) g[r] += pos(-s.B(i, k)) * s.G[i][r];
    for (int j = 0; j < n; ++j) g[r] -= pos(-s.Cmat(j, k)) * s.B0(r, j);
  }
  t.G[k] = g;
  auto mut = [&](const IntMatrix& top, const IntMatrix& bottom_or_self, bool self, IntMatrix& out) {
    for (std::size_t i = 0; i < out.rows(); ++i)
      for (int j = 0; j < n; ++j) {
        const auto bij = bottom_or_self(i, j);
        if ((self && static_cast<int>(i) == k) || j == k) {
          out(i, j) = -bij;
          continue;
        }
        const auto bik = bottom_or_self(i, k), bkj = top(k, j);
        const auto sg = bik > 0 ? 1 : (bik < 0 ? -1 : 0);
        out(i, j) = bij + sg * pos(bik * bkj);
      }
  };
  mut(s.B, s.B, true, t.B);
  mut(s.B, s.Cmat, false, t.Cmat);
  return t;
}

std::set<ClusterVariable> enumerate_variables(const ClusterSeed& s, std::size_t seed_bound) {
  const int n = static_cast<int>(s.B.rows());
  std::set<ClusterVariable> vars;
  std::set<std::string> seen{seed_key(s)};
  std::deque<ClusterSeed> queue{s};
  while (!queue.empty()) {
    const auto cur = queue.front();
    queue.pop_front();
    for (int i = 0; i < n; ++i) vars.insert({cur.F[i], cur.G[i]});
    for (int k = 0; k < n; ++k) {
      auto nxt = mutate(cur, k);
      if (!seen.insert(seed_key(nxt)).second) continue;
      if (seen.size() > seed_bound)
        throw MathError(Errc::NonFiniteType, "seed closure exceeds " + std::to_string(seed_bound) + " seeds");
      queue.push_back(std::move(nxt));
    }
  }
  return vars;
}

MatchReport match_report(const std::vector<ClusterVariable>& module_side, const std::set<ClusterVariable>& cluster_side) {
  MatchReport r;
  r.total = module_side.size();
  for (const auto& v : module_side) {
    if (cluster_side.count(v)) ++r.matched;
    else r.misses.push_back(describe(v));
  }
  return r;
}

MatchReport calibrated_match(const CartanDatum& d, const Orientation& o, const std::vector<ClusterVariable>& module_side) {
  MatchReport first;
  for (int sign : {1, -1}) {
    auto r = match_report(module_side, enumerate_variables(initial_seed(d, o, sign)));
    r.sign = sign;
    if (r.ok()) return r;
    if (sign == 1) first = r;
  }
  return first;
}

}  // namespace cartanrep
