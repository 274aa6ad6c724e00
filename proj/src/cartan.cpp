#include "cartanrep/cartan.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "cartanrep/matrix.hpp"

namespace cartanrep {

const char* errc_name(Errc e) {
  switch (e) {
    case Errc::NotCartan: return "NotCartan";
    case Errc::NotSymmetrizer: return "NotSymmetrizer";
    case Errc::NonPositiveSymmetrizer: return "NonPositiveSymmetrizer";
    case Errc::InvalidOrientation: return "InvalidOrientation";
    case Errc::NotSinkOrSource: return "NotSinkOrSource";
    case Errc::NotSink: return "NotSink";
    case Errc::NotSource: return "NotSource";
    case Errc::NotDynkin: return "NotDynkin";
    case Errc::NotReduced: return "NotReduced";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::SpecMismatch: return "SpecMismatch";
    case Errc::NotLocallyFree: return "NotLocallyFree";
    case Errc::InternalMismatch: return "InternalMismatch";
    case Errc::TooLarge: return "TooLarge";
    case Errc::InterpolationInconsistent: return "InterpolationInconsistent";
    case Errc::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case Errc::Undefined: return "Undefined";
    case Errc::NonFiniteType: return "NonFiniteType";
    case Errc::BadReduction: return "BadReduction";
    case Errc::Parse: return "Parse";
  }
  return "Unknown";
}

// ---------------------------------------------------------------- IntMatrix

IntMatrix IntMatrix::from_rows(const std::vector<IntVec>& rows) {
  IntMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_) throw MathError(Errc::ShapeMismatch, "ragged matrix rows");
    for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  IntMatrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t l = 0; l < cols_; ++l)
      for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += (*this)(i, l) * o(l, j);
  return r;
}

IntVec IntMatrix::operator*(const IntVec& v) const {
  IntVec r(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
  return r;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const {
  IntMatrix r(*this);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
  return r;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::vector<IntVec> IntMatrix::to_rows() const {
  std::vector<IntVec> rows(rows_, IntVec(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) rows[i][j] = (*this)(i, j);
  return rows;
}

std::string IntMatrix::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j);
    os << "]";
  }
  os << "]";
  return os.str();
}

// ------------------------------------------------------------------- datum

CartanDatum validate_datum(const std::vector<IntVec>& C, const IntVec& D) {
  const std::size_t n = C.size();
  if (n == 0) throw MathError(Errc::ShapeMismatch, "empty Cartan matrix");
  for (const auto& row : C)
    if (row.size() != n) throw MathError(Errc::ShapeMismatch, "Cartan matrix is not square");
  if (D.size() != n) throw MathError(Errc::ShapeMismatch, "symmetrizer length differs from n");

  CartanDatum d;
  d.n = static_cast<int>(n);
  d.C = IntMatrix::from_rows(C);
  d.D = D;
  d.g = IntMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (D[i] <= 0)
      throw MathError(Errc::NonPositiveSymmetrizer, "c_" + std::to_string(i + 1) + " <= 0");
    if (d.C(i, i) != 2)
      throw MathError(Errc::NotCartan, "c_" + std::to_string(i + 1) + std::to_string(i + 1) + " != 2");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto cij = d.C(i, j);
      const auto cji = d.C(j, i);
      const std::string tag = std::to_string(i + 1) + "," + std::to_string(j + 1);
      if (cij > 0) throw MathError(Errc::NotCartan, "positive off-diagonal entry c_" + tag);
      if ((cij == 0) != (cji == 0))
        throw MathError(Errc::NotSymmetrizer, "c_" + tag + " and its transpose differ in support");
      if (D[i] * cij != D[j] * cji)
        throw MathError(Errc::NotSymmetrizer, "c_i c_ij != c_j c_ji at " + tag);
      d.g(i, j) = std::gcd(cij, cji);
      if (cij < 0) {
        const auto l = std::lcm(D[i], D[j]);
        if (cij != -(l / D[i]) * d.g(i, j))
          throw MathError(Errc::NotSymmetrizer, "gcd/lcm identity fails at " + tag);
      }
    }
  return d;
}

CartanDatum scale_symmetrizer(const CartanDatum& d, std::int64_t k) {
  IntVec D = d.D;
  for (auto& c : D) c *= k;
  return validate_datum(d.C.to_rows(), D);
}

namespace data {
CartanDatum A1() { return validate_datum({{2}}, {1}); }
CartanDatum A2() { return validate_datum({{2, -1}, {-1, 2}}, {1, 1}); }
CartanDatum A3() { return validate_datum({{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}}, {1, 1, 1}); }
CartanDatum B2() { return validate_datum({{2, -1}, {-2, 2}}, {2, 1}); }
CartanDatum B3() { return validate_datum({{2, -1, 0}, {-1, 2, -1}, {0, -2, 2}}, {2, 2, 1}); }
CartanDatum C3() { return validate_datum({{2, -1, 0}, {-1, 2, -2}, {0, -1, 2}}, {1, 1, 2}); }
CartanDatum G2() { return validate_datum({{2, -1}, {-3, 2}}, {3, 1}); }
CartanDatum by_name(const std::string& name) {
  if (name == "A1") return A1();
  if (name == "A2") return A2();
  if (name == "A3") return A3();
  if (name == "B2") return B2();
  if (name == "B3") return B3();
  if (name == "C3") return C3();
  if (name == "G2") return G2();
  throw MathError(Errc::Parse, "unknown datum name " + name);
}
}  // namespace data

// ------------------------------------------------------------- Weyl group

std::int64_t height(const RootVector& a) {
  std::int64_t h = 0;
  for (auto x : a) h += x;
  return h;
}

RootVector simple_root(int n, int i) {
  RootVector a(n, 0);
  a[i] = 1;
  return a;
}

RootVector reflect_root(const CartanDatum& d, int i, const RootVector& a) {
  std::int64_t ci = 0;
  for (int j = 0; j < d.n; ++j) ci += d.C(i, j) * a[j];
  RootVector r = a;
  r[i] -= ci;
  return r;
}

IntMatrix reflection_matrix(const CartanDatum& d, int i) {
  IntMatrix s(d.n, d.n);
  for (int j = 0; j < d.n; ++j) {
    const auto col = reflect_root(d, i, simple_root(d.n, j));
    for (int r = 0; r < d.n; ++r) s(r, j) = col[r];
  }
  return s;
}

OrbitResult weyl_orbit(const CartanDatum& d, const RootVector& a, std::int64_t height_bound) {
  auto abs_height = [](const RootVector& v) {
    std::int64_t h = 0;
    for (auto x : v) h += x < 0 ? -x : x;
    return h;
  };
  OrbitResult res;
  std::deque<RootVector> queue{a};
  res.roots.insert(a);
  while (!queue.empty()) {
    const RootVector v = queue.front();
    queue.pop_front();
    for (int i = 0; i < d.n; ++i) {
      RootVector w = reflect_root(d, i, v);
      if (abs_height(w) > height_bound) {
        res.truncated = true;
        continue;
      }
      if (res.roots.insert(w).second) queue.push_back(std::move(w));
    }
  }
  return res;
}

namespace {

// Exact determinant by Bareiss fraction-free elimination.
std::int64_t bareiss_det(IntMatrix m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  std::int64_t sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t s = k + 1;
      while (s < n && m(s, k) == 0) ++s;
      if (s == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(s, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

IntMatrix symmetrized(const CartanDatum& d) {
  IntMatrix s(d.n, d.n);
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j) s(i, j) = d.D[i] * d.C(i, j);
  return s;
}

std::vector<std::vector<int>> components(const CartanDatum& d) {
  std::vector<int> comp(d.n, -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < d.n; ++s) {
    if (comp[s] >= 0) continue;
    out.emplace_back();
    std::vector<int> stack{s};
    comp[s] = static_cast<int>(out.size()) - 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      out.back().push_back(v);
      for (int w = 0; w < d.n; ++w)
        if (d.adjacent(v, w) && comp[w] < 0) {
          comp[w] = comp[s];
          stack.push_back(w);
        }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

// Best-effort Dynkin type of a connected component.
std::string classify(const CartanDatum& d, const std::vector<int>& vs) {
  const int m = static_cast<int>(vs.size());
  std::map<int, int> degree;
  int simple = 0, dbl = 0, triple = 0;
  std::pair<int, int> multi{-1, -1};
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      const int i = vs[a], j = vs[b];
      if (!d.adjacent(i, j)) continue;
      ++degree[i];
      ++degree[j];
      const auto prod = d.C(i, j) * d.C(j, i);
      if (prod == 1) ++simple;
      else if (prod == 2) { ++dbl; multi = {i, j}; }
      else if (prod == 3) { ++triple; multi = {i, j}; }
      else return "?";
    }
  const std::string ms = std::to_string(m);
  if (m == 1) return "A1";
  if (triple == 1 && m == 2) return "G2";
  if (triple > 0) return "?";
  int branch = -1;
  for (auto [v, deg] : degree)
    if (deg >= 3) {
      if (deg > 3 || branch >= 0) return "?";
      branch = v;
    }
  if (dbl == 1) {
    if (branch >= 0) return "?";
    if (m == 2) return "B2";
    const int i = multi.first, j = multi.second;
    const bool end_i = degree[i] == 1, end_j = degree[j] == 1;
    if (!end_i && !end_j) return m == 4 ? "F4" : "?";
    // Long roots carry the larger symmetrizer weight.
    const int endv = end_i ? i : j;
    const int other = end_i ? j : i;
    return (d.D[endv] < d.D[other] ? "B" : "C") + ms;
  }
  if (dbl > 1) return "?";
  if (branch < 0) return "A" + ms;
  // arm lengths from the branch vertex
  std::vector<int> arms;
  for (int w : vs) {
    if (!d.adjacent(branch, w)) continue;
    int len = 1, prev = branch, cur = w;
    while (true) {
      int next = -1;
      for (int x : vs)
        if (x != prev && d.adjacent(cur, x)) next = x;
      if (next < 0) break;
      prev = cur;
      cur = next;
      ++len;
    }
    arms.push_back(len);
  }
  std::sort(arms.begin(), arms.end());
  if (arms.size() != 3) return "?";
  if (arms[0] == 1 && arms[1] == 1) return "D" + ms;
  if (arms[0] == 1 && arms[1] == 2 && arms[2] >= 2 && arms[2] <= 4) return "E" + ms;
  return "?";
}

}  // namespace

DynkinInfo is_dynkin(const CartanDatum& d) {
  DynkinInfo info;
  const IntMatrix s = symmetrized(d);
  info.dynkin = true;
  for (int k = 1; k <= d.n; ++k) {
    IntMatrix minor(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) minor(i, j) = s(i, j);
    if (bareiss_det(minor) <= 0) {
      info.dynkin = false;
      break;
    }
  }
  for (const auto& comp : components(d)) info.components.push_back(info.dynkin ? classify(d, comp) : "?");
  return info;
}

std::vector<RootVector> positive_roots_by_orbit(const CartanDatum& d) {
  if (!is_dynkin(d).dynkin) throw MathError(Errc::NotDynkin, "root system is infinite");
  std::int64_t maxc = 1;
  for (std::size_t i = 0; i < d.C.rows(); ++i)
    for (std::size_t j = 0; j < d.C.cols(); ++j) maxc = std::max(maxc, std::abs(d.C(i, j)));
  const std::int64_t bound = 2 * d.n * maxc * 10;
  std::set<RootVector> all;
  for (int i = 0; i < d.n; ++i) {
    auto orb = weyl_orbit(d, simple_root(d.n, i), bound);
    if (orb.truncated) throw MathError(Errc::InternalMismatch, "Dynkin orbit truncated");
    all.insert(orb.roots.begin(), orb.roots.end());
  }
  std::vector<RootVector> pos;
  for (const auto& r : all)
    if (std::all_of(r.begin(), r.end(), [](auto x) { return x >= 0; })) pos.push_back(r);
  std::sort(pos.begin(), pos.end(), [](const RootVector& a, const RootVector& b) {
    return height(a) != height(b) ? height(a) < height(b) : a > b;
  });
  return pos;
}

std::vector<RootVector> positive_roots(const CartanDatum& d) {
  auto by_orbit = positive_roots_by_orbit(d);
  const auto words = admissible_words(d, default_orientation(d));
  const auto bg = beta_gamma_sequences(d, *words.w0);
  std::set<RootVector> a(by_orbit.begin(), by_orbit.end());
  std::set<RootVector> b(bg.beta.begin(), bg.beta.end());
  if (a != b || b.size() != bg.beta.size())
    throw MathError(Errc::InternalMismatch, "orbit closure and w0 beta-sequence disagree");
  return by_orbit;
}

std::int64_t sym_form(const CartanDatum& d, const RootVector& a, const RootVector& b) {
  std::int64_t s = 0;
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j) s += a[i] * d.D[i] * d.C(i, j) * b[j];
  return s;
}

bool fundamental_region_check(const CartanDatum& d, const RootVector& a) {
  std::vector<int> supp;
  for (int i = 0; i < d.n; ++i) {
    if (a[i] < 0) return false;
    if (a[i] > 0) supp.push_back(i);
  }
  if (supp.empty()) return false;  // empty support is not connected
  std::set<int> seen{supp[0]};
  std::vector<int> stack{supp[0]};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : supp)
      if (d.adjacent(v, w) && seen.insert(w).second) stack.push_back(w);
  }
  if (seen.size() != supp.size()) return false;
  for (int i = 0; i < d.n; ++i)
    if (sym_form(d, a, simple_root(d.n, i)) > 0) return false;
  return true;
}

// ------------------------------------------------------------ orientations

void validate_orientation(const CartanDatum& d, const Orientation& o) {
  for (auto [i, j] : o) {
    if (i < 0 || j < 0 || i >= d.n || j >= d.n || i == j)
      throw MathError(Errc::InvalidOrientation, "pair out of range");
    if (!d.adjacent(i, j))
      throw MathError(Errc::InvalidOrientation, "pair on a non-edge (" + std::to_string(i + 1) + "," +
                                                    std::to_string(j + 1) + ")");
  }
  for (int i = 0; i < d.n; ++i)
    for (int j = i + 1; j < d.n; ++j) {
      if (!d.adjacent(i, j)) continue;
      const int cnt = static_cast<int>(o.count({i, j}) + o.count({j, i}));
      if (cnt != 1)
        throw MathError(Errc::InvalidOrientation, "edge {" + std::to_string(i + 1) + "," +
                                                      std::to_string(j + 1) + "} must be oriented exactly once");
    }
  // acyclicity: Kahn on arrows j -> i for (i,j) in o
  std::vector<int> indeg(d.n, 0);
  for (auto [i, j] : o) ++indeg[i];
  std::vector<int> ready;
  for (int v = 0; v < d.n; ++v)
    if (indeg[v] == 0) ready.push_back(v);
  int seen = 0;
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    ++seen;
    for (auto [i, j] : o)
      if (j == v && --indeg[i] == 0) ready.push_back(i);
  }
  if (seen != d.n) throw MathError(Errc::InvalidOrientation, "Q° has an oriented cycle");
}

bool is_sink(const Orientation& o, int k) {
  for (auto [i, j] : o)
    if (j == k) return false;
  return true;
}

bool is_source(const Orientation& o, int k) {
  for (auto [i, j] : o)
    if (i == k) return false;
  return true;
}

Orientation reflect_orientation(const CartanDatum& d, const Orientation& o, int k) {
  if (k < 0 || k >= d.n) throw MathError(Errc::NotSinkOrSource, "vertex out of range");
  if (!is_sink(o, k) && !is_source(o, k))
    throw MathError(Errc::NotSinkOrSource, "vertex " + std::to_string(k + 1) + " is neither sink nor source");
  Orientation r;
  for (auto [i, j] : o) {
    if (i == k || j == k) r.insert({j, i});
    else r.insert({i, j});
  }
  return r;
}

std::vector<Orientation> all_orientations(const CartanDatum& d) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < d.n; ++i)
    for (int j = i + 1; j < d.n; ++j)
      if (d.adjacent(i, j)) edges.push_back({i, j});
  std::vector<Orientation> out;
  for (std::uint64_t mask = 0; mask < (1ULL << edges.size()); ++mask) {
    Orientation o;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      auto [i, j] = edges[e];
      if (mask >> e & 1) o.insert({i, j});
      else o.insert({j, i});
    }
    try {
      validate_orientation(d, o);
      out.push_back(o);
    } catch (const MathError&) {
    }
  }
  return out;
}

Orientation default_orientation(const CartanDatum& d) {
  Orientation o;
  for (int i = 0; i < d.n; ++i)
    for (int j = i + 1; j < d.n; ++j)
      if (d.adjacent(i, j)) o.insert({i, j});
  return o;
}

AdmissibleWords admissible_words(const CartanDatum& d, const Orientation& o) {
  validate_orientation(d, o);
  AdmissibleWords out;
  Orientation cur = o;
  std::vector<bool> used(d.n, false);
  for (int step = 0; step < d.n; ++step) {
    int pick = -1;
    for (int k = 0; k < d.n && pick < 0; ++k)
      if (!used[k] && is_sink(cur, k)) pick = k;
    if (pick < 0) throw MathError(Errc::InternalMismatch, "no admissible sink found");
    used[pick] = true;
    out.coxeter.letters.push_back(pick);
    cur = reflect_orientation(d, cur, pick);
  }
  out.coxeter.reduced = true;

  if (!is_dynkin(d).dynkin) return out;
  const std::size_t N = positive_roots_by_orbit(d).size();
  // keep reflecting at sinks while the beta-sequence stays positive
  WeylWord w0;
  cur = o;
  while (w0.letters.size() < N) {
    int pick = -1;
    for (int k = 0; k < d.n && pick < 0; ++k) {
      if (!is_sink(cur, k)) continue;
      RootVector b = simple_root(d.n, k);
      for (std::size_t t = w0.letters.size(); t-- > 0;) b = reflect_root(d, w0.letters[t], b);
      if (std::all_of(b.begin(), b.end(), [](auto x) { return x >= 0; })) pick = k;
    }
    if (pick < 0) throw MathError(Errc::InternalMismatch, "sink iteration stopped before reaching w0");
    w0.letters.push_back(pick);
    cur = reflect_orientation(d, cur, pick);
  }
  w0.reduced = true;
  beta_gamma_sequences(d, w0);
  out.w0 = w0;
  return out;
}

BetaGamma beta_gamma_sequences(const CartanDatum& d, const WeylWord& w) {
  BetaGamma bg;
  const auto& L = w.letters;
  const std::size_t l = L.size();
  for (std::size_t k = 0; k < l; ++k) {
    RootVector b = simple_root(d.n, L[k]);
    for (std::size_t t = k; t-- > 0;) b = reflect_root(d, L[t], b);
    if (std::any_of(b.begin(), b.end(), [](auto x) { return x < 0; }))
      throw MathError(Errc::NotReduced, "beta_" + std::to_string(k + 1) + " is negative");
    bg.beta.push_back(b);
    RootVector g = simple_root(d.n, L[k]);
    for (std::size_t t = k + 1; t < l; ++t) g = reflect_root(d, L[t], g);
    bg.gamma.push_back(g);
  }
  // w(beta_k) = -gamma_k with w = s_{i_l} ... s_{i_1}
  for (std::size_t k = 0; k < l; ++k) {
    RootVector v = bg.beta[k];
    for (std::size_t t = 0; t < l; ++t) v = reflect_root(d, L[t], v);
    for (int i = 0; i < d.n; ++i)
      if (v[i] != -bg.gamma[k][i]) throw MathError(Errc::InternalMismatch, "w(beta_k) != -gamma_k");
  }
  return bg;
}

std::int64_t euler_form(const CartanDatum& d, const Orientation& o, const RootVector& a,
                        const RootVector& b) {
  std::int64_t s = 0;
  for (int i = 0; i < d.n; ++i) {
    s += d.D[i] * a[i] * b[i];
    for (int j = 0; j < d.n; ++j)
      if (o.count({j, i})) s += d.D[i] * d.C(i, j) * a[i] * b[j];
  }
  return s;
}

FormData forms(const CartanDatum& d, const Orientation& o) {
  validate_orientation(d, o);
  FormData f;
  const int n = d.n;
  f.gram_sym = IntMatrix(n, n);
  f.gram_euler = IntMatrix(n, n);
  f.R = IntMatrix(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      f.gram_sym(i, j) = d.D[i] * d.C(i, j);
      if (i == j) f.gram_euler(i, j) = d.D[i];
      else if (o.count({j, i})) f.gram_euler(i, j) = d.D[i] * d.C(i, j);
      if (f.gram_euler(i, j) % d.D[i] != 0) throw MathError(Errc::InternalMismatch, "R not integral");
      f.R(i, j) = f.gram_euler(i, j) / d.D[i];
    }

  Rational q;
  Matrix<Rational> R(q, n, n), CmR(q, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      R(i, j) = q.from_int(f.R(i, j));
      CmR(i, j) = q.from_int(d.C(i, j) - f.R(i, j));
    }
  const auto Rinv = inverse(R);
  if (!Rinv) throw MathError(Errc::InternalMismatch, "R is singular");
  const Matrix<Rational> cox = -((*Rinv) * CmR);
  f.coxeter = IntMatrix(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (cox(i, j).get_den() != 1) throw MathError(Errc::InternalMismatch, "Coxeter matrix not integral");
      f.coxeter(i, j) = cox(i, j).get_num().get_si();
    }
  return f;
}

std::int64_t kostant_count(const CartanDatum& d, const RootVector& r) {
  const auto roots = positive_roots_by_orbit(d);
  for (auto x : r)
    if (x < 0) return 0;
  // coin-change over the box [0, r]
  std::vector<std::int64_t> stride(d.n, 1);
  std::size_t size = 1;
  for (int i = 0; i < d.n; ++i) {
    stride[i] = static_cast<std::int64_t>(size);
    size *= static_cast<std::size_t>(r[i] + 1);
  }
  std::vector<std::int64_t> dp(size, 0);
  dp[0] = 1;
  auto decode = [&](std::size_t idx) {
    RootVector v(d.n);
    for (int i = 0; i < d.n; ++i) {
      v[i] = static_cast<std::int64_t>(idx) / stride[i] % (r[i] + 1);
    }
    return v;
  };
  for (const auto& beta : roots) {
    for (std::size_t idx = 0; idx < size; ++idx) {
      RootVector v = decode(idx);
      bool ok = true;
      std::int64_t prev = 0;
      for (int i = 0; i < d.n; ++i) {
        if (v[i] < beta[i]) { ok = false; break; }
        prev += (v[i] - beta[i]) * stride[i];
      }
      if (ok) dp[idx] += dp[static_cast<std::size_t>(prev)];
    }
  }
  return dp[size - 1];
}

}  // namespace cartanrep
