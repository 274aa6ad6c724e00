#include "cartanrep/polynomial.hpp"

#include <sstream>

namespace cartanrep {

Polynomial poly_one(int n) { return {{IntVec(n, 0), 1}}; }

Polynomial poly_monomial(const IntVec& e) { return {{e, 1}}; }

Polynomial poly_add(const Polynomial& a, const Polynomial& b) {
  Polynomial r = a;
  for (const auto& [e, c] : b) {
    auto& x = r[e];
    x += c;
    if (x == 0) r.erase(e);
  }
  return r;
}

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      IntVec e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r[e] += ca * cb;
    }
  for (auto it = r.begin(); it != r.end();) it = it->second == 0 ? r.erase(it) : std::next(it);
  return r;
}

Polynomial poly_pow(const Polynomial& a, std::int64_t k, int n) {
  Polynomial r = poly_one(n);
  for (std::int64_t i = 0; i < k; ++i) r = poly_mul(r, a);
  return r;
}

Polynomial poly_exact_div(const Polynomial& a, const Polynomial& b) {
  if (b.empty()) throw MathError(Errc::InternalMismatch, "division by the zero polynomial");
  // leading terms in the lexicographic order of exponent vectors
  const auto& [lb, cb] = *b.rbegin();
  Polynomial rem = a, q;
  while (!rem.empty()) {
    const auto& [lr, cr] = *rem.rbegin();
    IntVec e(lr.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      e[i] = lr[i] - lb[i];
      if (e[i] < 0) throw MathError(Errc::InternalMismatch, "polynomial division leaves a remainder");
    }
    if (cr % cb != 0) throw MathError(Errc::InternalMismatch, "polynomial division leaves a remainder");
    const Polynomial t{{e, cr / cb}};
    q = poly_add(q, t);
    Polynomial neg = poly_mul(t, b);
    for (auto& [_, c] : neg) c = -c;
    rem = poly_add(rem, neg);
  }
  return q;
}

std::string poly_str(const Polynomial& p) {
  if (p.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : p) {
    os << (first ? "" : " + ") << c;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] > 0) os << "*Y" << i + 1 << (e[i] > 1 ? "^" + std::to_string(e[i]) : "");
    first = false;
  }
  return os.str();
}

}  // namespace cartanrep
