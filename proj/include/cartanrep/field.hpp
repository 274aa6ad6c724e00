#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace cartanrep {

// Fields are small value-type contexts; elements are plain values and every
// arithmetic operation goes through the context (cf. an Fp context object).
// Both fields expose the same interface so that linear algebra and module
// code can be written once as templates.

class Rational {
 public:
  using Elem = mpq_class;

  Elem zero() const { return Elem(0); }
  Elem one() const { return Elem(1); }
  Elem from_int(std::int64_t v) const { return Elem(static_cast<long>(v)); }

  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem inv(const Elem& a) const {
    if (sgn(a) == 0) throw std::domain_error("division by zero in QQ");
    return 1 / a;
  }
  Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }
  bool is_zero(const Elem& a) const { return sgn(a) == 0; }
  bool eq(const Elem& a, const Elem& b) const { return a == b; }

  bool is_finite() const { return false; }
  std::uint64_t order() const { return 0; }
  std::uint32_t characteristic() const { return 0; }
  std::string name() const { return "QQ"; }

  std::string str(const Elem& a) const { return a.get_str(); }
  Elem parse(const std::string& s) const {
    Elem v(s);
    v.canonicalize();
    return v;
  }

  // Small integers; QQ has no uniform distribution.
  template <class Rng>
  Elem random(Rng& rng, std::int64_t radius = 3) const;

  friend bool operator==(const Rational&, const Rational&) { return true; }
};

class PrimeField {
 public:
  using Elem = std::uint32_t;

  PrimeField() : p_(2) {}
  explicit PrimeField(std::uint32_t p) : p_(p) {
    if (!is_prime(p)) throw std::invalid_argument("PrimeField: " + std::to_string(p) + " is not prime");
  }

  std::uint32_t prime() const { return p_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return static_cast<Elem>(r);
  }

  Elem add(Elem a, Elem b) const {
    std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p_ - b; }
  Elem mul(Elem a, Elem b) const {
    return static_cast<Elem>(static_cast<std::uint64_t>(a) * b % p_);
  }
  Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
  Elem inv(Elem a) const {
    if (a == 0) throw std::domain_error("division by zero in GF(" + std::to_string(p_) + ")");
    // extended Euclid
    std::int64_t t = 0, nt = 1, r = p_, nr = a;
    while (nr != 0) {
      std::int64_t q = r / nr;
      std::int64_t tmp = t - q * nt;
      t = nt;
      nt = tmp;
      tmp = r - q * nr;
      r = nr;
      nr = tmp;
    }
    return from_int(t);
  }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  bool is_zero(Elem a) const { return a == 0; }
  bool eq(Elem a, Elem b) const { return a == b; }

  bool is_finite() const { return true; }
  std::uint64_t order() const { return p_; }
  std::uint32_t characteristic() const { return p_; }
  std::string name() const { return "GF(" + std::to_string(p_) + ")"; }

  std::string str(Elem a) const { return std::to_string(a); }
  Elem parse(const std::string& s) const { return from_int(std::stoll(s)); }

  // Element with index `i` in 0..p-1 (used by exhaustive enumeration).
  Elem element(std::uint64_t i) const { return static_cast<Elem>(i % p_); }

  template <class Rng>
  Elem random(Rng& rng, std::int64_t = 0) const;

  static bool is_prime(std::uint32_t p) {
    if (p < 2) return false;
    for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= p; ++d)
      if (p % d == 0) return false;
    return true;
  }

  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

 private:
  std::uint32_t p_;
};

// Portable bounded draw; std::uniform_int_distribution is not reproducible
// across standard libraries.
template <class Rng>
std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

template <class Rng>
Rational::Elem Rational::random(Rng& rng, std::int64_t radius) const {
  const auto span = static_cast<std::uint64_t>(2 * radius + 1);
  return from_int(static_cast<std::int64_t>(uniform_below(rng, span)) - radius);
}

template <class Rng>
PrimeField::Elem PrimeField::random(Rng& rng, std::int64_t) const {
  return static_cast<Elem>(uniform_below(rng, p_));
}

}  // namespace cartanrep
