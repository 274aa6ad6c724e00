#pragma once

#include <map>
#include <string>

#include <gmpxx.h>

#include "cartanrep/cartan.hpp"

namespace cartanrep {

// Integer polynomial in Y_1..Y_n keyed by exponent vectors; zero terms are never stored.
using Polynomial = std::map<IntVec, mpz_class>;

Polynomial poly_one(int n);
Polynomial poly_monomial(const IntVec& e);
Polynomial poly_add(const Polynomial& a, const Polynomial& b);
Polynomial poly_mul(const Polynomial& a, const Polynomial& b);
Polynomial poly_pow(const Polynomial& a, std::int64_t k, int n);
// Exact division; throws InternalMismatch on a nonzero remainder.
Polynomial poly_exact_div(const Polynomial& a, const Polynomial& b);
std::string poly_str(const Polynomial& p);

}  // namespace cartanrep
