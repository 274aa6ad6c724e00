#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "cartanrep/functors.hpp"
#include "cartanrep/module.hpp"
#include "cartanrep/polynomial.hpp"

namespace cartanrep {

// Integer polynomial in q fitted to per-prime point counts.
struct CountingPolynomial {
  std::vector<mpz_class> coeffs;  // coeffs[d] multiplies q^d
  std::vector<std::pair<std::uint32_t, mpz_class>> samples;
  std::int64_t degree_bound = 0;

  mpz_class at(std::int64_t q) const;
  std::int64_t euler() const { return at(1).get_si(); }
  std::string str() const;
};

// A module given by its reduction to each prime field.
using Family = std::function<Module<PrimeField>(const PrimeField&)>;

// Reductions mod p of an integral model; primes where ranks of arrows, dim End,
// dim Hom(E_i,-) or dim Hom(-,E_i) change throw BadReduction.
Family integral_family(const Module<Rational>& m);

const std::vector<std::uint32_t>& default_primes();

mpz_class gaussian_binomial(std::int64_t n, std::int64_t k, std::uint64_t q);

// Calls visit(U) for every free rank-e submodule of H^r (eps in Jordan form), U as a basis of columns.
void for_each_free_submodule(const PrimeField& f, int c, std::size_t r, std::size_t e,
                             const std::function<void(const Matrix<PrimeField>&)>& visit);

constexpr std::size_t kCountBudget = 10000000;

// Number of locally free submodules U with rk U = e; the module must be over F_p.
mpz_class count_locally_free_submodules(const Module<PrimeField>& m, const IntVec& e,
                                        std::size_t budget = kCountBudget);

void for_each_locally_free_submodule(const Module<PrimeField>& m, const IntVec& e,
                                     const std::function<bool(const std::vector<Matrix<PrimeField>>&)>& visit,
                                     std::size_t budget = kCountBudget);

// Number of flags with subquotients E_{word[0]}, E_{word[1]}, ... from the bottom.
mpz_class count_E_flags(const Module<PrimeField>& m, const std::vector<int>& word, std::size_t budget = kCountBudget);

// Fits counts over primes (default set, extended until degree_bound + 2 points are known).
CountingPolynomial interpolate_counts(const std::function<mpz_class(const PrimeField&)>& count, std::int64_t degree_bound,
                                      const std::vector<std::uint32_t>& primes = default_primes());

std::int64_t grassmannian_degree_bound(const CartanDatum& d, const IntVec& r, const IntVec& e);

CountingPolynomial grlf_polynomial(const Family& fam, const IntVec& rank, const IntVec& e,
                                   const std::vector<std::uint32_t>& primes = default_primes());

std::int64_t euler_char_grlf(const Family& fam, const IntVec& rank, const IntVec& e,
                             const std::vector<std::uint32_t>& primes = default_primes());

using FPolynomial = Polynomial;

FPolynomial f_polynomial(const Family& fam, const IntVec& rank,
                         const std::vector<std::uint32_t>& primes = default_primes());

IntVec g_vector(const CartanDatum& d, const Orientation& o, const IntVec& rank);

CountingPolynomial flag_polynomial(const Family& fam, const IntVec& rank, const std::vector<int>& word,
                                   const std::vector<std::uint32_t>& primes = default_primes());

std::int64_t flag_euler(const Family& fam, const IntVec& rank, const std::vector<int>& word,
                        const std::vector<std::uint32_t>& primes = default_primes());

using WordCombination = std::vector<std::pair<mpq_class, std::vector<int>>>;

mpq_class theta_eval(const WordCombination& combo, const Family& fam, const IntVec& rank,
                     const std::vector<std::uint32_t>& primes = default_primes());

// (ad theta_i)^{1-c_ij}(theta_j) as a combination of words.
WordCombination serre_combination(const CartanDatum& d, int i, int j);

// One step of a prescribed flag: subquotient of rank `beta`, isomorphic to iso(p) when iso is set.
struct FlagFactor {
  IntVec beta;
  Family iso;
};

mpz_class count_iso_flags(const Module<PrimeField>& m, const std::vector<Module<PrimeField>>& factors,
                          std::size_t budget = kCountBudget);

// delta_{M(m)}(theta_n) with theta_n = (1/prod n_k!) theta_{beta_r}^{n_r} * ... * theta_{beta_1}^{n_1}.
mpq_class pbw_pairing(const CartanDatum& d, const Orientation& o, const std::vector<std::int64_t>& m,
                      const std::vector<std::int64_t>& n, const std::vector<std::uint32_t>& primes = default_primes());

// Existence of a flag with subquotients factors[0] (bottom), factors[1], ... over each prime.
std::vector<std::pair<std::uint32_t, bool>> filtration_exists(const Family& fam, const std::vector<FlagFactor>& factors,
                                                              const std::vector<std::uint32_t>& primes = default_primes());

}  // namespace cartanrep
