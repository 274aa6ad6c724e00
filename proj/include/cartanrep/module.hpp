#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cartanrep/cartan.hpp"
#include "cartanrep/matrix.hpp"

namespace cartanrep {

enum class Algebra { H, Pi };

// One arrow of the (double) quiver. For (i,j) in Omega and copy k the
// forward arrow runs j -> i; in Pi the reversed copy runs i -> j.
// The commutation relation reads eps_tgt^tgt_exp X = X eps_src^src_exp.
struct ArrowSlot {
  int i = 0, j = 0, k = 0;
  bool reversed = false;
  int src = 0, tgt = 0;
  int src_exp = 0, tgt_exp = 0;
  int partner = -1;  // index of the opposite arrow in Pi, else -1
};

std::vector<ArrowSlot> arrow_slots(const CartanDatum& d, const Orientation& o, Algebra alg);

template <class K>
struct Module {
  K field;
  CartanDatum datum;
  Orientation omega;
  Algebra algebra = Algebra::H;
  std::vector<ArrowSlot> slots;
  std::vector<std::size_t> dims;
  std::vector<Matrix<K>> eps;
  std::vector<Matrix<K>> arrows;  // aligned with slots

  int n() const { return datum.n; }
  std::size_t total_dim() const {
    std::size_t s = 0;
    for (auto x : dims) s += x;
    return s;
  }
};

// Regular nilpotent form of H_i^r: blocks [v, eps v, ..., eps^{c-1} v].
template <class K>
Matrix<K> jordan_rect(const K& field, int c, std::size_t r);

template <class K>
Module<K> zero_module(const K& field, const CartanDatum& d, const Orientation& o, Algebra alg = Algebra::H);

template <class K>
Module<K> generalized_simple(const K& field, const CartanDatum& d, const Orientation& o, int i,
                             Algebra alg = Algebra::H);

// Module with given dims, Jordan eps for rank r, all arrows zero.
template <class K>
Module<K> jordan_skeleton(const K& field, const CartanDatum& d, const Orientation& o, const IntVec& r,
                          Algebra alg = Algebra::H);

template <class K>
std::vector<std::string> check_relations(const Module<K>& m);

template <class K>
std::optional<IntVec> is_locally_free(const Module<K>& m);

// Base change so every eps is in rectangular Jordan form; nullopt if not locally free.
template <class K>
std::optional<Module<K>> normalize_jordan(const Module<K>& m);

// Columns of basis[i] form the new basis of vertex i.
template <class K>
Module<K> change_basis(const Module<K>& m, const std::vector<Matrix<K>>& basis);

// Basis (arrow tuples) of the commutation-relation solutions for Jordan eps at rank r.
template <class K>
std::vector<std::vector<Matrix<K>>> arrow_solution_basis(const Module<K>& skeleton);

template <class K>
Module<K> random_locally_free(const K& field, const CartanDatum& d, const Orientation& o, const IntVec& r,
                              std::uint64_t seed);

template <class K>
Module<K> direct_sum(const Module<K>& a, const Module<K>& b);

template <class K>
Module<K> twist(const Module<K>& m);

template <class K>
using Hom = std::vector<Matrix<K>>;  // one matrix per vertex

template <class K>
std::vector<Hom<K>> hom_basis(const Module<K>& m, const Module<K>& n);

template <class K>
std::size_t hom_dim(const Module<K>& m, const Module<K>& n);

// Intertwiner check used to audit hom_basis independently.
template <class K>
bool is_homomorphism(const Module<K>& m, const Module<K>& n, const Hom<K>& f);

// dim Ext^1 from the presentation: block-triangular extensions with
// block-diagonal eps modulo coboundaries. M must be locally free.
template <class K>
std::size_t ext1_presentation(const Module<K>& m, const Module<K>& n);

// Basis of the cocycle space of ext1_presentation (arrow tuples X_a : M_src -> N_tgt).
template <class K>
std::vector<std::vector<Matrix<K>>> ext1_cocycles(const Module<K>& m, const Module<K>& n);

// Extension of m by n (n is the submodule) along a cocycle.
template <class K>
Module<K> extension(const Module<K>& m, const Module<K>& n, const std::vector<Matrix<K>>& cocycle);

template <class K>
std::size_t ext1_dim(const Module<K>& m, const Module<K>& n);

template <class K>
bool is_isomorphic(const Module<K>& m, const Module<K>& n, std::uint64_t seed = 0);

bool is_indecomposable(const Module<Rational>& m);

template <class K>
Module<K> projective_module(const K& field, const CartanDatum& d, const Orientation& o, int i);

template <class K>
Module<K> injective_module(const K& field, const CartanDatum& d, const Orientation& o, int i);

// Submodule/quotient by vertex subspaces given as column bases (must be stable).
template <class K>
Module<K> submodule(const Module<K>& m, const std::vector<Matrix<K>>& u);

template <class K>
Module<K> quotient(const Module<K>& m, const std::vector<Matrix<K>>& u);

template <class K>
bool is_submodule(const Module<K>& m, const std::vector<Matrix<K>>& u);

Module<PrimeField> reduce_mod(const Module<Rational>& m, const PrimeField& f);

// Pi-module with zero reversed arrows, and the H-part of a Pi-module.
template <class K>
Module<K> to_pi(const Module<K>& m);

template <class K>
Module<K> restrict_to_h(const Module<K>& m);

template <class K>
bool same_shape(const Module<K>& a, const Module<K>& b);

}  // namespace cartanrep
