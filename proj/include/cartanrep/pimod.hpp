#pragma once

#include <cstdint>
#include <vector>

#include "cartanrep/module.hpp"

namespace cartanrep {

using Partition = std::vector<int>;  // weakly decreasing parts in [0, c_k]

struct FacSub {
  Partition fac;
  Partition sub;
};

// Pi-module with zero reversed arrows.
template <class K>
Module<K> from_h_module(const Module<K>& m);

// H_k-span of the images of all arrows ending at k.
template <class K>
Matrix<K> in_image(const Module<K>& m, int k);

// Ker(M_{k,out}): vectors whose H_k-span is killed by every arrow leaving k.
template <class K>
Matrix<K> out_kernel(const Module<K>& m, int k);

template <class K>
FacSub fac_sub(const Module<K>& m, int k);

// Jordan partition of eps restricted to an eps-stable subspace / induced on V/U.
template <class K>
Partition partition_on_subspace(const Matrix<K>& eps, const Matrix<K>& u, int c);
template <class K>
Partition partition_on_quotient(const Matrix<K>& eps, const Matrix<K>& u, int c);

template <class K>
Module<K> kernel_part(const Module<K>& m, int j);  // K_j(M)
template <class K>
Module<K> cokernel_part(const Module<K>& m, int j);  // C_j(M)

struct EFilterResult {
  bool filtered = false;
  std::vector<int> witness;  // bottom factor first
  std::size_t nodes = 0;
};

// Existence of a flag with subquotients E_i. Throws SearchBudgetExceeded when
// the search is inconclusive; never reports false unless the search was exhaustive.
template <class K>
EFilterResult is_E_filtered(const Module<K>& m, std::size_t budget = 100000, std::uint64_t seed = 0);

template <class K>
bool is_crystal_module(const Module<K>& m);

template <class K>
int phi(const Module<K>& m, int i);
template <class K>
int phi_star(const Module<K>& m, int i);

// Iterated extensions with E_{seq.front()} at the bottom and E_{seq.back()} on top.
template <class K>
Module<K> random_E_filtered(const K& field, const CartanDatum& d, const Orientation& o, const std::vector<int>& seq,
                            std::uint64_t seed);

// Sparse random forward arrows, then a random solution of the (linear) reversed-arrow and mesh system.
template <class K>
Module<K> random_pi_module(const K& field, const CartanDatum& d, const Orientation& o, const IntVec& r,
                           std::uint64_t seed);

template <class K>
std::size_t hom_pi(const Module<K>& m, const Module<K>& n);

template <class K>
std::size_t ext1_pi(const Module<K>& m, const Module<K>& n);

// dim Hom(M,N) + dim Hom(N,M) - (rk M, rk N).
std::int64_t cb_prediction(std::size_t hom_mn, std::size_t hom_nm, const CartanDatum& d, const IntVec& rm,
                           const IntVec& rn);

}  // namespace cartanrep
