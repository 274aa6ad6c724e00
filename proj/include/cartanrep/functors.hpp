#pragma once

#include <utility>
#include <vector>

#include "cartanrep/module.hpp"

namespace cartanrep {

// F_k^+ for a sink k of the module's orientation; result lives over s_k(Omega).
template <class K>
Module<K> reflect_plus(const Module<K>& m, int k);

// F_k^- for a source k of the module's orientation; result lives over s_k(Omega).
template <class K>
Module<K> reflect_minus(const Module<K>& m, int k);

template <class K>
Module<K> coxeter_plus(const Module<K>& m);

template <class K>
Module<K> coxeter_minus(const Module<K>& m);

// tau = T o C^+, tau^- = C^- o T on locally free modules.
template <class K>
Module<K> tau(const Module<K>& m);

template <class K>
Module<K> tau_minus(const Module<K>& m);

template <class K>
struct RootModuleTable {
  WeylWord word;
  std::vector<RootVector> beta;
  std::vector<Module<K>> modules;
};

// M(beta_k) = F_{i_1}^- ... F_{i_{k-1}}^- (E_{i_k}), k is 0-based here.
template <class K>
Module<K> root_module(const K& field, const CartanDatum& d, const Orientation& o, std::size_t k);

template <class K>
RootModuleTable<K> all_root_modules(const K& field, const CartanDatum& d, const Orientation& o);

struct HomExtEntry {
  std::int64_t hom = 0;
  std::int64_t ext = 0;
};

template <class K>
std::vector<std::vector<HomExtEntry>> homext_table(const RootModuleTable<K>& t);

// The predicted table: (<b_i,b_j>, 0) for i <= j and (0, -<b_i,b_j>) for i > j.
std::vector<std::vector<HomExtEntry>> homext_prediction(const CartanDatum& d, const Orientation& o,
                                                        const std::vector<RootVector>& beta);

}  // namespace cartanrep
