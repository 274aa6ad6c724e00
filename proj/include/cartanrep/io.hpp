#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cartanrep/cluster.hpp"
#include "cartanrep/functors.hpp"
#include "cartanrep/grassmann.hpp"
#include "cartanrep/module.hpp"

namespace cartanrep {

using Json = nlohmann::ordered_json;

// {"C": [[...]], "D": [...], "Omega": [[i,j],...]}, vertices 1-based.
Json datum_to_json(const CartanDatum& d, const Orientation& o);
CartanDatum datum_from_json(const Json& j);
Orientation orientation_from_json(const CartanDatum& d, const Json& j);

// "1,2;2,3" -> {(0,1),(1,2)}; "default" -> default_orientation.
Orientation parse_orientation(const CartanDatum& d, const std::string& s);
std::vector<std::uint32_t> parse_primes(const std::string& s);

template <class K>
Json module_to_json(const Module<K>& m);

Module<Rational> rational_module_from_json(const Json& j);
Module<PrimeField> prime_module_from_json(const Json& j);

Json polynomial_to_json(const IntVec& rank, const Polynomial& p);
Json counting_to_json(const CountingPolynomial& p);
Json vector_to_json(const IntVec& v);

}  // namespace cartanrep
