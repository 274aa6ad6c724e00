#include "cartanrep/io.hpp"

#include <sstream>

namespace cartanrep {

namespace {

template <class K>
Json matrix_to_json(const Matrix<K>& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m.field().str(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

template <class K>
Matrix<K> matrix_from_json(const K& f, const Json& j, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows) throw MathError(Errc::Parse, "matrix row count");
  Matrix<K> m(f, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw MathError(Errc::Parse, "matrix column count");
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& x = j[i][c];
      m(i, c) = f.parse(x.is_string() ? x.get<std::string>() : std::to_string(x.get<std::int64_t>()));
    }
  }
  return m;
}

template <class K>
Module<K> module_from_json(const K& f, const Json& j) {
  const auto d = datum_from_json(j.at("datum"));
  const auto o = orientation_from_json(d, j.at("datum").at("Omega"));
  const auto alg = j.at("algebra").get<std::string>() == "Pi" ? Algebra::Pi : Algebra::H;
  Module<K> m = zero_module(f, d, o, alg);
  const auto dims = j.at("dims").get<std::vector<std::size_t>>();
  if (dims.size() != static_cast<std::size_t>(d.n)) throw MathError(Errc::Parse, "dims length");
  m.dims = dims;
  m.eps.clear();
  for (int i = 0; i < d.n; ++i) m.eps.push_back(matrix_from_json(f, j.at("eps").at(i), dims[i], dims[i]));
  const auto& arrows = j.at("arrows");
  if (arrows.size() != m.slots.size()) throw MathError(Errc::Parse, "arrow count");
  m.arrows.clear();
  for (std::size_t a = 0; a < m.slots.size(); ++a) {
    const auto& s = m.slots[a];
    const auto& x = arrows.at(a);
    if (x.at("i").get<int>() != s.i + 1 || x.at("j").get<int>() != s.j + 1 || x.at("k").get<int>() != s.k + 1 ||
        x.at("reversed").get<bool>() != s.reversed)
      throw MathError(Errc::Parse, "arrow order differs from the canonical (i,j,k) order");
    m.arrows.push_back(matrix_from_json(f, x.at("matrix"), dims[s.tgt], dims[s.src]));
  }
  const auto bad = check_relations(m);
  if (!bad.empty()) throw MathError(Errc::Parse, "module violates relations: " + bad.front());
  return m;
}

}  // namespace

Json vector_to_json(const IntVec& v) {
  Json a = Json::array();
  for (auto x : v) a.push_back(x);
  return a;
}

Json datum_to_json(const CartanDatum& d, const Orientation& o) {
  Json j;
  Json c = Json::array();
  for (const auto& row : d.C.to_rows()) c.push_back(vector_to_json(row));
  j["C"] = c;
  j["D"] = vector_to_json(d.D);
  Json om = Json::array();
  for (const auto& [a, b] : o) om.push_back(Json::array({a + 1, b + 1}));
  j["Omega"] = om;
  return j;
}

CartanDatum datum_from_json(const Json& j) {
  try {
    return validate_datum(j.at("C").get<std::vector<IntVec>>(), j.at("D").get<IntVec>());
  } catch (const nlohmann::json::exception& e) {
    throw MathError(Errc::Parse, std::string("datum JSON: ") + e.what());
  }
}

Orientation orientation_from_json(const CartanDatum& d, const Json& j) {
  Orientation o;
  try {
    for (const auto& p : j) o.insert({p.at(0).get<int>() - 1, p.at(1).get<int>() - 1});
  } catch (const nlohmann::json::exception& e) {
    throw MathError(Errc::Parse, std::string("Omega JSON: ") + e.what());
  }
  validate_orientation(d, o);
  return o;
}

Orientation parse_orientation(const CartanDatum& d, const std::string& s) {
  if (s.empty() || s == "default") return default_orientation(d);
  Orientation o;
  std::stringstream ss(s);
  std::string pair;
  while (std::getline(ss, pair, ';')) {
    const auto comma = pair.find(',');
    if (comma == std::string::npos) throw MathError(Errc::Parse, "orientation pair '" + pair + "' needs the form i,j");
    try {
      o.insert({std::stoi(pair.substr(0, comma)) - 1, std::stoi(pair.substr(comma + 1)) - 1});
    } catch (const std::exception&) {
      throw MathError(Errc::Parse, "orientation pair '" + pair + "' is not numeric");
    }
  }
  validate_orientation(d, o);
  return o;
}

std::vector<std::uint32_t> parse_primes(const std::string& s) {
  if (s.empty()) return default_primes();
  std::vector<std::uint32_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      const auto p = static_cast<std::uint32_t>(std::stoul(tok));
      if (!PrimeField::is_prime(p)) throw MathError(Errc::Parse, tok + " is not prime");
      out.push_back(p);
    } catch (const std::invalid_argument&) {
      throw MathError(Errc::Parse, "prime list entry '" + tok + "' is not a number");
    }
  }
  if (out.empty()) throw MathError(Errc::Parse, "empty prime list");
  return out;
}

template <class K>
Json module_to_json(const Module<K>& m) {
  Json j;
  j["field"] = m.field.name();
  j["algebra"] = m.algebra == Algebra::Pi ? "Pi" : "H";
  j["datum"] = datum_to_json(m.datum, m.omega);
  j["dims"] = m.dims;
  Json eps = Json::array();
  for (const auto& e : m.eps) eps.push_back(matrix_to_json(e));
  j["eps"] = eps;
  Json arrows = Json::array();
  for (std::size_t a = 0; a < m.slots.size(); ++a) {
    const auto& s = m.slots[a];
    arrows.push_back({{"i", s.i + 1},
                      {"j", s.j + 1},
                      {"k", s.k + 1},
                      {"reversed", s.reversed},
                      {"source", s.src + 1},
                      {"target", s.tgt + 1},
                      {"matrix", matrix_to_json(m.arrows[a])}});
  }
  j["arrows"] = arrows;
  return j;
}

Module<Rational> rational_module_from_json(const Json& j) {
  if (j.at("field").get<std::string>() != "QQ") throw MathError(Errc::Parse, "expected field QQ");
  return module_from_json(Rational(), j);
}

Module<PrimeField> prime_module_from_json(const Json& j) {
  const auto name = j.at("field").get<std::string>();
  if (name.rfind("GF(", 0) != 0 || name.back() != ')') throw MathError(Errc::Parse, "expected field GF(p)");
  return module_from_json(PrimeField(static_cast<std::uint32_t>(std::stoul(name.substr(3, name.size() - 4)))), j);
}

Json polynomial_to_json(const IntVec& rank, const Polynomial& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p) terms.push_back({{"e", vector_to_json(e)}, {"coeff", c.get_str()}});
  return {{"rank", vector_to_json(rank)}, {"terms", terms}};
}

Json counting_to_json(const CountingPolynomial& p) {
  Json coeffs = Json::array(), samples = Json::array();
  for (const auto& c : p.coeffs) coeffs.push_back(c.get_str());
  for (const auto& [q, v] : p.samples) samples.push_back({{"prime", q}, {"count", v.get_str()}});
  return {{"coeffs", coeffs}, {"degree_bound", p.degree_bound}, {"samples", samples}, {"euler", p.euler()}};
}

template Json module_to_json(const Module<Rational>&);
template Json module_to_json(const Module<PrimeField>&);

}  // namespace cartanrep
