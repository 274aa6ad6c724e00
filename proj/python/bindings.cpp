#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cartanrep/cluster.hpp"
#include "cartanrep/functors.hpp"
#include "cartanrep/grassmann.hpp"
#include "cartanrep/io.hpp"
#include "cartanrep/pimod.hpp"

namespace py = pybind11;
using namespace cartanrep;

namespace {

using Pairs = std::vector<std::pair<int, int>>;
using QModule = Module<Rational>;

Orientation to_orientation(const CartanDatum& d, const std::optional<Pairs>& omega) {
  if (!omega) return default_orientation(d);
  Orientation o;
  for (const auto& [i, j] : *omega) o.insert({i - 1, j - 1});
  validate_orientation(d, o);
  return o;
}

Pairs from_orientation(const Orientation& o) {
  Pairs out;
  for (const auto& [i, j] : o) out.emplace_back(i + 1, j + 1);
  return out;
}

std::vector<IntVec> rows(const IntMatrix& m) { return m.to_rows(); }

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Locally free modules over generalized preprojective algebras";

  static py::exception<MathError> math_error(m, "MathError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const MathError& e) {
      math_error(e.what());
    }
  });

  py::class_<CartanDatum>(m, "Datum")
      .def(py::init([](const std::vector<IntVec>& C, const IntVec& D) { return validate_datum(C, D); }),
           py::arg("C"), py::arg("D"))
      .def_static("named", &data::by_name)
      .def_readonly("n", &CartanDatum::n)
      .def_property_readonly("C", [](const CartanDatum& d) { return rows(d.C); })
      .def_readonly("D", &CartanDatum::D)
      .def("scaled", &scale_symmetrizer)
      .def("__repr__", [](const CartanDatum& d) {
        return "Datum(C=" + Json(d.C.to_rows()).dump() + ", D=" + Json(d.D).dump() + ")";
      });

  m.def("positive_roots", &positive_roots);
  m.def("positive_roots_by_orbit", &positive_roots_by_orbit);
  m.def("is_dynkin", [](const CartanDatum& d) { return is_dynkin(d).dynkin; });
  m.def("sym_form", &sym_form);
  m.def("euler_form", [](const CartanDatum& d, const IntVec& a, const IntVec& b, std::optional<Pairs> omega) {
    return euler_form(d, to_orientation(d, omega), a, b);
  }, py::arg("d"), py::arg("a"), py::arg("b"), py::arg("omega") = py::none());
  m.def("default_orientation", [](const CartanDatum& d) { return from_orientation(default_orientation(d)); });
  m.def("all_orientations", [](const CartanDatum& d) {
    std::vector<Pairs> out;
    for (const auto& o : all_orientations(d)) out.push_back(from_orientation(o));
    return out;
  });
  m.def("forms", [](const CartanDatum& d, std::optional<Pairs> omega) {
    const auto f = forms(d, to_orientation(d, omega));
    py::dict out;
    out["gram_sym"] = rows(f.gram_sym);
    out["gram_euler"] = rows(f.gram_euler);
    out["R"] = rows(f.R);
    out["coxeter"] = rows(f.coxeter);
    return out;
  }, py::arg("d"), py::arg("omega") = py::none());
  m.def("w0_word", [](const CartanDatum& d, std::optional<Pairs> omega) {
    const auto w = admissible_words(d, to_orientation(d, omega)).w0;
    if (!w) throw MathError(Errc::NotDynkin, "w0 requested for a non-Dynkin datum");
    std::vector<int> out;
    for (int k : w->letters) out.push_back(k + 1);
    return out;
  }, py::arg("d"), py::arg("omega") = py::none());

  py::class_<QModule>(m, "Module")
      .def_readonly("dims", &QModule::dims)
      .def_property_readonly("rank", [](const QModule& x) { return is_locally_free(x); })
      .def_property_readonly("is_pi", [](const QModule& x) { return x.algebra == Algebra::Pi; })
      .def("relations_hold", [](const QModule& x) { return check_relations(x).empty(); })
      .def("to_json", [](const QModule& x) { return to_python(module_to_json(x)); })
      .def_static("from_json", [](const std::string& s) { return rational_module_from_json(Json::parse(s)); });

  m.def("generalized_simple", [](const CartanDatum& d, int i, std::optional<Pairs> omega, bool pi) {
    return generalized_simple(Rational(), d, to_orientation(d, omega), i - 1, pi ? Algebra::Pi : Algebra::H);
  }, py::arg("d"), py::arg("i"), py::arg("omega") = py::none(), py::arg("pi") = false);
  m.def("random_locally_free", [](const CartanDatum& d, const IntVec& r, std::uint64_t seed, std::optional<Pairs> omega) {
    return random_locally_free(Rational(), d, to_orientation(d, omega), r, seed);
  }, py::arg("d"), py::arg("rank"), py::arg("seed"), py::arg("omega") = py::none());
  m.def("root_modules", [](const CartanDatum& d, std::optional<Pairs> omega) {
    return all_root_modules(Rational(), d, to_orientation(d, omega)).modules;
  }, py::arg("d"), py::arg("omega") = py::none());
  m.def("hom_dim", [](const QModule& a, const QModule& b) { return hom_dim(a, b); });
  m.def("ext1_dim", [](const QModule& a, const QModule& b) { return ext1_dim(a, b); });
  m.def("is_indecomposable", &is_indecomposable);
  m.def("is_isomorphic", [](const QModule& a, const QModule& b) { return is_isomorphic(a, b); });
  m.def("tau", [](const QModule& x) { return tau(x); });
  m.def("tau_minus", [](const QModule& x) { return tau_minus(x); });

  m.def("random_pi_module", [](const CartanDatum& d, const IntVec& r, std::uint64_t seed, std::optional<Pairs> omega) {
    return random_pi_module(Rational(), d, to_orientation(d, omega), r, seed);
  }, py::arg("d"), py::arg("rank"), py::arg("seed"), py::arg("omega") = py::none());
  m.def("random_E_filtered", [](const CartanDatum& d, const std::vector<int>& word, std::uint64_t seed,
                                std::optional<Pairs> omega) {
    std::vector<int> w;
    for (int i : word) w.push_back(i - 1);
    return random_E_filtered(Rational(), d, to_orientation(d, omega), w, seed);
  }, py::arg("d"), py::arg("word"), py::arg("seed"), py::arg("omega") = py::none());
  m.def("hom_pi", [](const QModule& a, const QModule& b) { return hom_pi(a, b); });
  m.def("ext1_pi", [](const QModule& a, const QModule& b) { return ext1_pi(a, b); });
  m.def("is_E_filtered", [](const QModule& x) { return is_E_filtered(x).filtered; });
  m.def("is_crystal", [](const QModule& x) { return is_crystal_module(x); });

  m.def("f_polynomial", [](const QModule& x) {
    const auto r = is_locally_free(x);
    if (!r) throw MathError(Errc::NotLocallyFree, "F-polynomial needs a locally free module");
    return to_python(polynomial_to_json(*r, f_polynomial(integral_family(x), *r)));
  });
  m.def("g_vector", [](const CartanDatum& d, const IntVec& r, std::optional<Pairs> omega) {
    return g_vector(d, to_orientation(d, omega), r);
  }, py::arg("d"), py::arg("rank"), py::arg("omega") = py::none());
  m.def("serre_value", [](const QModule& x, int i, int j) {
    const auto r = is_locally_free(x);
    if (!r) throw MathError(Errc::NotLocallyFree, "Serre evaluation needs a locally free module");
    return theta_eval(serre_combination(x.datum, i - 1, j - 1), integral_family(x), *r).get_str();
  });
  m.def("cluster_match", [](const CartanDatum& d, std::optional<Pairs> omega) {
    const auto o = to_orientation(d, omega);
    const auto t = all_root_modules(Rational(), d, o);
    std::vector<ClusterVariable> side;
    for (std::size_t k = 0; k < t.modules.size(); ++k)
      side.push_back({f_polynomial(integral_family(t.modules[k]), t.beta[k]), g_vector(d, o, t.beta[k])});
    const auto r = calibrated_match(d, o, side);
    py::dict out;
    out["matched"] = r.matched;
    out["total"] = r.total;
    out["sign"] = r.sign;
    return out;
  }, py::arg("d"), py::arg("omega") = py::none());
}
