#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cartanrep/errors.hpp"

namespace cartanrep {

using IntVec = std::vector<std::int64_t>;

// Small dense integer matrix for Cartan data and lattice maps.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}
  static IntMatrix from_rows(const std::vector<IntVec>& rows);
  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::int64_t& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  IntMatrix operator*(const IntMatrix& o) const;
  IntVec operator*(const IntVec& v) const;
  IntMatrix operator-(const IntMatrix& o) const;
  IntMatrix transpose() const;
  bool operator==(const IntMatrix& o) const = default;
  std::vector<IntVec> to_rows() const;
  std::string str() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> a_;
};

// Vertices are 0-based internally; all external formats are 1-based.
struct CartanDatum {
  int n = 0;
  IntMatrix C;
  IntVec D;
  IntMatrix g;  // g(i,j) = gcd(c_ij, c_ji), gcd(0,0) = 0

  std::int64_t c(int i, int j) const { return C(i, j); }
  bool adjacent(int i, int j) const { return i != j && C(i, j) < 0; }
  bool operator==(const CartanDatum& o) const { return C == o.C && D == o.D; }
};

// (i,j) in Omega means g_ij arrows j -> i in the quiver Q°.
using Orientation = std::set<std::pair<int, int>>;

using RootVector = IntVec;

struct WeylWord {
  std::vector<int> letters;
  bool reduced = false;
};

struct FormData {
  IntMatrix gram_sym;
  IntMatrix gram_euler;
  IntMatrix R;
  IntMatrix coxeter;
};

struct OrbitResult {
  std::set<RootVector> roots;
  bool truncated = false;
};

struct DynkinInfo {
  bool dynkin = false;
  std::vector<std::string> components;  // e.g. "B2"; "?" when unrecognized
};

struct AdmissibleWords {
  WeylWord coxeter;
  std::optional<WeylWord> w0;
};

struct BetaGamma {
  std::vector<RootVector> beta;
  std::vector<RootVector> gamma;
};

CartanDatum validate_datum(const std::vector<IntVec>& C, const IntVec& D);

// Standard examples used across tests and the CLI.
namespace data {
CartanDatum A1();
CartanDatum A2();
CartanDatum A3();
CartanDatum B2();  // C = [[2,-1],[-2,2]], D = (2,1)
CartanDatum B3();  // D = (2,2,1)
CartanDatum C3();
CartanDatum G2();  // C = [[2,-1],[-3,2]], D = (3,1)
CartanDatum by_name(const std::string& name);
}  // namespace data

CartanDatum scale_symmetrizer(const CartanDatum& d, std::int64_t k);

std::int64_t height(const RootVector& a);
RootVector simple_root(int n, int i);
RootVector reflect_root(const CartanDatum& d, int i, const RootVector& a);
IntMatrix reflection_matrix(const CartanDatum& d, int i);
OrbitResult weyl_orbit(const CartanDatum& d, const RootVector& a, std::int64_t height_bound);
DynkinInfo is_dynkin(const CartanDatum& d);
std::vector<RootVector> positive_roots(const CartanDatum& d);
std::vector<RootVector> positive_roots_by_orbit(const CartanDatum& d);
bool fundamental_region_check(const CartanDatum& d, const RootVector& a);

std::int64_t sym_form(const CartanDatum& d, const RootVector& a, const RootVector& b);
std::int64_t euler_form(const CartanDatum& d, const Orientation& o, const RootVector& a,
                        const RootVector& b);

void validate_orientation(const CartanDatum& d, const Orientation& o);
bool is_sink(const Orientation& o, int k);
bool is_source(const Orientation& o, int k);
Orientation reflect_orientation(const CartanDatum& d, const Orientation& o, int i);
std::vector<Orientation> all_orientations(const CartanDatum& d);
// Orientation with every edge pointing from the larger to the smaller index.
Orientation default_orientation(const CartanDatum& d);

AdmissibleWords admissible_words(const CartanDatum& d, const Orientation& o);
BetaGamma beta_gamma_sequences(const CartanDatum& d, const WeylWord& w);
FormData forms(const CartanDatum& d, const Orientation& o);
std::int64_t kostant_count(const CartanDatum& d, const RootVector& r);

}  // namespace cartanrep
