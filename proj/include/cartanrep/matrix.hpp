#pragma once

#include <cassert>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cartanrep/field.hpp"

namespace cartanrep {

// Dense row-major matrix over an exact field K.
template <class K>
class Matrix {
 public:
  using Elem = typename K::Elem;

  Matrix() = default;
  Matrix(K field, std::size_t rows, std::size_t cols)
      : k_(field), rows_(rows), cols_(cols), a_(rows * cols, field.zero()) {}

  static Matrix identity(K field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
    return m;
  }

  const K& field() const { return k_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Elem& operator()(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return a_[i * cols_ + j];
  }
  const Elem& operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return a_[i * cols_ + j];
  }

  bool is_zero() const {
    for (const auto& x : a_)
      if (!k_.is_zero(x)) return false;
    return true;
  }

  Matrix transpose() const {
    Matrix t(k_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix b(k_, nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  Matrix column(std::size_t j) const { return block(0, j, rows_, 1); }

  Matrix columns(const std::vector<std::size_t>& idx) const {
    Matrix b(k_, rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) b(i, j) = (*this)(i, idx[j]);
    return b;
  }

  Matrix scaled(const Elem& s) const {
    Matrix r(*this);
    for (auto& x : r.a_) x = k_.mul(x, s);
    return r;
  }

  Matrix operator+(const Matrix& o) const {
    check_same_shape(o);
    Matrix r(*this);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = k_.add(a_[i], o.a_[i]);
    return r;
  }
  Matrix operator-(const Matrix& o) const {
    check_same_shape(o);
    Matrix r(*this);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = k_.sub(a_[i], o.a_[i]);
    return r;
  }
  Matrix operator-() const {
    Matrix r(*this);
    for (auto& x : r.a_) x = k_.neg(x);
    return r;
  }
  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product: shape mismatch");
    Matrix r(k_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t l = 0; l < cols_; ++l) {
        const Elem& x = (*this)(i, l);
        if (k_.is_zero(x)) continue;
        for (std::size_t j = 0; j < o.cols_; ++j)
          r(i, j) = k_.add(r(i, j), k_.mul(x, o(l, j)));
      }
    return r;
  }

  bool operator==(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (std::size_t i = 0; i < a_.size(); ++i)
      if (!k_.eq(a_[i], o.a_[i])) return false;
    return true;
  }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  const std::vector<Elem>& data() const { return a_; }

  std::string str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      os << (i ? ", [" : "[");
      for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << k_.str((*this)(i, j));
      os << "]";
    }
    os << "]";
    return os.str();
  }

 private:
  void check_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("matrix sum: shape mismatch");
  }

  K k_{};
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Elem> a_;
};

template <class K>
Matrix<K> hstack(const Matrix<K>& a, const Matrix<K>& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("hstack: row mismatch");
  Matrix<K> r(a.field(), a.rows(), a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(0, a.cols(), b);
  return r;
}

template <class K>
Matrix<K> vstack(const Matrix<K>& a, const Matrix<K>& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("vstack: column mismatch");
  Matrix<K> r(a.field(), a.rows() + b.rows(), a.cols());
  r.set_block(0, 0, a);
  r.set_block(a.rows(), 0, b);
  return r;
}

template <class K>
Matrix<K> block_diag(const Matrix<K>& a, const Matrix<K>& b) {
  Matrix<K> r(a.field(), a.rows() + b.rows(), a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(a.rows(), a.cols(), b);
  return r;
}

template <class K>
Matrix<K> power(const Matrix<K>& m, int k) {
  Matrix<K> r = Matrix<K>::identity(m.field(), m.rows());
  for (int i = 0; i < k; ++i) r = r * m;
  return r;
}

// Reduced row echelon form, in place. Returns pivot columns.
template <class K>
std::vector<std::size_t> rref_in_place(Matrix<K>& m) {
  const K& k = m.field();
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t sel = row;
    while (sel < m.rows() && k.is_zero(m(sel, col))) ++sel;
    if (sel == m.rows()) continue;
    if (sel != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(sel, j), m(row, j));
    const auto inv = k.inv(m(row, col));
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) = k.mul(m(row, j), inv);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || k.is_zero(m(i, col))) continue;
      const auto f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) = k.sub(m(i, j), k.mul(f, m(row, j)));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class K>
std::size_t rank(Matrix<K> m) {
  return rref_in_place(m).size();
}

// Columns form a basis of the null space {x : m x = 0}.
template <class K>
Matrix<K> kernel(const Matrix<K>& m) {
  Matrix<K> r = m;
  const auto pivots = rref_in_place(r);
  const K& k = m.field();
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  Matrix<K> basis(k, m.cols(), m.cols() - pivots.size());
  std::size_t b = 0;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    basis(free, b) = k.one();
    for (std::size_t i = 0; i < pivots.size(); ++i) basis(pivots[i], b) = k.neg(r(i, free));
    ++b;
  }
  return basis;
}

// Independent columns of m spanning its column space.
template <class K>
Matrix<K> column_basis(const Matrix<K>& m) {
  Matrix<K> r = m;
  const auto pivots = rref_in_place(r);
  return m.columns(pivots);
}

// Rows spanning the annihilator of the column space: x in span(m) iff ann * x == 0.
template <class K>
Matrix<K> annihilator(const Matrix<K>& m) {
  return kernel(m.transpose()).transpose();
}

// Standard basis vectors completing the column space of `u` to K^n.
template <class K>
Matrix<K> complement_basis(const Matrix<K>& u) {
  const K& k = u.field();
  const std::size_t n = u.rows();
  Matrix<K> aug = hstack(u, Matrix<K>::identity(k, n));
  const auto pivots = rref_in_place(aug);
  std::vector<std::size_t> extra;
  for (auto p : pivots)
    if (p >= u.cols()) extra.push_back(p - u.cols());
  return Matrix<K>::identity(k, n).columns(extra);
}

// Solves a x = b; nullopt if inconsistent.
template <class K>
std::optional<Matrix<K>> solve(const Matrix<K>& a, const Matrix<K>& b) {
  const K& k = a.field();
  Matrix<K> aug = hstack(a, b);
  const auto pivots = rref_in_place(aug);
  for (auto p : pivots)
    if (p >= a.cols()) return std::nullopt;
  Matrix<K> x(k, a.cols(), b.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) x(pivots[i], j) = aug(i, a.cols() + j);
  return x;
}

template <class K>
std::optional<Matrix<K>> inverse(const Matrix<K>& a) {
  if (a.rows() != a.cols()) return std::nullopt;
  if (rank(a) != a.rows()) return std::nullopt;
  return solve(a, Matrix<K>::identity(a.field(), a.rows()));
}

template <class K>
bool is_invertible(const Matrix<K>& a) {
  return a.rows() == a.cols() && rank(a) == a.rows();
}

// Column basis of span(a) ∩ span(b).
template <class K>
Matrix<K> intersect(const Matrix<K>& a, const Matrix<K>& b) {
  const Matrix<K> ker = kernel(hstack(a, -b));
  const Matrix<K> coeff = ker.block(0, 0, a.cols(), ker.cols());
  return column_basis(a * coeff);
}

// Is every column of `v` contained in span(u)?
template <class K>
bool contains(const Matrix<K>& u, const Matrix<K>& v) {
  if (v.cols() == 0) return true;
  if (u.cols() == 0) return v.is_zero();
  return rank(hstack(u, v)) == rank(u);
}

// vec(X) as a column, column-major stacking of X.
template <class K>
Matrix<K> vec(const Matrix<K>& x) {
  Matrix<K> v(x.field(), x.rows() * x.cols(), 1);
  for (std::size_t j = 0; j < x.cols(); ++j)
    for (std::size_t i = 0; i < x.rows(); ++i) v(j * x.rows() + i, 0) = x(i, j);
  return v;
}

template <class K>
Matrix<K> unvec(const Matrix<K>& v, std::size_t rows, std::size_t cols, std::size_t col = 0) {
  Matrix<K> x(v.field(), rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) x(i, j) = v(j * rows + i, col);
  return x;
}

}  // namespace cartanrep
