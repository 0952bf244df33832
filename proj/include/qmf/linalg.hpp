#pragma once

// Small dense exact matrices: row reduction, kernels, characteristic polynomials.

#include <qmf/exactnum.hpp>

#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace qmf {

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }
inline bool is_zero(const FieldElement& x) { return x.is_zero(); }

template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), T(0)) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  T& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  const T& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * cols_ + j)]; }

  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.cols_ != y.rows_) throw std::invalid_argument("matrix shape mismatch");
    Matrix r(x.rows_, y.cols_);
    for (int i = 0; i < x.rows_; ++i)
      for (int k = 0; k < x.cols_; ++k) {
        if (is_zero(x(i, k))) continue;
        for (int j = 0; j < y.cols_; ++j) r(i, j) += x(i, k) * y(k, j);
      }
    return r;
  }
  friend Matrix operator-(Matrix x, const Matrix& y) {
    for (std::size_t i = 0; i < x.data_.size(); ++i) x.data_[i] -= y.data_[i];
    return x;
  }
  friend bool operator==(const Matrix& x, const Matrix& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.data_ == y.data_;
  }

  std::string str() const {
    std::string s;
    for (int i = 0; i < rows_; ++i) {
      s += "[";
      for (int j = 0; j < cols_; ++j) {
        if (j) s += ", ";
        if constexpr (std::is_same_v<T, Rational>) s += to_string((*this)(i, j));
        else s += (*this)(i, j).str();
      }
      s += "]\n";
    }
    return s;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

/// Reduced row echelon form in place; returns pivot columns.
template <typename T>
std::vector<int> rref(Matrix<T>& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int sel = -1;
    for (int i = row; i < m.rows(); ++i)
      if (!is_zero(m(i, col))) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    if (sel != row)
      for (int j = 0; j < m.cols(); ++j) std::swap(m(sel, j), m(row, j));
    const T inv = T(1) / m(row, col);
    for (int j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == row || is_zero(m(i, col))) continue;
      const T f = m(i, col);
      for (int j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <typename T>
int rank(Matrix<T> m) {
  return static_cast<int>(rref(m).size());
}

/// Basis of the right kernel {x : m x = 0}.
template <typename T>
std::vector<std::vector<T>> kernel(Matrix<T> m) {
  const std::vector<int> pivots = rref(m);
  std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
  for (int p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<std::vector<T>> basis;
  for (int f = 0; f < m.cols(); ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    std::vector<T> v(static_cast<std::size_t>(m.cols()), T(0));
    v[static_cast<std::size_t>(f)] = T(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[static_cast<std::size_t>(pivots[r])] = -m(static_cast<int>(r), f);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Solves m x = b; throws when inconsistent or underdetermined.
template <typename T>
std::vector<T> solve(const Matrix<T>& m, const std::vector<T>& b) {
  Matrix<T> aug(m.rows(), m.cols() + 1);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[static_cast<std::size_t>(i)];
  }
  const std::vector<int> pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == m.cols()) throw std::domain_error("inconsistent linear system");
  if (static_cast<int>(pivots.size()) != m.cols()) throw std::domain_error("singular linear system");
  std::vector<T> x(static_cast<std::size_t>(m.cols()));
  for (int i = 0; i < m.cols(); ++i) x[static_cast<std::size_t>(i)] = aug(i, m.cols());
  return x;
}

/// det(X I - m) by the Faddeev-LeVerrier recurrence.
inline PolyQ charpoly(const Matrix<Rational>& a) {
  const int n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("charpoly of a non-square matrix");
  std::vector<Rational> c(static_cast<std::size_t>(n) + 1);
  c[static_cast<std::size_t>(n)] = 1;
  Matrix<Rational> mk(n, n);
  for (int k = 1; k <= n; ++k) {
    Matrix<Rational> next = a * mk;
    for (int i = 0; i < n; ++i) next(i, i) += c[static_cast<std::size_t>(n - k + 1)];
    mk = std::move(next);
    Matrix<Rational> am = a * mk;
    Rational tr = 0;
    for (int i = 0; i < n; ++i) tr += am(i, i);
    c[static_cast<std::size_t>(n - k)] = -tr / k;
  }
  return PolyQ(std::move(c));
}

inline Matrix<Rational> rational_matrix(const Matrix<FieldElement>& m) {
  Matrix<Rational> r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).rational();
  return r;
}

inline Matrix<FieldElement> field_matrix(const Matrix<Rational>& m) {
  Matrix<FieldElement> r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = FieldElement(m(i, j));
  return r;
}

}  // namespace qmf
