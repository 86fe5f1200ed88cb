#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hfj/error.hpp"
#include "hfj/field.hpp"

namespace hfj {

/// Dense rows x cols matrix over E, row-major.
class Matrix {
 public:
  Matrix(FieldTag tag, std::size_t rows, std::size_t cols)
      : tag_(tag), rows_(rows), cols_(cols), data_(rows * cols, FieldElement(tag)) {}

  static Matrix identity(FieldTag tag, std::size_t n) {
    Matrix m(tag, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = FieldElement(tag, 1L);
    return m;
  }

  static Matrix from_rows(FieldTag tag, const std::vector<std::vector<FieldElement>>& rows) {
    const std::size_t r = rows.size(), c = r ? rows.front().size() : 0;
    Matrix m(tag, r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw DomainError("ragged matrix rows");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  /// Column vector from entries.
  static Matrix column(FieldTag tag, const std::vector<FieldElement>& entries) {
    Matrix m(tag, entries.size(), 1);
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, 0) = entries[i];
    return m;
  }

  static Matrix scalar(FieldTag tag, const FieldElement& x) {
    Matrix m(tag, 1, 1);
    m(0, 0) = x;
    return m;
  }

  const FieldTag& tag() const noexcept { return tag_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  FieldElement& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const FieldElement& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<FieldElement>& entries() const noexcept { return data_; }

  Matrix adjoint() const {
    Matrix out(tag_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j).conj();
    return out;
  }

  Matrix transpose() const {
    Matrix out(tag_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw DomainError("block out of range");
    Matrix out(tag_, nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
    return out;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw DomainError("block out of range");
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  bool is_zero() const {
    for (const auto& x : data_)
      if (!x.is_zero()) return false;
    return true;
  }
  bool is_integral() const {
    for (const auto& x : data_)
      if (!x.is_integral()) return false;
    return true;
  }
  bool is_dual_integral() const {
    for (const auto& x : data_)
      if (!x.is_dual_integral()) return false;
    return true;
  }

  FieldElement trace() const {
    if (!is_square()) throw DomainError("trace of non-square matrix");
    FieldElement t(tag_);
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(const FieldElement& x) {
    for (auto& e : data_) e *= x;
    return *this;
  }
  Matrix& operator*=(const Rational& q) {
    for (auto& e : data_) e *= q;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator-(Matrix a) {
    for (auto& e : a.data_) e = -e;
    return a;
  }
  friend Matrix operator*(Matrix a, const FieldElement& x) { return a *= x; }
  friend Matrix operator*(const FieldElement& x, Matrix a) { return a *= x; }
  friend Matrix operator*(Matrix a, const Rational& q) { return a *= q; }
  friend Matrix operator*(const Rational& q, Matrix a) { return a *= q; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DomainError("matrix size mismatch in product");
    if (!(a.tag_ == b.tag_)) throw DomainError("field mismatch in matrix product");
    Matrix out(a.tag_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const FieldElement& x = a(i, k);
        if (x.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (!b(k, j).is_zero()) out(i, j) += x * b(k, j);
      }
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.tag_ == b.tag_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  /// Shape first, then entries row-major.
  friend std::strong_ordering operator<=>(const Matrix& a, const Matrix& b) {
    if (auto c = a.rows_ <=> b.rows_; c != 0) return c;
    if (auto c = a.cols_ <=> b.cols_; c != 0) return c;
    for (std::size_t i = 0; i < a.data_.size(); ++i)
      if (auto c = a.data_[i] <=> b.data_[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }

 private:
  void check_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DomainError("matrix size mismatch");
    if (!(tag_ == o.tag_)) throw DomainError("field mismatch in matrix arithmetic");
  }

  FieldTag tag_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<FieldElement> data_;
};

/// Determinant by Gaussian elimination over E.
inline FieldElement determinant(const Matrix& m) {
  if (!m.is_square()) throw DomainError("determinant of non-square matrix");
  const std::size_t n = m.rows();
  Matrix a = m;
  FieldElement det(m.tag(), 1L);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a(piv, col).is_zero()) ++piv;
    if (piv == n) return FieldElement(m.tag());
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    const FieldElement inv = a(col, col).inverse();
    for (std::size_t i = col + 1; i < n; ++i) {
      if (a(i, col).is_zero()) continue;
      const FieldElement f = a(i, col) * inv;
      for (std::size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
    }
  }
  return det;
}

/// Inverse over E, or nullopt when singular.
inline std::optional<Matrix> inverse(const Matrix& m) {
  if (!m.is_square()) throw DomainError("inverse of non-square matrix");
  const std::size_t n = m.rows();
  Matrix a = m, inv = Matrix::identity(m.tag(), n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a(piv, col).is_zero()) ++piv;
    if (piv == n) return std::nullopt;
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(a(piv, j), a(col, j));
      std::swap(inv(piv, j), inv(col, j));
    }
    const FieldElement p = a(col, col).inverse();
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) *= p;
      inv(col, j) *= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a(i, col).is_zero()) continue;
      const FieldElement f = a(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

/// Block matrix [[a, b], [c, d]].
inline Matrix block_matrix(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d) {
  if (a.rows() != b.rows() || c.rows() != d.rows() || a.cols() != c.cols() || b.cols() != d.cols())
    throw DomainError("incompatible blocks");
  Matrix out(a.tag(), a.rows() + c.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(0, a.cols(), b);
  out.set_block(a.rows(), 0, c);
  out.set_block(a.rows(), a.cols(), d);
  return out;
}

inline Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw DomainError("hstack row mismatch");
  Matrix out(a.tag(), a.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(0, a.cols(), b);
  return out;
}

inline Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw DomainError("vstack column mismatch");
  Matrix out(a.tag(), a.rows() + b.rows(), a.cols());
  out.set_block(0, 0, a);
  out.set_block(a.rows(), 0, b);
  return out;
}

/// "[a,b;c,d]": rows separated by ';', entries by ','. The 0x0 matrix is "[]".
inline std::string to_string(const Matrix& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) s += ';';
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) s += ',';
      s += to_string(m(i, j));
    }
  }
  return s + "]";
}

inline Matrix parse_matrix(FieldTag tag, std::string_view text) {
  if (text.size() < 2 || text.front() != '[' || text.back() != ']')
    throw ParseError("matrix must be enclosed in brackets: '" + std::string(text) + "'");
  const std::string_view body = text.substr(1, text.size() - 2);
  if (body.empty()) return Matrix(tag, 0, 0);
  std::vector<std::vector<FieldElement>> rows;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = body.find(';', start);
    const std::string_view row = body.substr(start, end == std::string_view::npos ? body.npos : end - start);
    std::vector<FieldElement> entries;
    std::size_t rs = 0;
    while (true) {
      const std::size_t re = row.find(',', rs);
      entries.push_back(parse_field_element(tag, row.substr(rs, re == std::string_view::npos ? row.npos : re - rs)));
      if (re == std::string_view::npos) break;
      rs = re + 1;
    }
    rows.push_back(std::move(entries));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  try {
    return Matrix::from_rows(tag, rows);
  } catch (const DomainError& e) {
    throw ParseError(std::string(e.what()) + " in '" + std::string(text) + "'");
  }
}

}  // namespace hfj
