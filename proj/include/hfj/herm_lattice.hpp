#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hfj/error.hpp"
#include "hfj/field.hpp"
#include "hfj/lattice.hpp"
#include "hfj/matrix.hpp"
#include "hfj/rational.hpp"

namespace hfj {

/// Square Hermitian matrix over E. The canonical order compares size, then trace, then
/// entries row-major; it is the enumeration and file order used everywhere.
class HermMatrix {
 public:
  explicit HermMatrix(Matrix m) : m_(std::move(m)) {
    if (!m_.is_square()) throw DomainError("Hermitian matrix must be square");
    for (std::size_t i = 0; i < m_.rows(); ++i)
      for (std::size_t j = i; j < m_.rows(); ++j)
        if (!(m_(j, i) == m_(i, j).conj()))
          throw DomainError("matrix is not Hermitian: " + to_string(m_));
  }

  static HermMatrix zero(FieldTag tag, std::size_t n) { return HermMatrix(Matrix(tag, n, n)); }
  static HermMatrix identity(FieldTag tag, std::size_t n) { return HermMatrix(Matrix::identity(tag, n)); }
  static HermMatrix diagonal(FieldTag tag, const std::vector<Rational>& diag) {
    Matrix m(tag, diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = FieldElement(tag, diag[i]);
    return HermMatrix(std::move(m));
  }
  static HermMatrix scalar(FieldTag tag, const Rational& x) { return diagonal(tag, {x}); }

  const FieldTag& tag() const noexcept { return m_.tag(); }
  std::size_t size() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  const FieldElement& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  Rational trace() const { return size() ? m_.trace().a() : Rational(0); }
  Rational determinant() const { return size() ? hfj::determinant(m_).a() : Rational(1); }

  /// Rational-integer diagonal and off-diagonal entries in O_E^#.
  bool is_semi_integral() const {
    for (std::size_t i = 0; i < size(); ++i) {
      if (!is_integer(m_(i, i).a())) return false;
      for (std::size_t j = i + 1; j < size(); ++j)
        if (!m_(i, j).is_dual_integral()) return false;
    }
    return true;
  }

  HermMatrix principal(const std::vector<std::size_t>& idx) const {
    Matrix out(tag(), idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = m_(idx[i], idx[j]);
    return HermMatrix(std::move(out));
  }

  friend HermMatrix operator+(const HermMatrix& x, const HermMatrix& y) { return HermMatrix(x.m_ + y.m_); }
  friend HermMatrix operator-(const HermMatrix& x, const HermMatrix& y) { return HermMatrix(x.m_ - y.m_); }
  friend HermMatrix operator*(const Rational& q, const HermMatrix& x) { return HermMatrix(q * x.m_); }

  friend bool operator==(const HermMatrix& x, const HermMatrix& y) { return x.m_ == y.m_; }
  friend std::strong_ordering operator<=>(const HermMatrix& x, const HermMatrix& y) {
    if (auto c = x.size() <=> y.size(); c != 0) return c;
    if (int c = cmp(x.trace(), y.trace()); c != 0)
      return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    return x.m_ <=> y.m_;
  }

 private:
  Matrix m_;
};

inline std::string to_string(const HermMatrix& t) { return to_string(t.matrix()); }

inline HermMatrix parse_herm_matrix(FieldTag tag, std::string_view text) {
  try {
    return HermMatrix(parse_matrix(tag, text));
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

/// Positive semidefinite: every principal minor is >= 0.
inline bool is_psd(const HermMatrix& t) {
  const std::size_t n = t.size();
  for (std::size_t i = 0; i < n; ++i)
    if (t(i, i).a() < 0) return false;
  for (unsigned long mask = 1; mask < (1UL << n); ++mask) {
    if (__builtin_popcountl(mask) < 2) continue;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1UL << i)) idx.push_back(i);
    if (t.principal(idx).determinant() < 0) return false;
  }
  return true;
}

/// Positive definite: every leading principal minor is > 0.
inline bool is_pd(const HermMatrix& t) {
  for (std::size_t k = 1; k <= t.size(); ++k) {
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (t.principal(idx).determinant() <= 0) return false;
  }
  return true;
}

/// Element of GL_g(O_E): integral entries and a unit determinant.
class UnitMatrix {
 public:
  explicit UnitMatrix(Matrix m) : m_(std::move(m)) {
    if (!m_.is_square()) throw DomainError("unit matrix must be square");
    if (!m_.is_integral()) throw DomainError("unit matrix must have entries in O_E: " + to_string(m_));
    if (hfj::determinant(m_).norm() != 1) throw DomainError("matrix is not invertible over O_E: " + to_string(m_));
  }

  static UnitMatrix identity(FieldTag tag, std::size_t n) { return UnitMatrix(Matrix::identity(tag, n)); }
  /// Permutation matrix with P e_j = e_{perm[j]}.
  static UnitMatrix permutation(FieldTag tag, const std::vector<std::size_t>& perm) {
    Matrix m(tag, perm.size(), perm.size());
    for (std::size_t j = 0; j < perm.size(); ++j) m(perm.at(j), j) = FieldElement(tag, 1L);
    return UnitMatrix(std::move(m));
  }
  static UnitMatrix transposition(FieldTag tag, std::size_t n, std::size_t i, std::size_t j) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::swap(perm.at(i), perm.at(j));
    return permutation(tag, perm);
  }
  /// I + x E_ij, i != j.
  static UnitMatrix elementary(FieldTag tag, std::size_t n, std::size_t i, std::size_t j, const FieldElement& x) {
    if (i == j) throw DomainError("elementary matrix needs i != j");
    Matrix m = Matrix::identity(tag, n);
    m(i, j) = x;
    return UnitMatrix(std::move(m));
  }
  static UnitMatrix diagonal_unit(FieldTag tag, std::size_t n, std::size_t i, const FieldElement& unit) {
    Matrix m = Matrix::identity(tag, n);
    m(i, i) = unit;
    return UnitMatrix(std::move(m));
  }

  const FieldTag& tag() const noexcept { return m_.tag(); }
  std::size_t size() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  FieldElement det() const { return hfj::determinant(m_); }
  UnitMatrix inverse() const { return UnitMatrix(*hfj::inverse(m_)); }

  friend UnitMatrix operator*(const UnitMatrix& u, const UnitMatrix& v) { return UnitMatrix(u.m_ * v.m_); }
  friend bool operator==(const UnitMatrix& u, const UnitMatrix& v) { return u.m_ == v.m_; }

 private:
  Matrix m_;
};

/// Generators of GL_g(O_E): unit-diagonal matrices, transpositions, and I + beta E_ij for beta
/// in the integral basis. Suffices because O_E is Euclidean.
inline std::vector<UnitMatrix> gl_generators(FieldTag tag, std::size_t g) {
  std::vector<UnitMatrix> out;
  const FieldElement eps = unit_generator(tag);
  for (std::size_t i = 0; i < g; ++i) out.push_back(UnitMatrix::diagonal_unit(tag, g, i, eps));
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = i + 1; j < g; ++j) out.push_back(UnitMatrix::transposition(tag, g, i, j));
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j) {
      if (i == j) continue;
      out.push_back(UnitMatrix::elementary(tag, g, i, j, FieldElement(tag, 1L)));
      out.push_back(UnitMatrix::elementary(tag, g, i, j, FieldElement::omega(tag)));
    }
  return out;
}

/// u* t u.
inline HermMatrix gl_action(const UnitMatrix& u, const HermMatrix& t) {
  if (u.size() != t.size()) throw DomainError("size mismatch in GL action");
  return HermMatrix(u.matrix().adjoint() * t.matrix() * u.matrix());
}

/// Elements of O_E^# of norm <= bound, in (a, b) order.
inline std::vector<FieldElement> dual_elements_up_to_norm(FieldTag tag, const Rational& bound) {
  const FieldElement root = FieldElement::sqrt_discriminant(tag);
  std::vector<FieldElement> out;
  for (const auto& y : integers_near(FieldElement(tag), bound * Rational(-tag.discriminant())))
    out.push_back(y / root);
  std::sort(out.begin(), out.end());
  return out;
}

/// All semi-integral PSD g x g matrices with trace <= trace_bound, each once, in canonical order.
inline std::vector<HermMatrix> enumerate_semi_integral(FieldTag tag, std::size_t g, long trace_bound) {
  std::vector<HermMatrix> out;
  if (trace_bound < 0) return out;
  std::vector<long> diag(g, 0);
  Matrix cur(tag, g, g);
  std::vector<std::pair<std::size_t, std::size_t>> offdiag;
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = i + 1; j < g; ++j) offdiag.emplace_back(i, j);

  std::function<void(std::size_t)> fill_off = [&](std::size_t k) {
    if (k == offdiag.size()) {
      HermMatrix t(cur);
      if (is_psd(t)) out.push_back(std::move(t));
      return;
    }
    const auto [i, j] = offdiag[k];
    for (const auto& x : dual_elements_up_to_norm(tag, Rational(diag[i] * diag[j]))) {
      cur(i, j) = x;
      cur(j, i) = x.conj();
      fill_off(k + 1);
    }
    cur(i, j) = FieldElement(tag);
    cur(j, i) = FieldElement(tag);
  };
  std::function<void(std::size_t, long)> fill_diag = [&](std::size_t i, long left) {
    if (i == g) {
      fill_off(0);
      return;
    }
    for (long v = 0; v <= left; ++v) {
      diag[i] = v;
      cur(i, i) = FieldElement(tag, v);
      fill_diag(i + 1, left - v);
    }
  };
  fill_diag(0, trace_bound);
  std::sort(out.begin(), out.end());
  return out;
}

/// min of w* t w over nonzero w in O_E^g. Degenerate PSD t always represents 0: a kernel vector
/// over E scales into O_E^g.
inline Rational min_represented(const HermMatrix& t) {
  if (t.size() == 0) throw DomainError("min_represented of empty matrix");
  if (!is_pd(t)) {
    if (!is_psd(t)) throw DomainError("min_represented needs a PSD matrix: " + to_string(t));
    return 0;
  }
  Rational best = t(0, 0).a();
  for (std::size_t i = 1; i < t.size(); ++i) best = std::min(best, Rational(t(i, i).a()));
  const Matrix origin(t.tag(), t.size(), 1);
  for_each_short_vector(t.matrix(), origin, best, [&](const Matrix&, const Rational& value) {
    if (value > 0 && value < best) best = value;
  });
  return best;
}

// ---------------------------------------------------------------------------
// Cosets Delta_g(m) = Mat_{g,l}(O_E^#) / Mat_{g,l}(O_E) m

namespace detail {

using IntMatrix = std::vector<std::vector<Integer>>;

// Row-style Hermite normal form of a nonsingular square integer matrix: upper triangular,
// positive diagonal, entries above the diagonal reduced into [0, h_jj).
inline IntMatrix hermite_normal_form(IntMatrix a) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      Integer g, x, y;
      mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a[col][col].get_mpz_t(), a[r][col].get_mpz_t());
      const Integer p = a[col][col] / g, q = a[r][col] / g;
      for (std::size_t j = 0; j < n; ++j) {
        const Integer top = x * a[col][j] + y * a[r][j];
        const Integer bottom = q * a[col][j] - p * a[r][j];
        a[col][j] = top;
        a[r][j] = bottom;
      }
    }
    if (a[col][col] == 0) throw DomainError("coset lattice is singular");
    if (a[col][col] < 0)
      for (auto& e : a[col]) e = -e;
    for (std::size_t r = 0; r < col; ++r) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), a[r][col].get_mpz_t(), a[col][col].get_mpz_t());
      if (q != 0)
        for (std::size_t j = 0; j < n; ++j) a[r][j] -= q * a[col][j];
    }
  }
  return a;
}

}  // namespace detail

/// The row lattice Mat_{1,l}(O_E) m inside Mat_{1,l}(O_E^#), in coordinates of sqrt(D) * row.
class CosetLattice {
 public:
  explicit CosetLattice(const HermMatrix& m) : m_(m) {
    if (!m.is_semi_integral() || !is_pd(m)) throw DomainError("coset index must be semi-integral positive definite");
    const FieldTag tag = m.tag();
    const std::size_t l = m.size();
    const FieldElement root = FieldElement::sqrt_discriminant(tag);
    detail::IntMatrix gens;
    for (std::size_t j = 0; j < l; ++j)
      for (const FieldElement& beta : {FieldElement(tag, 1L), FieldElement::omega(tag)}) {
        Matrix e(tag, 1, l);
        e(0, j) = beta;
        gens.push_back(coordinates(root * (e * m.matrix())));
      }
    hnf_ = detail::hermite_normal_form(std::move(gens));
  }

  const HermMatrix& index() const noexcept { return m_; }
  std::size_t cogenus() const noexcept { return m_.size(); }

  /// Number of classes of one row, [Mat_{1,l}(O^#) : Mat_{1,l}(O) m].
  Integer row_class_count() const {
    Integer n = 1;
    for (std::size_t i = 0; i < hnf_.size(); ++i) n *= hnf_[i][i];
    return n;
  }

  /// Canonical representative of a row vector over O_E^#.
  Matrix reduce_row(const Matrix& row) const {
    if (row.rows() != 1 || row.cols() != cogenus()) throw DomainError("row has wrong length");
    if (!row.is_dual_integral()) throw DomainError("coset representative must have entries in O_E^#: " + to_string(row));
    const FieldElement root = FieldElement::sqrt_discriminant(row.tag());
    std::vector<Integer> v = coordinates(root * row);
    for (std::size_t i = 0; i < v.size(); ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), v[i].get_mpz_t(), hnf_[i][i].get_mpz_t());
      if (q != 0)
        for (std::size_t j = i; j < v.size(); ++j) v[j] -= q * hnf_[i][j];
    }
    return from_coordinates(row.tag(), v);
  }

  /// All canonical row representatives, in coordinate-lexicographic order.
  std::vector<Matrix> row_representatives() const {
    const FieldTag tag = m_.tag();
    std::vector<Matrix> out;
    std::vector<Integer> v(hnf_.size(), 0);
    while (true) {
      out.push_back(from_coordinates(tag, v));
      std::size_t i = v.size();
      while (i-- > 0) {
        if (++v[i] < hnf_[i][i]) break;
        v[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
    return out;
  }

 private:
  static std::vector<Integer> coordinates(const Matrix& row) {
    std::vector<Integer> v;
    for (std::size_t j = 0; j < row.cols(); ++j) {
      if (!row(0, j).is_integral()) throw DomainError("non-integral coset coordinate");
      v.push_back(row(0, j).a().get_num());
      v.push_back(row(0, j).b().get_num());
    }
    return v;
  }

  Matrix from_coordinates(FieldTag tag, const std::vector<Integer>& v) const {
    const FieldElement inv_root = FieldElement::sqrt_discriminant(tag).inverse();
    Matrix row(tag, 1, v.size() / 2);
    for (std::size_t j = 0; j < row.cols(); ++j)
      row(0, j) = FieldElement(tag, Rational(v[2 * j]), Rational(v[2 * j + 1])) * inv_root;
    return row;
  }

  HermMatrix m_;
  detail::IntMatrix hnf_;
};

/// A class s in Delta_g(m), held by its canonical (box-reduced) representative.
class CosetClass {
 public:
  CosetClass(HermMatrix index, Matrix rep) : index_(std::move(index)), rep_(std::move(rep)) {}

  const HermMatrix& index() const noexcept { return index_; }
  /// Canonical representative, g x l.
  const Matrix& rep() const noexcept { return rep_; }
  std::size_t genus() const noexcept { return rep_.rows(); }
  const FieldTag& tag() const noexcept { return rep_.tag(); }

  friend bool operator==(const CosetClass& s, const CosetClass& t) { return s.index_ == t.index_ && s.rep_ == t.rep_; }
  friend std::strong_ordering operator<=>(const CosetClass& s, const CosetClass& t) {
    if (auto c = s.index_ <=> t.index_; c != 0) return c;
    return s.rep_ <=> t.rep_;
  }

 private:
  HermMatrix index_;
  Matrix rep_;
};

inline HermMatrix scalar_index(FieldTag tag, long m) {
  if (m < 1) throw DomainError("index m must be a positive integer");
  return HermMatrix::scalar(tag, Rational(m));
}

inline CosetClass reduce_class(const Matrix& r, const CosetLattice& lattice) {
  if (r.cols() != lattice.cogenus()) throw DomainError("representative has wrong number of columns");
  Matrix rep(r.tag(), r.rows(), r.cols());
  for (std::size_t i = 0; i < r.rows(); ++i) rep.set_block(i, 0, lattice.reduce_row(r.block(i, 0, 1, r.cols())));
  return CosetClass(lattice.index(), std::move(rep));
}

inline CosetClass reduce_class(const Matrix& r, const HermMatrix& m) { return reduce_class(r, CosetLattice(m)); }

/// Every class of Delta_g(m), duplicate-free, ordered by canonical representative.
inline std::vector<CosetClass> delta_classes(std::size_t g, const HermMatrix& m) {
  const CosetLattice lattice(m);
  const std::vector<Matrix> rows = lattice.row_representatives();
  std::vector<CosetClass> out;
  std::vector<std::size_t> pick(g, 0);
  while (true) {
    Matrix rep(m.tag(), g, m.size());
    for (std::size_t i = 0; i < g; ++i) rep.set_block(i, 0, rows[pick[i]]);
    out.emplace_back(m, std::move(rep));
    std::size_t i = g;
    while (i-- > 0) {
      if (++pick[i] < rows.size()) break;
      pick[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

inline std::vector<CosetClass> delta_classes(FieldTag tag, std::size_t g, long m) {
  return delta_classes(g, scalar_index(tag, m));
}

/// Class count (m^2 |D|)^g for scalar m, from the lattice index.
inline Integer delta_class_count(std::size_t g, const HermMatrix& m) {
  Integer per_row = CosetLattice(m).row_class_count(), n = 1;
  for (std::size_t i = 0; i < g; ++i) n *= per_row;
  return n;
}

/// Representative r in s + m O_E^g with |r_i|^2 <= (1 - c_E) m^2, by rounding each s_i / m.
/// Cogenus 1 only.
inline Matrix small_rep(const CosetClass& s) {
  if (s.index().size() != 1) throw DomainError("small_rep needs a 1x1 index");
  const Rational m = s.index()(0, 0).a();
  Matrix r = s.rep();
  for (std::size_t i = 0; i < r.rows(); ++i) r(i, 0) -= euclidean_round(r(i, 0) / m) * m;
  return r;
}

/// Representative minimizing r_i m^-1 r_i* row by row (ties: lexicographically smallest row).
/// Agrees with small_rep for 1x1 indices.
inline Matrix minimal_rep(const CosetClass& s) {
  if (s.index().size() == 1) return small_rep(s);
  const HermMatrix& m = s.index();
  const Matrix m_inv = *inverse(m.matrix());
  const Matrix m_t = m.matrix().transpose();
  Matrix r = s.rep();
  for (std::size_t i = 0; i < r.rows(); ++i) {
    const Matrix row = r.block(i, 0, 1, m.size());
    // (row + lambda m) m^-1 (...)* = (lambda + row m^-1) m (...)*: column form with gram m^T.
    const Matrix center = -(row * m_inv).transpose();
    const Rational start = (row * m_inv * row.adjoint())(0, 0).a();
    std::optional<Matrix> best;
    Rational best_value;
    for_each_short_vector(m_t, center, start, [&](const Matrix& lambda, const Rational& value) {
      Matrix cand = row + lambda.transpose() * m.matrix();
      if (!best || value < best_value || (value == best_value && cand < *best)) {
        best = std::move(cand);
        best_value = value;
      }
    });
    r.set_block(i, 0, *best);
  }
  return r;
}

/// Calls visit(r, value) for each r in s + Mat_{g,l}(O_E) m with value = tr(r m^-1 r*) <= bound.
template <class Visit>
void for_each_coset_point(const CosetClass& s, const Rational& bound, Visit&& visit) {
  const HermMatrix& m = s.index();
  const std::size_t g = s.genus(), l = m.size();
  const FieldTag tag = s.tag();
  const Matrix m_inv = *inverse(m.matrix());
  const Matrix m_t = m.matrix().transpose();
  // Candidate rows per component, each with its own value, within the full bound.
  std::vector<std::vector<std::pair<Matrix, Rational>>> rows(g);
  for (std::size_t i = 0; i < g; ++i) {
    const Matrix base = s.rep().block(i, 0, 1, l);
    if (l == 1) {
      const Rational mm = m(0, 0).a();
      for (const auto& lambda : integers_near(-(base(0, 0) / mm), bound / mm)) {
        Matrix row = base;
        row(0, 0) += lambda * mm;
        rows[i].emplace_back(row, row(0, 0).norm() / mm);
      }
    } else {
      const Matrix center = -(base * m_inv).transpose();
      for_each_short_vector(m_t, center, bound, [&](const Matrix& lambda, const Rational& value) {
        rows[i].emplace_back(base + lambda.transpose() * m.matrix(), value);
      });
      std::sort(rows[i].begin(), rows[i].end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    }
  }
  Matrix r(tag, g, l);
  std::function<void(std::size_t, const Rational&)> rec = [&](std::size_t i, const Rational& used) {
    if (i == g) {
      visit(static_cast<const Matrix&>(r), used);
      return;
    }
    for (const auto& [row, value] : rows[i]) {
      if (used + value > bound) continue;
      r.set_block(i, 0, row);
      rec(i + 1, used + value);
    }
  };
  rec(0, Rational(0));
}

}  // namespace hfj
