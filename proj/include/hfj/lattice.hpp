#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "hfj/error.hpp"
#include "hfj/field.hpp"
#include "hfj/matrix.hpp"
#include "hfj/rational.hpp"

namespace hfj {

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Real Gram matrix of w -> w* H w on O_E^n in the coordinates (a_0, b_0, a_1, b_1, ...) of the
/// integral basis: G[p][q] = Tr(conj(beta_p) H[i_p][i_q] beta_q) / 2.
inline RationalMatrix hermitian_gram(const Matrix& h) {
  if (!h.is_square()) throw DomainError("gram of non-square matrix");
  const FieldTag tag = h.tag();
  const std::size_t n = h.rows();
  const std::array<FieldElement, 2> basis{FieldElement(tag, 1L), FieldElement::omega(tag)};
  RationalMatrix g(2 * n, std::vector<Rational>(2 * n));
  for (std::size_t p = 0; p < 2 * n; ++p)
    for (std::size_t q = 0; q < 2 * n; ++q)
      g[p][q] = (basis[p % 2].conj() * h(p / 2, q / 2) * basis[q % 2]).trace() / 2;
  return g;
}

namespace detail {

// Cohen's quadratic completion: Q(y) = sum_i q[i][i] (y_i + sum_{j>i} q[i][j] y_j)^2.
inline RationalMatrix completed_squares(const RationalMatrix& gram) {
  const std::size_t n = gram.size();
  RationalMatrix q = gram;
  for (std::size_t i = 0; i < n; ++i) {
    if (q[i][i] <= 0) throw DomainError("quadratic form is not positive definite");
    for (std::size_t j = i + 1; j < n; ++j) {
      q[j][i] = q[i][j];
      q[i][j] /= q[i][i];
    }
    for (std::size_t k = i + 1; k < n; ++k)
      for (std::size_t l = k; l < n; ++l) q[k][l] -= q[k][i] * q[i][l];
  }
  return q;
}

template <class Visit>
void enumerate_level(const RationalMatrix& q, const std::vector<Rational>& center, std::size_t level,
                     const Rational& remaining, const Rational& used, std::vector<long>& x, Visit& visit) {
  const std::size_t n = q.size();
  Rational shift = 0;
  for (std::size_t j = level + 1; j < n; ++j) shift += q[level][j] * (Rational(x[j]) - center[j]);
  const Rational mid = center[level] - shift;
  const double radius = sqrt_upper(remaining / q[level][level]);
  const long lo = floor_long(mid) - static_cast<long>(radius) - 1;
  const long hi = floor_long(mid) + static_cast<long>(radius) + 2;
  for (long v = lo; v <= hi; ++v) {
    const Rational t = Rational(v) - mid;
    const Rational contrib = q[level][level] * t * t;
    if (contrib > remaining) continue;
    x[level] = v;
    if (level == 0) {
      visit(static_cast<const std::vector<long>&>(x), used + contrib);
    } else {
      enumerate_level(q, center, level - 1, remaining - contrib, used + contrib, x, visit);
    }
  }
}

}  // namespace detail

/// Calls visit(x, value) for every integer vector x with value = (x - c)^T G (x - c) <= bound.
/// G must be positive definite. Visiting order is deterministic.
template <class Visit>
void for_each_lattice_point(const RationalMatrix& gram, const std::vector<Rational>& center, const Rational& bound,
                            Visit&& visit) {
  const std::size_t n = gram.size();
  if (center.size() != n) throw DomainError("center dimension mismatch");
  if (bound < 0 || n == 0) return;
  const RationalMatrix q = detail::completed_squares(gram);
  std::vector<long> x(n, 0);
  detail::enumerate_level(q, center, n - 1, bound, Rational(0), x, visit);
}

/// Calls visit(w, value) for every w in O_E^n (as a column) with (w - c)* H (w - c) <= bound.
template <class Visit>
void for_each_short_vector(const Matrix& h, const Matrix& center, const Rational& bound, Visit&& visit) {
  if (center.rows() != h.rows() || center.cols() != 1) throw DomainError("center must be a column of matching size");
  const FieldTag tag = h.tag();
  std::vector<Rational> c;
  c.reserve(2 * h.rows());
  for (std::size_t i = 0; i < h.rows(); ++i) {
    c.push_back(center(i, 0).a());
    c.push_back(center(i, 0).b());
  }
  for_each_lattice_point(hermitian_gram(h), c, bound, [&](const std::vector<long>& x, const Rational& value) {
    Matrix w(tag, h.rows(), 1);
    for (std::size_t i = 0; i < h.rows(); ++i) w(i, 0) = FieldElement(tag, x[2 * i], x[2 * i + 1]);
    visit(static_cast<const Matrix&>(w), value);
  });
}

}  // namespace hfj
