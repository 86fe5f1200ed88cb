#pragma once

#include <cstddef>
#include <string>
#include <utility>

#include "hfj/error.hpp"
#include "hfj/field.hpp"
#include "hfj/herm_lattice.hpp"
#include "hfj/matrix.hpp"

namespace hfj {

/// J = (0 I; -I 0) of size 2g.
inline Matrix j_matrix(FieldTag tag, std::size_t g) {
  Matrix j(tag, 2 * g, 2 * g);
  for (std::size_t i = 0; i < g; ++i) {
    j(i, g + i) = FieldElement(tag, 1L);
    j(g + i, i) = FieldElement(tag, -1L);
  }
  return j;
}

/// gamma* J gamma == J, for a square matrix of even size with entries in O_E.
inline bool is_unitary(const Matrix& gamma) {
  if (!gamma.is_square() || gamma.rows() % 2 != 0 || !gamma.is_integral()) return false;
  const Matrix j = j_matrix(gamma.tag(), gamma.rows() / 2);
  return gamma.adjoint() * j * gamma == j;
}

/// The block form of the same test: a*c = c*a, b*d = d*b, a*d - c*b = I.
inline bool satisfies_block_conditions(const Matrix& gamma) {
  if (!gamma.is_square() || gamma.rows() % 2 != 0 || !gamma.is_integral()) return false;
  const std::size_t g = gamma.rows() / 2;
  const Matrix a = gamma.block(0, 0, g, g), b = gamma.block(0, g, g, g);
  const Matrix c = gamma.block(g, 0, g, g), d = gamma.block(g, g, g, g);
  return a.adjoint() * c == c.adjoint() * a && b.adjoint() * d == d.adjoint() * b &&
         a.adjoint() * d - c.adjoint() * b == Matrix::identity(gamma.tag(), g);
}

/// An element of U(g,g)(Z).
class UnitaryElement {
 public:
  explicit UnitaryElement(Matrix m) : m_(std::move(m)) {
    if (!is_unitary(m_)) throw DomainError("matrix is not in U(g,g)(Z): " + to_string(m_));
  }

  static UnitaryElement identity(FieldTag tag, std::size_t g) { return UnitaryElement(Matrix::identity(tag, 2 * g)); }
  static UnitaryElement j(FieldTag tag, std::size_t g) { return UnitaryElement(j_matrix(tag, g)); }
  static UnitaryElement from_blocks(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d) {
    return UnitaryElement(block_matrix(a, b, c, d));
  }

  const FieldTag& tag() const noexcept { return m_.tag(); }
  std::size_t genus() const noexcept { return m_.rows() / 2; }
  const Matrix& matrix() const noexcept { return m_; }
  Matrix a() const { return m_.block(0, 0, genus(), genus()); }
  Matrix b() const { return m_.block(0, genus(), genus(), genus()); }
  Matrix c() const { return m_.block(genus(), 0, genus(), genus()); }
  Matrix d() const { return m_.block(genus(), genus(), genus(), genus()); }

  /// gamma^-1 = J^-1 gamma* J.
  UnitaryElement inverse() const {
    const Matrix j = j_matrix(tag(), genus());
    return UnitaryElement(-(j * m_.adjoint() * j));
  }

  friend UnitaryElement operator*(const UnitaryElement& x, const UnitaryElement& y) {
    return UnitaryElement(x.m_ * y.m_);
  }
  friend bool operator==(const UnitaryElement& x, const UnitaryElement& y) { return x.m_ == y.m_; }

 private:
  Matrix m_;
};

/// rot(u) = (u 0; 0 (u*)^-1).
inline UnitaryElement rot(const UnitMatrix& u) {
  const std::size_t g = u.size();
  const Matrix zero(u.tag(), g, g);
  return UnitaryElement::from_blocks(u.matrix(), zero, zero, u.inverse().matrix().adjoint());
}

/// Places a genus-1 element at rows and columns (j, j + g) of the identity; j is 0-based.
inline UnitaryElement diag_embed(std::size_t j, const UnitaryElement& gamma1, std::size_t g) {
  if (gamma1.genus() != 1) throw DomainError("diag_embed needs a genus-1 element");
  if (j >= g) throw DomainError("diagonal embedding index out of range");
  Matrix m = Matrix::identity(gamma1.tag(), 2 * g);
  const std::size_t idx[2] = {j, j + g};
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) m(idx[r], idx[c]) = gamma1.matrix()(r, c);
  return UnitaryElement(std::move(m));
}

/// [(lambda, mu), kappa] in the discrete Heisenberg group: lambda, mu are l x g, kappa is l x l,
/// all integral, with kappa + mu lambda* Hermitian.
class HeisenbergElement {
 public:
  HeisenbergElement(Matrix lambda, Matrix mu, Matrix kappa)
      : lambda_(std::move(lambda)), mu_(std::move(mu)), kappa_(std::move(kappa)) {
    const std::size_t l = lambda_.rows(), g = lambda_.cols();
    if (mu_.rows() != l || mu_.cols() != g || kappa_.rows() != l || kappa_.cols() != l)
      throw DomainError("Heisenberg element has inconsistent block sizes");
    if (!lambda_.is_integral() || !mu_.is_integral() || !kappa_.is_integral())
      throw DomainError("Heisenberg element must have entries in O_E");
    const Matrix herm = kappa_ + mu_ * lambda_.adjoint();
    if (!(herm == herm.adjoint()))
      throw DomainError("kappa + mu lambda* is not Hermitian: " + to_string(herm));
  }

  static HeisenbergElement identity(FieldTag tag, std::size_t l, std::size_t g) {
    return {Matrix(tag, l, g), Matrix(tag, l, g), Matrix(tag, l, l)};
  }

  const FieldTag& tag() const noexcept { return lambda_.tag(); }
  std::size_t cogenus() const noexcept { return lambda_.rows(); }
  std::size_t genus() const noexcept { return lambda_.cols(); }
  const Matrix& lambda() const noexcept { return lambda_; }
  const Matrix& mu() const noexcept { return mu_; }
  const Matrix& kappa() const noexcept { return kappa_; }

  /// Right action of U(g,g)(Z): (lambda, mu) gamma as an l x 2g row block.
  HeisenbergElement act(const UnitaryElement& gamma) const {
    if (gamma.genus() != genus()) throw DomainError("genus mismatch in Heisenberg action");
    const Matrix row = hstack(lambda_, mu_) * gamma.matrix();
    return {row.block(0, 0, cogenus(), genus()), row.block(0, genus(), cogenus(), genus()), kappa_};
  }

  friend bool operator==(const HeisenbergElement&, const HeisenbergElement&) = default;

 private:
  Matrix lambda_, mu_, kappa_;
};

/// [(l + l', m + m'), k + k' + l m'* - m l'*].
inline HeisenbergElement heisenberg_mul(const HeisenbergElement& x, const HeisenbergElement& y) {
  if (x.cogenus() != y.cogenus() || x.genus() != y.genus()) throw DomainError("Heisenberg size mismatch");
  return {x.lambda() + y.lambda(), x.mu() + y.mu(),
          x.kappa() + y.kappa() + x.lambda() * y.mu().adjoint() - x.mu() * y.lambda().adjoint()};
}

/// [(-l, -m), -k + l m* - m l*].
inline HeisenbergElement heisenberg_inverse(const HeisenbergElement& x) {
  return {-x.lambda(), -x.mu(), -x.kappa() + x.lambda() * x.mu().adjoint() - x.mu() * x.lambda().adjoint()};
}

/// Element (gamma, h) of the Jacobi group U(g,g)(Z) |x H.
struct JacobiElement {
  UnitaryElement gamma;
  HeisenbergElement h;

  friend bool operator==(const JacobiElement&, const JacobiElement&) = default;
};

/// (gamma, h)(gamma', h') = (gamma gamma', h^gamma' h').
inline JacobiElement jacobi_mul(const JacobiElement& x, const JacobiElement& y) {
  return {x.gamma * y.gamma, heisenberg_mul(x.h.act(y.gamma), y.h)};
}

/// The embedding into U(g+l, g+l)(Z) as the product of the block-diagonal image of gamma and
/// the Heisenberg matrix, in block order (g, l, g, l).
inline UnitaryElement jacobi_embed(const UnitaryElement& gamma, const HeisenbergElement& h) {
  if (gamma.genus() != h.genus()) throw DomainError("genus mismatch in Jacobi embedding");
  const FieldTag tag = gamma.tag();
  const std::size_t g = h.genus(), l = h.cogenus(), n = g + l;
  Matrix outer = Matrix::identity(tag, 2 * n);
  outer.set_block(0, 0, gamma.a());
  outer.set_block(0, n, gamma.b());
  outer.set_block(n, 0, gamma.c());
  outer.set_block(n, n, gamma.d());
  Matrix heis = Matrix::identity(tag, 2 * n);
  heis.set_block(0, n + g, h.mu().adjoint());
  heis.set_block(g, 0, h.lambda());
  heis.set_block(g, n, h.mu());
  heis.set_block(g, n + g, h.kappa());
  heis.set_block(n, n + g, -h.lambda().adjoint());
  return UnitaryElement(outer * heis);
}

inline UnitaryElement jacobi_embed(const JacobiElement& x) { return jacobi_embed(x.gamma, x.h); }

}  // namespace hfj
