#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hfj/error.hpp"
#include "hfj/field.hpp"
#include "hfj/herm_lattice.hpp"
#include "hfj/lattice.hpp"
#include "hfj/matrix.hpp"
#include "hfj/rational.hpp"

namespace hfj {

/// Vanishing order: a rational or +infinity.
class Order {
 public:
  Order() = default;  // +infinity
  explicit Order(Rational value) : value_(std::move(value)) {}
  static Order infinity() { return {}; }

  bool is_infinite() const noexcept { return !value_; }
  const Rational& value() const {
    if (!value_) throw DomainError("order is infinite");
    return *value_;
  }

  friend Order operator+(const Order& x, const Order& y) {
    if (x.is_infinite() || y.is_infinite()) return {};
    return Order(*x.value_ + *y.value_);
  }
  friend bool operator==(const Order& x, const Order& y) { return x.value_ == y.value_; }
  friend bool operator<(const Order& x, const Order& y) {
    if (y.is_infinite()) return !x.is_infinite();
    return !x.is_infinite() && *x.value_ < *y.value_;
  }
  friend bool operator<=(const Order& x, const Order& y) { return !(y < x); }
  friend bool operator>=(const Order& x, const Order& y) { return !(x < y); }

 private:
  std::optional<Rational> value_;
};

inline std::string to_string(const Order& o) { return o.is_infinite() ? "inf" : to_string(o.value()); }

using Coefficient = std::vector<FieldElement>;

inline bool is_zero(const Coefficient& c) {
  return std::all_of(c.begin(), c.end(), [](const FieldElement& x) { return x.is_zero(); });
}

/// Truncated formal Fourier series sum c(t) e(t tau) of degree g and weight k, keyed by PSD
/// Hermitian g x g matrices of trace <= trunc. Keys are semi-integral unless the series was
/// created with `semi_integral_support = false` (theta components have shifted supports).
/// Zero coefficients are never stored.
class FourierSeries {
 public:
  FourierSeries(FieldTag tag, std::size_t g, long k, Rational trunc, std::size_t dim = 1,
                bool semi_integral_support = true)
      : tag_(tag), g_(g), k_(k), trunc_(std::move(trunc)), dim_(dim), semi_integral_(semi_integral_support) {
    if (g_ == 0) throw DomainError("degree must be positive");
    if (dim_ == 0) throw DomainError("coefficient dimension must be positive");
  }

  const FieldTag& tag() const noexcept { return tag_; }
  std::size_t degree() const noexcept { return g_; }
  long weight() const noexcept { return k_; }
  const Rational& trunc() const noexcept { return trunc_; }
  std::size_t dim() const noexcept { return dim_; }
  bool semi_integral_support() const noexcept { return semi_integral_; }
  const std::map<HermMatrix, Coefficient>& coefficients() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }

  /// Whether t is a legal key of this series (size, PSD, integrality, truncation).
  bool admits(const HermMatrix& t) const {
    return t.size() == g_ && t.tag() == tag_ && t.trace() <= trunc_ && (!semi_integral_ || t.is_semi_integral()) &&
           is_psd(t);
  }

  void set(const HermMatrix& t, Coefficient c) {
    if (c.size() != dim_) throw DomainError("coefficient has dimension " + std::to_string(c.size()));
    if (!admits(t)) throw DomainError("illegal Fourier index " + to_string(t));
    for (const auto& x : c)
      if (!(x.tag() == tag_)) throw DomainError("coefficient over a different field");
    if (hfj::is_zero(c))
      coeffs_.erase(t);
    else
      coeffs_.insert_or_assign(t, std::move(c));
  }
  void set(const HermMatrix& t, const FieldElement& c) { set(t, Coefficient{c}); }

  void add_to(const HermMatrix& t, const Coefficient& c) {
    Coefficient sum = coeff(t);
    for (std::size_t i = 0; i < dim_; ++i) sum[i] += c.at(i);
    set(t, std::move(sum));
  }

  Coefficient coeff(const HermMatrix& t) const {
    auto it = coeffs_.find(t);
    return it == coeffs_.end() ? Coefficient(dim_, FieldElement(tag_)) : it->second;
  }
  FieldElement scalar(const HermMatrix& t) const {
    if (dim_ != 1) throw DomainError("series is vector-valued");
    return coeff(t)[0];
  }

  /// Same data with a smaller truncation.
  FourierSeries truncated(const Rational& trunc) const {
    FourierSeries out(tag_, g_, k_, std::min(trunc, trunc_), dim_, semi_integral_);
    for (const auto& [t, c] : coeffs_)
      if (t.trace() <= out.trunc_) out.coeffs_.emplace(t, c);
    return out;
  }

  FourierSeries with_weight(long k) const {
    FourierSeries out = *this;
    out.k_ = k;
    return out;
  }

  friend bool operator==(const FourierSeries&, const FourierSeries&) = default;

 private:
  FieldTag tag_;
  std::size_t g_;
  long k_;
  Rational trunc_;
  std::size_t dim_;
  bool semi_integral_;
  std::map<HermMatrix, Coefficient> coeffs_;
};

namespace detail {

inline void check_compatible(const FourierSeries& f1, const FourierSeries& f2) {
  if (!(f1.tag() == f2.tag())) throw DomainError("series over different fields");
  if (f1.degree() != f2.degree()) throw DomainError("series of different degree");
}

}  // namespace detail

inline FourierSeries add(const FourierSeries& f1, const FourierSeries& f2) {
  detail::check_compatible(f1, f2);
  if (f1.weight() != f2.weight()) throw DomainError("cannot add series of different weight");
  if (f1.dim() != f2.dim()) throw DomainError("cannot add series of different dimension");
  FourierSeries out(f1.tag(), f1.degree(), f1.weight(), std::min(f1.trunc(), f2.trunc()), f1.dim(),
                    f1.semi_integral_support() && f2.semi_integral_support());
  for (const auto* f : {&f1, &f2})
    for (const auto& [t, c] : f->coefficients())
      if (t.trace() <= out.trunc()) out.add_to(t, c);
  return out;
}

inline FourierSeries scale(const FieldElement& x, const FourierSeries& f) {
  FourierSeries out(f.tag(), f.degree(), f.weight(), f.trunc(), f.dim(), f.semi_integral_support());
  for (const auto& [t, c] : f.coefficients()) {
    Coefficient scaled = c;
    for (auto& e : scaled) e *= x;
    out.set(t, std::move(scaled));
  }
  return out;
}

inline FourierSeries operator+(const FourierSeries& f1, const FourierSeries& f2) { return add(f1, f2); }
inline FourierSeries operator-(const FourierSeries& f1, const FourierSeries& f2) {
  return add(f1, scale(FieldElement(f2.tag(), -1L), f2));
}

/// Cauchy product of scalar series; weight k1 + k2, truncation min(trunc1, trunc2).
inline FourierSeries mul(const FourierSeries& f1, const FourierSeries& f2) {
  detail::check_compatible(f1, f2);
  if (f1.dim() != 1 || f2.dim() != 1) throw DomainError("multiplication needs scalar-valued series");
  FourierSeries out(f1.tag(), f1.degree(), f1.weight() + f2.weight(), std::min(f1.trunc(), f2.trunc()), 1,
                    f1.semi_integral_support() && f2.semi_integral_support());
  std::map<HermMatrix, FieldElement> acc;
  for (const auto& [t1, c1] : f1.coefficients()) {
    const Rational tr1 = t1.trace();
    if (tr1 > out.trunc()) break;  // keys are ordered by trace within a fixed size
    for (const auto& [t2, c2] : f2.coefficients()) {
      if (tr1 + t2.trace() > out.trunc()) break;
      const HermMatrix t = t1 + t2;
      auto [it, fresh] = acc.try_emplace(t, FieldElement(out.tag()));
      it->second += c1[0] * c2[0];
    }
  }
  for (auto& [t, c] : acc) out.set(t, c);
  return out;
}

inline FourierSeries operator*(const FourierSeries& f1, const FourierSeries& f2) { return mul(f1, f2); }

/// c(0) = value, all other coefficients zero.
inline FourierSeries constant_series(FieldTag tag, std::size_t g, long k, const Rational& trunc, long value = 1) {
  FourierSeries f(tag, g, k, trunc);
  f.set(HermMatrix::zero(tag, g), FieldElement(tag, value));
  return f;
}

/// Minimum of min_represented(t) over keys with nonzero coefficient; +infinity for zero.
inline Order ord(const FourierSeries& f) {
  Order best;
  for (const auto& [t, c] : f.coefficients()) {
    Order o(min_represented(t));
    if (o < best) best = o;
    if (!best.is_infinite() && best.value() == 0) break;
  }
  return best;
}

/// A failure of c(u* t u) = (det u*)^k c(t), after applying rho(rot(u)) on the left.
struct SymmetryViolation {
  std::size_t generator;  ///< position in the list of units
  HermMatrix t;
  std::string witness;
};

/// (det u*)^k, a root of unity.
inline FieldElement det_character(const UnitMatrix& u, long k) {
  const FieldElement det_star = u.det().conj();
  return k >= 0 ? pow(det_star, k) : pow(det_star.inverse(), -k);
}

/// Checks rho(rot(u)) c(f; u* t u) = (det u*)^k c(f; t) for every u and every t such that both
/// indices lie within the truncation, visiting each pair where either side is supported.
/// `rho` is empty for the trivial type, else one dim x dim matrix per unit.
inline std::vector<SymmetryViolation> check_symmetry(const FourierSeries& f, const std::vector<UnitMatrix>& units,
                                                     const std::vector<Matrix>& rho = {}) {
  if (!rho.empty() && rho.size() != units.size()) throw DomainError("need one rho matrix per unit");
  if (rho.empty() && f.dim() != 1) throw DomainError("vector-valued series need explicit rho matrices");
  std::vector<SymmetryViolation> out;
  for (std::size_t i = 0; i < units.size(); ++i) {
    const UnitMatrix& u = units[i];
    if (u.size() != f.degree()) throw DomainError("unit matrix has wrong size");
    if (!rho.empty() && (rho[i].rows() != f.dim() || rho[i].cols() != f.dim()))
      throw DomainError("rho matrix has wrong size");
    const FieldElement chi = det_character(u, f.weight());
    const UnitMatrix u_inv = u.inverse();
    std::map<HermMatrix, bool> seen;
    auto check = [&](const HermMatrix& t) {
      if (!seen.emplace(t, true).second) return;
      const HermMatrix ut = gl_action(u, t);
      if (t.trace() > f.trunc() || ut.trace() > f.trunc()) return;
      Coefficient lhs = f.coeff(ut);
      if (!rho.empty()) {
        const Matrix v = rho[i] * Matrix::column(f.tag(), lhs);
        for (std::size_t j = 0; j < f.dim(); ++j) lhs[j] = v(j, 0);
      }
      Coefficient rhs = f.coeff(t);
      for (auto& x : rhs) x *= chi;
      if (lhs != rhs)
        out.push_back({i, t, "u=" + to_string(u.matrix()) + "; t=" + to_string(t)});
    };
    for (const auto& [s, c] : f.coefficients()) {
      check(s);
      check(gl_action(u_inv, s));
    }
  }
  std::sort(out.begin(), out.end(), [](const SymmetryViolation& x, const SymmetryViolation& y) {
    return x.generator != y.generator ? x.generator < y.generator : x.t < y.t;
  });
  return out;
}

/// Representation numbers c(t) = #{X in O_E^{n x g} : X* X = t} with trace(t) <= trunc: a
/// GL_g(O_E)-symmetric series for every weight k with (det u*)^k = 1.
inline FourierSeries gram_count_series(FieldTag tag, std::size_t n, std::size_t g, long k, long trunc) {
  std::vector<std::pair<Matrix, Rational>> columns;
  for_each_short_vector(Matrix::identity(tag, n), Matrix(tag, n, 1), Rational(trunc),
                        [&](const Matrix& w, const Rational& value) { columns.emplace_back(w, value); });
  std::map<HermMatrix, long> counts;
  Matrix x(tag, n, g);
  std::function<void(std::size_t, const Rational&)> rec = [&](std::size_t j, const Rational& left) {
    if (j == g) {
      ++counts[HermMatrix(x.adjoint() * x)];
      return;
    }
    for (const auto& [col, value] : columns) {
      if (value > left) continue;
      x.set_block(0, j, col);
      rec(j + 1, left - value);
    }
  };
  rec(0, Rational(trunc));
  FourierSeries f(tag, g, k, Rational(trunc));
  for (const auto& [t, c] : counts) f.set(t, FieldElement(tag, c));
  return f;
}

}  // namespace hfj
