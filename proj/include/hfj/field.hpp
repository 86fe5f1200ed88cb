#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "hfj/error.hpp"
#include "hfj/rational.hpp"

namespace hfj {

/// Integral basis {1, w} of O_E: w = sqrt(d) for d = 2, 3 mod 4, w = (1 + sqrt(d))/2 for d = 1 mod 4.
enum class BasisKind { sqrt_d, half_sqrt_d };

/// One of the five norm-Euclidean imaginary quadratic fields Q(sqrt(d)).
class FieldTag {
 public:
  static FieldTag make(int d) {
    switch (d) {
      case -1:
      case -2:
        return FieldTag(d, 4 * d, BasisKind::sqrt_d);
      case -3:
      case -7:
      case -11:
        return FieldTag(d, d, BasisKind::half_sqrt_d);
      default:
        throw DomainError("unsupported field d=" + std::to_string(d) +
                          " (norm-Euclidean imaginary quadratic fields are d in {-1,-2,-3,-7,-11})");
    }
  }

  int d() const noexcept { return d_; }
  int discriminant() const noexcept { return disc_; }
  BasisKind basis() const noexcept { return basis_; }

  // w^2 = p + q*w
  long omega_sq_const() const noexcept { return basis_ == BasisKind::sqrt_d ? d_ : (d_ - 1) / 4; }
  long omega_sq_linear() const noexcept { return basis_ == BasisKind::sqrt_d ? 0 : 1; }

  std::string basis_description() const {
    return basis_ == BasisKind::sqrt_d ? "w = sqrt(" + std::to_string(d_) + ")"
                                       : "w = (1+sqrt(" + std::to_string(d_) + "))/2";
  }

  friend bool operator==(const FieldTag&, const FieldTag&) = default;

 private:
  FieldTag(int d, int disc, BasisKind basis) : d_(d), disc_(disc), basis_(basis) {}

  int d_;
  int disc_;
  BasisKind basis_;
};

inline FieldTag make_field(int d) { return FieldTag::make(d); }

inline const std::array<int, 5>& norm_euclidean_fields() {
  static const std::array<int, 5> ds{-1, -2, -3, -7, -11};
  return ds;
}

/// a + b*w in the integral basis of the tagged field.
class FieldElement {
 public:
  explicit FieldElement(FieldTag tag) : tag_(tag) {}
  FieldElement(FieldTag tag, Rational a, Rational b = 0) : tag_(tag), a_(std::move(a)), b_(std::move(b)) {}
  FieldElement(FieldTag tag, long a, long b = 0) : tag_(tag), a_(a), b_(b) {}

  static FieldElement omega(FieldTag tag) { return {tag, 0L, 1L}; }

  /// sqrt(D_E): 2w - 1 when d = 1 mod 4, 2w otherwise.
  static FieldElement sqrt_discriminant(FieldTag tag) {
    return tag.basis() == BasisKind::sqrt_d ? FieldElement(tag, 0L, 2L) : FieldElement(tag, -1L, 2L);
  }

  const FieldTag& tag() const noexcept { return tag_; }
  const Rational& a() const noexcept { return a_; }
  const Rational& b() const noexcept { return b_; }

  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_rational() const { return b_ == 0; }
  bool is_integral() const { return is_integer(a_) && is_integer(b_); }
  /// Membership in the inverse different (1/sqrt(D)) O_E.
  bool is_dual_integral() const { return (sqrt_discriminant(tag_) * *this).is_integral(); }

  FieldElement conj() const {
    if (tag_.basis() == BasisKind::sqrt_d) return {tag_, a_, -b_};
    return {tag_, a_ + b_, -b_};
  }

  Rational norm() const {
    if (tag_.basis() == BasisKind::sqrt_d) return a_ * a_ - Rational(tag_.d()) * b_ * b_;
    return a_ * a_ + a_ * b_ + make_rational(1 - tag_.d(), 4) * b_ * b_;
  }

  Rational trace() const {
    if (tag_.basis() == BasisKind::sqrt_d) return 2 * a_;
    return 2 * a_ + b_;
  }

  FieldElement inverse() const {
    if (is_zero()) throw DomainError("inverse of zero field element");
    const Rational n = norm();
    FieldElement c = conj();
    return {tag_, c.a_ / n, c.b_ / n};
  }

  FieldElement operator-() const { return {tag_, -a_, -b_}; }

  FieldElement& operator+=(const FieldElement& o) {
    check_tag(o);
    a_ += o.a_;
    b_ += o.b_;
    return *this;
  }
  FieldElement& operator-=(const FieldElement& o) {
    check_tag(o);
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
  }
  FieldElement& operator*=(const FieldElement& o) {
    check_tag(o);
    const Rational bb = b_ * o.b_;
    Rational na = a_ * o.a_ + bb * tag_.omega_sq_const();
    Rational nb = a_ * o.b_ + b_ * o.a_ + bb * tag_.omega_sq_linear();
    a_ = std::move(na);
    b_ = std::move(nb);
    return *this;
  }
  FieldElement& operator*=(const Rational& q) {
    a_ *= q;
    b_ *= q;
    return *this;
  }
  FieldElement& operator/=(const FieldElement& o) { return *this *= o.inverse(); }
  FieldElement& operator/=(const Rational& q) {
    if (q == 0) throw DomainError("division by zero");
    a_ /= q;
    b_ /= q;
    return *this;
  }

  friend FieldElement operator+(FieldElement x, const FieldElement& y) { return x += y; }
  friend FieldElement operator-(FieldElement x, const FieldElement& y) { return x -= y; }
  friend FieldElement operator*(FieldElement x, const FieldElement& y) { return x *= y; }
  friend FieldElement operator*(FieldElement x, const Rational& q) { return x *= q; }
  friend FieldElement operator*(const Rational& q, FieldElement x) { return x *= q; }
  friend FieldElement operator/(FieldElement x, const FieldElement& y) { return x /= y; }
  friend FieldElement operator/(FieldElement x, const Rational& q) { return x /= q; }

  friend bool operator==(const FieldElement& x, const FieldElement& y) {
    return x.tag_ == y.tag_ && x.a_ == y.a_ && x.b_ == y.b_;
  }
  /// Lexicographic on (a, b); the canonical tie-break order of the library.
  friend std::strong_ordering operator<=>(const FieldElement& x, const FieldElement& y) {
    if (int c = cmp(x.a_, y.a_); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    if (int c = cmp(x.b_, y.b_); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  void check_tag(const FieldElement& o) const {
    if (!(tag_ == o.tag_)) throw DomainError("field mismatch in arithmetic");
  }

  FieldTag tag_;
  Rational a_;
  Rational b_;
};

inline FieldElement pow(FieldElement x, long e) {
  if (e < 0) return pow(x.inverse(), -e);
  FieldElement r(x.tag(), 1L);
  while (e > 0) {
    if (e & 1) r *= x;
    x *= x;
    e >>= 1;
  }
  return r;
}

/// Text form "a", "a+b*w", "a-b*w" or "b*w" with a, b rationals in lowest terms.
inline std::string to_string(const FieldElement& x) {
  if (x.b() == 0) return to_string(x.a());
  if (x.a() == 0) return to_string(x.b()) + "*w";
  if (x.b() > 0) return to_string(x.a()) + "+" + to_string(x.b()) + "*w";
  return to_string(x.a()) + "-" + to_string(Rational(-x.b())) + "*w";
}

inline std::ostream& operator<<(std::ostream& os, const FieldElement& x) { return os << to_string(x); }

/// Inverse of to_string; also accepts a non-canonical "a/b+c/d*w".
inline FieldElement parse_field_element(FieldTag tag, std::string_view text) {
  if (text.empty()) throw ParseError("empty field element");
  const bool has_w = text.size() >= 2 && text.substr(text.size() - 2) == "*w";
  if (!has_w) return {tag, parse_rational(text), Rational(0)};
  const std::string_view body = text.substr(0, text.size() - 2);
  // The split point is the last sign that is not at position 0 and not right after '/'.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != '/') {
      split = i;
      break;
    }
  }
  if (split == std::string_view::npos) return {tag, Rational(0), parse_rational(body)};
  const Rational a = parse_rational(body.substr(0, split));
  std::string_view bpart = body.substr(split + 1);
  if (bpart.empty() || bpart.front() == '+' || bpart.front() == '-')
    throw ParseError("malformed field element '" + std::string(text) + "'");
  Rational b = parse_rational(bpart);
  if (body[split] == '-') b = -b;
  return {tag, a, b};
}

/// The unit group of O_E, found as all a + b*w with |a|, |b| <= 1 and norm 1, in (a, b) order.
inline std::vector<FieldElement> units(FieldTag tag) {
  std::vector<FieldElement> out;
  for (long a = -1; a <= 1; ++a)
    for (long b = -1; b <= 1; ++b) {
      FieldElement u(tag, a, b);
      if (u.norm() == 1) out.push_back(u);
    }
  return out;
}

/// A generator of the cyclic unit group: i for d = -1, w for d = -3, -1 otherwise.
inline FieldElement unit_generator(FieldTag tag) {
  if (tag.d() == -1) return FieldElement::omega(tag);
  if (tag.d() == -3) return FieldElement::omega(tag);
  return {tag, -1L, 0L};
}

namespace detail {

inline long floor_long(const Rational& q) { return floor_div(q).get_si(); }

// Square root estimate widened so that the integer range derived from it is a superset.
inline double sqrt_upper(const Rational& q) { return q <= 0 ? 0.0 : std::sqrt(to_double(q)) * (1 + 1e-9) + 1e-9; }

}  // namespace detail

/// All alpha in O_E with N(alpha - center) <= bound, sorted lexicographically.
inline std::vector<FieldElement> integers_near(const FieldElement& center, const Rational& bound) {
  const FieldTag tag = center.tag();
  std::vector<FieldElement> out;
  if (bound < 0) return out;
  // In coordinates (x, y) of alpha - center: N = x^2 + |d| y^2, or (x + y/2)^2 + |d|/4 y^2.
  const Rational ycoef = tag.basis() == BasisKind::sqrt_d ? Rational(-tag.d()) : make_rational(-tag.d(), 4);
  const double yr = detail::sqrt_upper(bound / ycoef);
  const long ylo = detail::floor_long(center.b()) - static_cast<long>(yr) - 1;
  const long yhi = detail::floor_long(center.b()) + static_cast<long>(yr) + 2;
  for (long yb = ylo; yb <= yhi; ++yb) {
    const Rational y = Rational(yb) - center.b();
    const Rational rem = bound - ycoef * y * y;
    if (rem < 0) continue;
    const Rational xshift = tag.basis() == BasisKind::sqrt_d ? Rational(0) : y / 2;
    // x + xshift in [-sqrt(rem), sqrt(rem)] with x = xa - center.a
    const Rational mid = center.a() - xshift;
    const double xr = detail::sqrt_upper(rem);
    const long xlo = detail::floor_long(mid) - static_cast<long>(xr) - 1;
    const long xhi = detail::floor_long(mid) + static_cast<long>(xr) + 2;
    for (long xa = xlo; xa <= xhi; ++xa) {
      FieldElement alpha(tag, xa, yb);
      if ((alpha - center).norm() <= bound) out.push_back(std::move(alpha));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// The alpha in O_E minimizing N(beta - alpha); ties go to the lexicographically smallest (a, b).
inline FieldElement euclidean_round(const FieldElement& beta) {
  const FieldTag tag = beta.tag();
  // The minimizer differs from beta by less than 2 in each coordinate for all five fields.
  const long a0 = detail::floor_long(beta.a());
  const long b0 = detail::floor_long(beta.b());
  FieldElement best(tag);
  Rational best_norm = -1;
  for (long a = a0 - 2; a <= a0 + 3; ++a)
    for (long b = b0 - 2; b <= b0 + 3; ++b) {
      FieldElement alpha(tag, a, b);
      Rational n = (beta - alpha).norm();
      if (best_norm < 0 || n < best_norm || (n == best_norm && alpha < best)) {
        best_norm = std::move(n);
        best = std::move(alpha);
      }
    }
  return best;
}

/// Deep-hole norm mu of the lattice O_E and the derived constants.
struct EuclideanConstant {
  Rational mu;         ///< sup over beta of min over alpha of N(beta - alpha)
  Rational c;          ///< c_E = 1 - mu (linear reading)
  Rational c_squared;  ///< 1 - mu^2 (squared-norm reading, for comparison)
  FieldElement deep_hole;
};

namespace detail {

// Circumcenter of a triangle in E: solves Tr(beta * conj(v_i - v_0)) = N(v_i) - N(v_0), i = 1, 2.
inline FieldElement circumcenter(const FieldElement& v0, const FieldElement& v1, const FieldElement& v2) {
  const FieldTag tag = v0.tag();
  const FieldElement one(tag, 1L), w = FieldElement::omega(tag);
  auto row = [&](const FieldElement& v) {
    const FieldElement e = (v - v0).conj();
    return std::array<Rational, 3>{(one * e).trace(), (w * e).trace(), v.norm() - v0.norm()};
  };
  const auto r1 = row(v1), r2 = row(v2);
  const Rational det = r1[0] * r2[1] - r1[1] * r2[0];
  if (det == 0) throw DomainError("degenerate triangle");
  return {tag, (r1[2] * r2[1] - r1[1] * r2[2]) / det, (r1[0] * r2[2] - r1[2] * r2[0]) / det};
}

}  // namespace detail

/// Exact deep hole of O_E: the circumcenters of the two Delaunay triangles (0, 1, w) and
/// (1, w, 1 + w) of the fundamental parallelogram, kept only if no lattice point is closer.
inline EuclideanConstant euclidean_constant(FieldTag tag) {
  const FieldElement zero(tag), one(tag, 1L), w = FieldElement::omega(tag), onew = one + w;
  EuclideanConstant best{Rational(-1), 0, 0, FieldElement(tag)};
  const std::array<std::array<FieldElement, 3>, 2> triangles{{{zero, one, w}, {one, w, onew}}};
  for (const auto& tri : triangles) {
    const FieldElement center = detail::circumcenter(tri[0], tri[1], tri[2]);
    const Rational radius = (center - tri[0]).norm();
    if ((center - euclidean_round(center)).norm() != radius) continue;
    if (radius > best.mu) {
      best.mu = radius;
      best.deep_hole = center;
    }
  }
  if (best.mu < 0) throw DomainError("no Delaunay circumcenter is a hole");
  best.c = 1 - best.mu;
  best.c_squared = 1 - best.mu * best.mu;
  return best;
}

}  // namespace hfj
