#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hfj/error.hpp"
#include "hfj/field.hpp"
#include "hfj/fourier_series.hpp"
#include "hfj/herm_lattice.hpp"
#include "hfj/matrix.hpp"
#include "hfj/rational.hpp"

namespace hfj {

/// Fourier index (n, r) of a Jacobi form: n is g x g Hermitian, r is g x l over O_E^#.
struct JacobiKey {
  HermMatrix n;
  Matrix r;

  friend bool operator==(const JacobiKey&, const JacobiKey&) = default;
  friend std::strong_ordering operator<=>(const JacobiKey& x, const JacobiKey& y) {
    if (auto c = x.n <=> y.n; c != 0) return c;
    return x.r <=> y.r;
  }
};

inline std::string to_string(const JacobiKey& key) { return "(" + to_string(key.n) + "; " + to_string(key.r) + ")"; }

/// (n r; r* m).
inline HermMatrix block_index(const HermMatrix& n, const Matrix& r, const HermMatrix& m) {
  return HermMatrix(block_matrix(n.matrix(), r, r.adjoint(), m.matrix()));
}

/// r m^-1 r*, the part of n absorbed by a theta series.
inline HermMatrix theta_shift(const Matrix& r, const HermMatrix& m) {
  return HermMatrix(r * *inverse(m.matrix()) * r.adjoint());
}

/// Coefficient table of a Jacobi form of genus g, weight k and l x l index m, truncated at
/// trace(n) <= trunc. Every key has (n r; r* m) positive semidefinite; zero values are not stored.
class JacobiTable {
 public:
  JacobiTable(std::size_t g, long k, HermMatrix m, Rational trunc, std::size_t dim = 1)
      : g_(g), k_(k), m_(std::move(m)), trunc_(std::move(trunc)), dim_(dim) {
    if (g_ == 0) throw DomainError("genus must be positive");
    if (m_.size() == 0) throw DomainError("index must be at least 1 x 1");
    if (!is_psd(m_)) throw DomainError("index must be positive semidefinite: " + to_string(m_));
    if (dim_ == 0) throw DomainError("coefficient dimension must be positive");
  }

  const FieldTag& tag() const noexcept { return m_.tag(); }
  std::size_t genus() const noexcept { return g_; }
  std::size_t cogenus() const noexcept { return m_.size(); }
  long weight() const noexcept { return k_; }
  const HermMatrix& index() const noexcept { return m_; }
  const Rational& trunc() const noexcept { return trunc_; }
  std::size_t dim() const noexcept { return dim_; }
  const std::map<JacobiKey, Coefficient>& coefficients() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }

  bool admits(const JacobiKey& key) const {
    return key.n.size() == g_ && key.r.rows() == g_ && key.r.cols() == cogenus() && key.n.tag() == tag() &&
           key.n.trace() <= trunc_ && key.r.is_dual_integral() && is_psd(block_index(key.n, key.r, m_));
  }

  void set(const JacobiKey& key, Coefficient c) {
    if (c.size() != dim_) throw DomainError("coefficient has dimension " + std::to_string(c.size()));
    if (!admits(key)) throw DomainError("illegal Jacobi index " + to_string(key));
    if (hfj::is_zero(c))
      coeffs_.erase(key);
    else
      coeffs_.insert_or_assign(key, std::move(c));
  }
  void set(const JacobiKey& key, const FieldElement& c) { set(key, Coefficient{c}); }

  void add_to(const JacobiKey& key, const Coefficient& c) {
    Coefficient sum = coeff(key);
    for (std::size_t i = 0; i < dim_; ++i) sum[i] += c.at(i);
    set(key, std::move(sum));
  }

  Coefficient coeff(const JacobiKey& key) const {
    auto it = coeffs_.find(key);
    return it == coeffs_.end() ? Coefficient(dim_, FieldElement(tag())) : it->second;
  }
  FieldElement scalar(const JacobiKey& key) const {
    if (dim_ != 1) throw DomainError("table is vector-valued");
    return coeff(key)[0];
  }

  /// All n are semi-integral (true for Fourier-Jacobi coefficients of a modular form).
  bool has_semi_integral_keys() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const auto& kv) { return kv.first.n.is_semi_integral(); });
  }

  JacobiTable truncated(const Rational& trunc) const {
    JacobiTable out(g_, k_, m_, std::min(trunc, trunc_), dim_);
    for (const auto& [key, c] : coeffs_)
      if (key.n.trace() <= out.trunc_) out.coeffs_.emplace(key, c);
    return out;
  }

  friend bool operator==(const JacobiTable&, const JacobiTable&) = default;

 private:
  std::size_t g_;
  long k_;
  HermMatrix m_;
  Rational trunc_;
  std::size_t dim_;
  std::map<JacobiKey, Coefficient> coeffs_;
};

inline JacobiTable add(const JacobiTable& x, const JacobiTable& y) {
  if (x.genus() != y.genus() || !(x.index() == y.index()) || x.weight() != y.weight() || x.dim() != y.dim())
    throw DomainError("incompatible Jacobi tables");
  JacobiTable out(x.genus(), x.weight(), x.index(), std::min(x.trunc(), y.trunc()), x.dim());
  for (const auto* t : {&x, &y})
    for (const auto& [key, c] : t->coefficients())
      if (key.n.trace() <= out.trunc()) out.add_to(key, c);
  return out;
}

inline JacobiTable scale(const FieldElement& a, const JacobiTable& x) {
  JacobiTable out(x.genus(), x.weight(), x.index(), x.trunc(), x.dim());
  for (const auto& [key, c] : x.coefficients()) {
    Coefficient scaled = c;
    for (auto& e : scaled) e *= a;
    out.set(key, std::move(scaled));
  }
  return out;
}

/// (h phi)(n, r) = sum over t + n'' = n of h(t) phi(n'', r), for scalar h and phi.
inline JacobiTable mul(const FourierSeries& h, const JacobiTable& phi) {
  if (h.degree() != phi.genus() || !(h.tag() == phi.tag())) throw DomainError("series and table do not match");
  if (h.dim() != 1 || phi.dim() != 1) throw DomainError("multiplication needs scalar data");
  JacobiTable out(phi.genus(), h.weight() + phi.weight(), phi.index(), std::min(h.trunc(), phi.trunc()));
  std::map<JacobiKey, FieldElement> acc;
  for (const auto& [t, c1] : h.coefficients()) {
    const Rational tr = t.trace();
    if (tr > out.trunc()) break;
    for (const auto& [key, c2] : phi.coefficients()) {
      if (tr + key.n.trace() > out.trunc()) continue;
      auto [it, fresh] = acc.try_emplace(JacobiKey{t + key.n, key.r}, FieldElement(out.tag()));
      it->second += c1[0] * c2[0];
    }
  }
  for (auto& [key, c] : acc) out.set(key, c);
  return out;
}

/// Coefficients of the theta series of index m and shift s: 1 at (r m^-1 r*, r) for every r in
/// s + Mat_{g,l}(O_E) m with trace <= trunc. Weight is the cogenus l.
inline JacobiTable theta_coeffs(const CosetClass& s, const Rational& trunc) {
  const HermMatrix& m = s.index();
  JacobiTable out(s.genus(), static_cast<long>(m.size()), m, trunc);
  for_each_coset_point(s, trunc, [&](const Matrix& r, const Rational&) {
    out.set(JacobiKey{theta_shift(r, m), r}, FieldElement(m.tag(), 1L));
  });
  return out;
}

/// The components h_s of a theta decomposition phi = sum_s h_s theta_{m,s}. Component h_s has
/// weight k - l and is known up to trace trunc - tr(r_s m^-1 r_s*) for the minimal
/// representative r_s of s.
struct ThetaComponents {
  std::size_t genus;
  long weight;  ///< weight of the recomposed form
  HermMatrix index;
  Rational trunc;  ///< truncation of the recomposed form
  std::map<CosetClass, FourierSeries> components;

  const FieldTag& tag() const noexcept { return index.tag(); }
  const FourierSeries& component(const CosetClass& s) const { return components.at(s); }

  friend bool operator==(const ThetaComponents&, const ThetaComponents&) = default;
};

/// Empty component vector with one zero series per class, each with its largest useful truncation.
inline ThetaComponents zero_components(std::size_t g, long k, const HermMatrix& m, const Rational& trunc,
                                       std::size_t dim = 1) {
  ThetaComponents out{g, k, m, trunc, {}};
  const Matrix m_inv = *inverse(m.matrix());
  for (const auto& s : delta_classes(g, m)) {
    const Matrix r = minimal_rep(s);
    const Rational shift = (r * m_inv * r.adjoint()).trace().a();
    out.components.emplace(
        s, FourierSeries(m.tag(), g, k - static_cast<long>(m.size()), trunc - shift, dim, false));
  }
  return out;
}

namespace detail {

inline std::string bob_witness(const HermMatrix& n_red, const Matrix& r1, const Matrix& r2) {
  return "n'=" + to_string(n_red) + "; r'=" + to_string(r1) + "; r''=" + to_string(r2);
}

}  // namespace detail

/// How much of each coset orbit theta_decompose compares against the canonical representative.
enum class ThetaCheck { none, probe, strict };

/// Theta decomposition of a table with positive definite index. Each component is read off at
/// the minimal representative; the orbit is then probed at one more representative (all of
/// them for ThetaCheck::strict), and a mismatch raises ConsistencyError with the witness
/// (n', r', r'').
inline ThetaComponents theta_decompose(const JacobiTable& phi, ThetaCheck check = ThetaCheck::probe) {
  const HermMatrix& m = phi.index();
  if (!is_pd(m)) throw DomainError("theta decomposition needs a positive definite index");
  const std::size_t g = phi.genus(), l = m.size();
  ThetaComponents out = zero_components(g, phi.weight(), m, phi.trunc(), phi.dim());
  const CosetLattice lattice(m);

  std::map<CosetClass, Matrix> base;
  for (const auto& [s, h] : out.components) base.emplace(s, minimal_rep(s));
  std::map<Matrix, std::vector<std::pair<HermMatrix, const Coefficient*>>> by_r;
  for (const auto& [key, c] : phi.coefficients()) {
    const CosetClass s = reduce_class(key.r, lattice);
    if (key.r == base.at(s)) out.components.at(s).set(key.n - theta_shift(key.r, m), c);
    by_r[key.r].emplace_back(key.n, &c);
  }

  for (const auto& [s, h] : out.components) {
    const Matrix& r0 = base.at(s);
    // For each probed r: both directions of phi(n' + r m^-1 r*, r) == h(n').
    auto probe = [&](const Matrix& r) {
      const HermMatrix shift = theta_shift(r, m);
      const Rational room = phi.trunc() - shift.trace();
      if (room < 0) return;
      for (const auto& [n_red, c] : h.coefficients()) {
        if (n_red.trace() > room) break;
        if (phi.coeff(JacobiKey{n_red + shift, r}) != c)
          throw ConsistencyError("theta decomposition is not well defined", detail::bob_witness(n_red, r0, r));
      }
      auto it = by_r.find(r);
      if (it == by_r.end()) return;
      for (const auto& [n, c] : it->second) {
        const HermMatrix n_red = n - shift;
        if (h.coeff(n_red) != *c)
          throw ConsistencyError("theta decomposition is not well defined", detail::bob_witness(n_red, r0, r));
      }
    };
    if (check == ThetaCheck::strict) {
      for_each_coset_point(s, phi.trunc(), [&](const Matrix& r, const Rational&) { probe(r); });
    } else if (check == ThetaCheck::probe) {
      Matrix r1 = r0;
      for (std::size_t j = 0; j < l; ++j) r1(0, j) += m(0, j);
      probe(r1);
    }
  }
  return out;
}

/// phi(n, r) = h_{class(r)}(n - r m^-1 r*), for trace(n) <= trunc. Throws TruncationError if a
/// component is not known far enough.
inline JacobiTable theta_recompose(const ThetaComponents& v, const Rational& trunc) {
  const HermMatrix& m = v.index;
  const std::size_t dim = v.components.empty() ? 1 : v.components.begin()->second.dim();
  JacobiTable out(v.genus, v.weight, m, trunc, dim);
  const Matrix m_inv = *inverse(m.matrix());
  for (const auto& [s, h] : v.components) {
    const Matrix r0 = minimal_rep(s);
    const Rational need = trunc - (r0 * m_inv * r0.adjoint()).trace().a();
    if (need > h.trunc())
      throw TruncationError("theta component is truncated too early",
                            "s=" + to_string(s.rep()) + "; have=" + to_string(h.trunc()) + "; need=" + to_string(need));
    for_each_coset_point(s, trunc, [&](const Matrix& r, const Rational& value) {
      const HermMatrix shift = theta_shift(r, m);
      for (const auto& [n_red, c] : h.coefficients()) {
        if (n_red.trace() + value > trunc) break;
        out.set(JacobiKey{n_red + shift, r}, c);
      }
    });
  }
  return out;
}

/// Minimum of the corner entry n_{g,g} over supported keys with this r; +infinity if none.
inline Order ord_r(const JacobiTable& phi, const Matrix& r) {
  Order best;
  const std::size_t g = phi.genus();
  for (const auto& [key, c] : phi.coefficients()) {
    if (!(key.r == r)) continue;
    Order o(key.n(g - 1, g - 1).a());
    if (o < best) best = o;
  }
  return best;
}

/// Minimum of min_represented(n) over supported keys; +infinity for the zero table.
inline Order ord(const JacobiTable& phi) {
  Order best;
  for (const auto& [key, c] : phi.coefficients()) {
    Order o(min_represented(key.n));
    if (o < best) best = o;
  }
  return best;
}

}  // namespace hfj
