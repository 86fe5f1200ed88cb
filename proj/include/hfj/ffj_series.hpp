#pragma once

#include <cstddef>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "hfj/error.hpp"
#include "hfj/field.hpp"
#include "hfj/fourier_series.hpp"
#include "hfj/herm_lattice.hpp"
#include "hfj/jacobi_forms.hpp"
#include "hfj/matrix.hpp"
#include "hfj/rational.hpp"

namespace hfj {

/// A formal Fourier-Jacobi series of degree g and cogenus l: one Jacobi table of genus g - l per
/// l x l index m, each truncated at trace(n) <= trunc - trace(m), so that every assembled key
/// (n r; r* m) has trace <= trunc. Empty tables are not stored.
class FJFamily {
 public:
  FJFamily(FieldTag tag, std::size_t g, std::size_t l, long k, Rational trunc, std::size_t dim = 1)
      : tag_(std::move(tag)), g_(g), l_(l), k_(k), trunc_(std::move(trunc)), dim_(dim) {
    if (l_ == 0 || l_ >= g_) throw DomainError("cogenus must satisfy 1 <= l <= g - 1");
    if (dim_ == 0) throw DomainError("coefficient dimension must be positive");
  }

  const FieldTag& tag() const noexcept { return tag_; }
  std::size_t degree() const noexcept { return g_; }
  std::size_t cogenus() const noexcept { return l_; }
  std::size_t genus() const noexcept { return g_ - l_; }
  long weight() const noexcept { return k_; }
  const Rational& trunc() const noexcept { return trunc_; }
  std::size_t dim() const noexcept { return dim_; }
  const std::map<HermMatrix, JacobiTable>& tables() const noexcept { return tables_; }
  bool is_zero() const noexcept { return tables_.empty(); }

  bool admits_index(const HermMatrix& m) const {
    return m.size() == l_ && m.tag() == tag_ && m.is_semi_integral() && is_psd(m) && m.trace() <= trunc_;
  }

  /// The stored table at m, or an empty one.
  JacobiTable table(const HermMatrix& m) const {
    if (!admits_index(m)) throw DomainError("illegal Fourier-Jacobi index " + to_string(m));
    auto it = tables_.find(m);
    return it == tables_.end() ? JacobiTable(genus(), k_, m, trunc_ - m.trace(), dim_) : it->second;
  }

  void set(const HermMatrix& m, const JacobiKey& key, Coefficient c) {
    if (!admits_index(m)) throw DomainError("illegal Fourier-Jacobi index " + to_string(m));
    if (key.n.size() != genus() || key.r.rows() != genus() || key.r.cols() != l_)
      throw DomainError("Jacobi key has wrong shape: " + to_string(key));
    if (!block_index(key.n, key.r, m).is_semi_integral())
      throw DomainError("assembled index is not semi-integral: " + to_string(block_index(key.n, key.r, m)));
    auto it = tables_.find(m);
    if (it == tables_.end()) it = tables_.emplace(m, JacobiTable(genus(), k_, m, trunc_ - m.trace(), dim_)).first;
    it->second.set(key, std::move(c));
    if (it->second.is_zero()) tables_.erase(it);
  }
  void set(const HermMatrix& m, const JacobiKey& key, const FieldElement& c) { set(m, key, Coefficient{c}); }

  /// Stores every coefficient of `phi` (genus g - l, weight k) under its index, replacing the
  /// previous table there. The table must be known at least as far as the family needs.
  void put(const JacobiTable& phi) {
    const HermMatrix& m = phi.index();
    if (!admits_index(m)) throw DomainError("illegal Fourier-Jacobi index " + to_string(m));
    if (phi.genus() != genus() || phi.weight() != k_ || phi.dim() != dim_ || !(phi.tag() == tag_))
      throw DomainError("table does not match the family");
    if (phi.trunc() < trunc_ - m.trace())
      throw TruncationError("table is truncated too early",
                            "m=" + to_string(m) + "; have=" + to_string(phi.trunc()) +
                                "; need=" + to_string(trunc_ - m.trace()));
    tables_.erase(m);
    for (const auto& [key, c] : phi.coefficients())
      if (key.n.trace() <= trunc_ - m.trace()) set(m, key, c);
  }

  friend bool operator==(const FJFamily&, const FJFamily&) = default;

 private:
  FieldTag tag_;
  std::size_t g_, l_;
  long k_;
  Rational trunc_;
  std::size_t dim_;
  std::map<HermMatrix, JacobiTable> tables_;
};

namespace detail {

inline std::vector<std::size_t> index_range(std::size_t from, std::size_t to) {
  std::vector<std::size_t> out(to - from);
  std::iota(out.begin(), out.end(), from);
  return out;
}

/// Splits the l x l index m of a cogenus-l key into the (l - l') upper block and the l' x l'
/// corner, and moves the upper block into the Jacobi key: the result is the index m' and the
/// key of the same coefficient in the cogenus-l' expansion.
inline std::pair<HermMatrix, JacobiKey> lower_cogenus(const HermMatrix& m, const JacobiKey& key, std::size_t l2) {
  const std::size_t l = m.size(), a = key.n.size(), top = l - l2;
  const HermMatrix m2 = m.principal(index_range(top, l));
  const Matrix n_top = m.matrix().block(0, 0, top, top);
  const Matrix r_top = m.matrix().block(0, top, top, l2);
  const Matrix rho1 = key.r.block(0, 0, a, top), rho2 = key.r.block(0, top, a, l2);
  HermMatrix n(block_matrix(key.n.matrix(), rho1, rho1.adjoint(), n_top));
  return {m2, JacobiKey{std::move(n), vstack(rho2, r_top)}};
}

}  // namespace detail

/// The full series with c(f; (n r; r* m)) = c(phi_m; n, r).
inline FourierSeries assemble(const FJFamily& fam) {
  FourierSeries out(fam.tag(), fam.degree(), fam.weight(), fam.trunc(), fam.dim());
  for (const auto& [m, phi] : fam.tables())
    for (const auto& [key, c] : phi.coefficients()) out.set(block_index(key.n, key.r, m), c);
  return out;
}

/// Partition of the support of f by its lower-right l x l block.
inline FJFamily disassemble(const FourierSeries& f, std::size_t l) {
  const std::size_t g = f.degree();
  FJFamily out(f.tag(), g, l, f.weight(), f.trunc(), f.dim());
  const auto upper = detail::index_range(0, g - l), lower = detail::index_range(g - l, g);
  for (const auto& [t, c] : f.coefficients())
    out.set(t.principal(lower), JacobiKey{t.principal(upper), t.matrix().block(0, g - l, g - l, l)}, c);
  return out;
}

/// Re-indexes a cogenus-l family as a cogenus-l2 family: the coefficient of phi_m at (n, r),
/// with m = (n' r'; r'* m'), moves to psi_{m'} at ((n rho1; rho1* n'), (rho2; r')) where
/// r = (rho1 rho2) is split like m.
inline FJFamily rearrange_cogenus(const FJFamily& fam, std::size_t l2) {
  if (l2 == 0 || l2 >= fam.cogenus()) throw DomainError("target cogenus must satisfy 1 <= l' < l");
  FJFamily out(fam.tag(), fam.degree(), l2, fam.weight(), fam.trunc(), fam.dim());
  for (const auto& [m, phi] : fam.tables())
    for (const auto& [key, c] : phi.coefficients()) {
      auto [m2, key2] = detail::lower_cogenus(m, key, l2);
      out.set(m2, key2, c);
    }
  return out;
}

inline FJFamily rearrange_cogenus(const FJFamily& fam) { return rearrange_cogenus(fam, fam.cogenus() - 1); }

/// The formal Fourier-Jacobi coefficient psi_{m'} of cogenus m'.size(), collected directly from
/// the tables of `fam` whose index has m' in its lower-right corner.
inline JacobiTable formal_fj_coefficient(const FJFamily& fam, const HermMatrix& m2) {
  const std::size_t l2 = m2.size();
  if (l2 == 0 || l2 >= fam.cogenus()) throw DomainError("index of the formal coefficient must be smaller than l");
  JacobiTable out(fam.degree() - l2, fam.weight(), m2, fam.trunc() - m2.trace(), fam.dim());
  const auto corner = detail::index_range(fam.cogenus() - l2, fam.cogenus());
  for (const auto& [m, phi] : fam.tables()) {
    if (!(m.principal(corner) == m2)) continue;
    for (const auto& [key, c] : phi.coefficients()) out.set(detail::lower_cogenus(m, key, l2).second, c);
  }
  return out;
}

/// psi_0 of cogenus 1 as a family of degree g - 1 and cogenus l - 1: keeps the tables with
/// m = (n' 0; 0 0) and drops the last column of r, which must vanish.
inline FJFamily extract_psi0(const FJFamily& fam) {
  const std::size_t g = fam.degree(), l = fam.cogenus();
  if (l < 2) throw DomainError("psi_0 needs cogenus at least 2");
  if (fam.dim() != 1) throw DomainError("psi_0 is defined for the trivial type");
  FJFamily out(fam.tag(), g - 1, l - 1, fam.weight(), fam.trunc());
  const auto upper = detail::index_range(0, l - 1);
  for (const auto& [m, phi] : fam.tables()) {
    if (m(l - 1, l - 1) != FieldElement(fam.tag())) continue;
    for (std::size_t j = 0; j + 1 < l; ++j)
      if (!m(j, l - 1).is_zero())
        throw ConsistencyError("index with zero corner has a nonzero off-diagonal entry", "m=" + to_string(m));
    const HermMatrix m_top = m.principal(upper);
    for (const auto& [key, c] : phi.coefficients()) {
      const Matrix last = key.r.block(0, l - 1, key.r.rows(), 1);
      if (!last.is_zero())
        throw ConsistencyError("psi_0 coefficient depends on the degenerate variables",
                               "m=" + to_string(m) + "; n=" + to_string(key.n) + "; r=" + to_string(key.r));
      out.set(m_top, JacobiKey{key.n, key.r.block(0, 0, key.r.rows(), l - 1)}, c);
    }
  }
  return out;
}

/// Theta components h_{m',s'} of the formal coefficient psi_{m'} (m' positive definite).
/// Bob violations raise ConsistencyError with the witness (n', r', r'').
inline ThetaComponents formal_theta_coeffs(const FJFamily& fam, const HermMatrix& m2,
                                           ThetaCheck check = ThetaCheck::probe) {
  return theta_decompose(formal_fj_coefficient(fam, m2), check);
}

/// The unit matrices (I 0; lambda* I) with lambda = beta e_i e_j^T, beta in {1, omega}, that act
/// on each phi_m without moving m.
inline std::vector<UnitMatrix> sub_action_generators(FieldTag tag, std::size_t g, std::size_t l) {
  std::vector<UnitMatrix> out;
  for (std::size_t i = 0; i < g - l; ++i)
    for (std::size_t j = 0; j < l; ++j)
      for (const FieldElement& beta : {FieldElement(tag, 1L), FieldElement::omega(tag)}) {
        Matrix u = Matrix::identity(tag, g);
        u(g - l + j, i) = beta.conj();
        out.emplace_back(u);
      }
  return out;
}

/// Symmetry report of the assembled series under `units` followed by the sub-action generators.
/// For vector-valued families rho must cover both lists, in that order. Violations name the
/// position in the combined list.
inline std::vector<SymmetryViolation> check_family(const FJFamily& fam, std::vector<UnitMatrix> units,
                                                   const std::vector<Matrix>& rho = {}) {
  for (auto& u : sub_action_generators(fam.tag(), fam.degree(), fam.cogenus())) units.push_back(std::move(u));
  return check_symmetry(assemble(fam), units, rho);
}

/// c(h_{u* s}; u* n u) = (det u*)^k c(h_s; n) for each unit u of size g - l', whenever both
/// indices lie within the truncation of their components. Scalar components only.
inline std::vector<SymmetryViolation> check_component_symmetry(const ThetaComponents& v,
                                                               const std::vector<UnitMatrix>& units) {
  std::vector<SymmetryViolation> out;
  const CosetLattice lattice(v.index);
  for (std::size_t i = 0; i < units.size(); ++i) {
    const UnitMatrix& u = units[i];
    if (u.size() != v.genus) throw DomainError("unit matrix has wrong size");
    const FieldElement chi = det_character(u, v.weight);
    for (const UnitMatrix& w : {u, u.inverse()}) {
      const FieldElement chi_w = w == u ? chi : chi.inverse();
      for (const auto& [s, h] : v.components) {
        if (h.dim() != 1) throw DomainError("component symmetry is checked for scalar components");
        const CosetClass target = reduce_class(w.matrix().adjoint() * s.rep(), lattice);
        const FourierSeries& h2 = v.component(target);
        for (const auto& [n, c] : h.coefficients()) {
          const HermMatrix wn = gl_action(w, n);
          if (wn.trace() > h2.trunc()) continue;
          if (h2.scalar(wn) != chi_w * c[0])
            out.push_back({i, n, "u=" + to_string(w.matrix()) + "; s=" + to_string(s.rep()) + "; n=" + to_string(n)});
        }
      }
    }
  }
  return out;
}

/// Coefficient form of the partial theta decomposition for l' = l - 1: with m = (n' r'; r'* m')
/// and r = (rho1 rho2), c(phi_m; N, r) equals c(h_{m',s'}; (N - rho2 m'^-1 rho2*,
/// rho1 - rho2 m'^-1 r'*; ..., n' - r' m'^-1 r'*)) where s' is the class of (rho2; r'). The
/// components are read at canonical representatives only, then both sides are compared as
/// finite maps over every n'.
inline bool partial_decomposition_check(const FJFamily& fam, const HermMatrix& m2, const CosetClass& s2,
                                        const Matrix& r2) {
  const std::size_t l = fam.cogenus(), a = fam.genus();
  if (l < 2 || m2.size() != l - 1) throw DomainError("index m' must have size l - 1");
  if (!is_pd(m2)) throw DomainError("index m' must be positive definite");
  if (s2.genus() != 1 || !(s2.index() == m2)) throw DomainError("shift must be a class of Delta_1(m')");
  const CosetLattice lattice(m2);
  if (!(reduce_class(r2, lattice) == s2)) throw DomainError("r' is not in the class s'_2");

  const Matrix m2_inv = *inverse(m2.matrix());
  const Rational shift = (r2 * m2_inv * r2.adjoint())(0, 0).a();
  using Key = std::pair<Rational, JacobiKey>;  // (n', (N, r))

  std::map<Key, Coefficient> lhs;
  const auto corner = detail::index_range(1, l);
  for (const auto& [m, phi] : fam.tables()) {
    if (!(m.principal(corner) == m2) || !(m.matrix().block(0, 1, 1, l - 1) == r2)) continue;
    for (const auto& [key, c] : phi.coefficients()) lhs.emplace(Key{m(0, 0).a(), key}, c);
  }

  std::map<Key, Coefficient> rhs;
  const ThetaComponents comps = theta_decompose(formal_fj_coefficient(fam, m2), ThetaCheck::none);
  const auto top = detail::index_range(0, a);
  for (const auto& [s, h] : comps.components) {
    if (!(reduce_class(s.rep().block(a, 0, 1, l - 1), lattice) == s2)) continue;
    const CosetClass s1 = reduce_class(s.rep().block(0, 0, a, l - 1), lattice);
    for (const auto& [n2, c] : h.coefficients()) {
      const Rational n_corner = n2(a, a).a() + shift;
      const HermMatrix n_top = n2.principal(top);
      const Matrix x = n2.matrix().block(0, a, a, 1);
      const Rational room = fam.trunc() - m2.trace() - n_corner - n_top.trace();
      if (room < 0) continue;
      for_each_coset_point(s1, room, [&](const Matrix& rho2, const Rational&) {
        const Matrix rho2_scaled = rho2 * m2_inv;
        const HermMatrix n(n_top.matrix() + rho2_scaled * rho2.adjoint());
        const Matrix rho1 = x + rho2_scaled * r2.adjoint();
        rhs.emplace(Key{n_corner, JacobiKey{n, hstack(rho1, rho2)}}, c);
      });
    }
  }
  return lhs == rhs;
}

}  // namespace hfj
