#include <gtest/gtest.h>

#include <random>

#include "generators.hpp"
#include "hfj/ffj_series.hpp"

using namespace hfj;

namespace {

FieldElement fe(FieldTag tag, long a, long b = 0) { return FieldElement(tag, a, b); }

HermMatrix herm(FieldTag tag, std::vector<std::vector<FieldElement>> rows) {
  return HermMatrix(Matrix::from_rows(tag, rows));
}

// Theta series of the lattice O_E^2 in degree g, truncated at trace 4.
const FourierSeries& lattice_theta(int d, std::size_t g) {
  static std::map<std::pair<int, std::size_t>, FourierSeries> cache;
  auto it = cache.find({d, g});
  if (it == cache.end()) it = cache.emplace(std::pair{d, g}, gram_count_series(make_field(d), 2, g, 12, 4)).first;
  return it->second;
}

// Degree g - 1 family of cogenus l - 1 placed at indices diag(m, 0) with a zero last r column.
FJFamily pad(const FJFamily& fam) {
  const auto tag = fam.tag();
  FJFamily out(tag, fam.degree() + 1, fam.cogenus() + 1, fam.weight(), fam.trunc());
  for (const auto& [m, phi] : fam.tables()) {
    const HermMatrix big(block_matrix(m.matrix(), Matrix(tag, m.size(), 1), Matrix(tag, 1, m.size()), Matrix(tag, 1, 1)));
    for (const auto& [key, c] : phi.coefficients())
      out.set(big, JacobiKey{key.n, hstack(key.r, Matrix(tag, key.r.rows(), 1))}, c);
  }
  return out;
}

}  // namespace

TEST(FJFamily, SmallExamples) {
  const auto tag = make_field(-1);
  const FJFamily empty(tag, 3, 2, 12, Rational(4));
  EXPECT_TRUE(assemble(empty).is_zero());
  EXPECT_TRUE(disassemble(FourierSeries(tag, 3, 12, Rational(4)), 2).is_zero());

  FJFamily fam(tag, 2, 1, 4, Rational(3));
  fam.set(HermMatrix::zero(tag, 1), JacobiKey{HermMatrix::zero(tag, 1), Matrix(tag, 1, 1)}, fe(tag, 1));
  const auto f = assemble(fam);
  EXPECT_EQ(f.coefficients().size(), 1u);
  EXPECT_EQ(f.scalar(HermMatrix::zero(tag, 2)), fe(tag, 1));

  FourierSeries id(tag, 2, 4, Rational(3));
  id.set(HermMatrix::identity(tag, 2), fe(tag, 5));
  const auto split = disassemble(id, 1);
  ASSERT_EQ(split.tables().size(), 1u);
  const auto& phi1 = split.tables().at(HermMatrix::identity(tag, 1));
  EXPECT_EQ(phi1.scalar(JacobiKey{HermMatrix::identity(tag, 1), Matrix(tag, 1, 1)}), fe(tag, 5));
  EXPECT_EQ(phi1.trunc(), 2);

  EXPECT_THROW(FJFamily(tag, 2, 2, 0, Rational(1)), DomainError);
  EXPECT_THROW(fam.set(HermMatrix::scalar(tag, Rational(4)), JacobiKey{HermMatrix::zero(tag, 1), Matrix(tag, 1, 1)},
                       fe(tag, 1)),
               DomainError);
}

TEST(FJFamily, AssembleDisassembleRoundTrip) {
  for (int d : {-1, -3}) {
    const auto tag = make_field(d);
    const auto& f = lattice_theta(d, 3);
    for (std::size_t l : {1u, 2u}) {
      const auto fam = disassemble(f, l);
      EXPECT_EQ(assemble(fam), f);
      EXPECT_EQ(disassemble(assemble(fam), l), fam);
    }
    std::mt19937 rng(d + 10);
    const auto g = gen::series(tag, 3, 2, 2, rng, 0.2);
    EXPECT_EQ(assemble(disassemble(g, 2)), g);
  }
}

TEST(FJFamily, RearrangeMatchesDirectSplit) {
  for (int d : {-1, -3}) {
    const auto& f = lattice_theta(d, 3);
    const auto fam = disassemble(f, 2);
    const auto re = rearrange_cogenus(fam);
    EXPECT_EQ(re, disassemble(f, 1));
    EXPECT_EQ(assemble(re), f);
  }
  const auto tag = make_field(-1);
  EXPECT_TRUE(rearrange_cogenus(FJFamily(tag, 3, 2, 0, Rational(3))).is_zero());
  EXPECT_THROW(rearrange_cogenus(FJFamily(tag, 3, 1, 0, Rational(3))), DomainError);
}

TEST(FJFamily, RearrangeSingleCoefficientByHand) {
  const auto tag = make_field(-1);
  const FieldElement one = fe(tag, 1), zero = fe(tag, 0), i = fe(tag, 0, 1);
  // t = [1, 1, 0; 1, 2, i; 0, -i, 1]
  FJFamily fam(tag, 3, 2, 4, Rational(4));
  const HermMatrix m = herm(tag, {{fe(tag, 2), i}, {-i, one}});
  fam.set(m, JacobiKey{HermMatrix::identity(tag, 1), Matrix::from_rows(tag, {{one, zero}})}, fe(tag, 7));
  const auto re = rearrange_cogenus(fam);
  ASSERT_EQ(re.tables().size(), 1u);
  const auto& [m2, psi] = *re.tables().begin();
  EXPECT_EQ(m2, HermMatrix::identity(tag, 1));
  const HermMatrix n = herm(tag, {{one, one}, {one, fe(tag, 2)}});
  const Matrix r = Matrix::from_rows(tag, {{zero}, {i}});
  EXPECT_EQ(psi.scalar(JacobiKey{n, r}), fe(tag, 7));
  EXPECT_EQ(psi.coefficients().size(), 1u);
}

TEST(FJFamily, Psi0) {
  for (int d : {-1, -3}) {
    const auto tag = make_field(d);
    const auto lower = disassemble(lattice_theta(d, 2), 1);
    EXPECT_EQ(extract_psi0(pad(lower)), lower);
    // Restricting the degree-3 theta series to t with zero last row gives the degree-2 one.
    const auto psi0 = extract_psi0(disassemble(lattice_theta(d, 3), 2));
    EXPECT_EQ(psi0, lower);
    EXPECT_TRUE(check_family(psi0, gl_generators(tag, 2)).empty());
  }
  const auto tag = make_field(-1);
  EXPECT_TRUE(extract_psi0(FJFamily(tag, 3, 2, 0, Rational(3))).is_zero());
  FJFamily fam(tag, 3, 2, 0, Rational(3));
  // r' = 0 is forced at a zero corner: the key is rejected on entry.
  EXPECT_THROW(fam.set(HermMatrix::diagonal(tag, {Rational(1), Rational(0)}),
                       JacobiKey{HermMatrix::identity(tag, 1), Matrix::from_rows(tag, {{fe(tag, 0), fe(tag, 1)}})},
                       fe(tag, 1)),
               DomainError);
  EXPECT_THROW(extract_psi0(disassemble(lattice_theta(-1, 3), 1)), DomainError);
}

TEST(FJFamily, FormalThetaMatchesClassicalSlice) {
  for (int d : {-1, -3}) {
    const auto tag = make_field(d);
    const auto& f = lattice_theta(d, 3);
    const auto fam = disassemble(f, 2);
    const HermMatrix m2 = HermMatrix::identity(tag, 1);
    const auto formal = formal_theta_coeffs(fam, m2, ThetaCheck::strict);
    const auto classical = theta_decompose(disassemble(f, 1).table(m2), ThetaCheck::strict);
    EXPECT_EQ(formal, classical);
    EXPECT_EQ(formal.components.size(), static_cast<std::size_t>(tag.discriminant() * tag.discriminant()));
    EXPECT_EQ(theta_recompose(formal, formal.trunc), formal_fj_coefficient(fam, m2));
    EXPECT_TRUE(check_component_symmetry(formal, gl_generators(tag, 2)).empty());
  }
}

TEST(FJFamily, BrokenFormalCoefficientGivesBobWitness) {
  const auto tag = make_field(-1);
  auto fam = disassemble(lattice_theta(-1, 3), 2);
  // Bump c(t) for t = [1, 0, 1; 0, 1, 0; 1, 0, 1]: psi_1 at r = (1; 0), the probed representative.
  const HermMatrix m = HermMatrix::identity(tag, 2);
  const JacobiKey key{HermMatrix::identity(tag, 1), Matrix::from_rows(tag, {{fe(tag, 0), fe(tag, 1)}})};
  fam.set(m, key, fam.table(m).scalar(key) + fe(tag, 1));
  try {
    formal_theta_coeffs(fam, HermMatrix::identity(tag, 1));
    FAIL() << "expected a Bob violation";
  } catch (const ConsistencyError& e) {
    EXPECT_NE(std::string(e.what()).find("r''="), std::string::npos) << e.what();
  }
  EXPECT_FALSE(check_family(fam, gl_generators(tag, 3)).empty());
}

TEST(FJFamily, CheckFamily) {
  for (int d : {-1, -3}) {
    const auto tag = make_field(d);
    const auto fam = disassemble(lattice_theta(d, 3), 2);
    EXPECT_TRUE(check_family(fam, gl_generators(tag, 3)).empty());
    EXPECT_TRUE(check_family(FJFamily(tag, 3, 2, 12, Rational(4)), gl_generators(tag, 3)).empty());
    auto broken = fam;
    const HermMatrix m = HermMatrix::diagonal(tag, {Rational(0), Rational(1)});
    const JacobiKey key{HermMatrix::scalar(tag, Rational(2)), Matrix(tag, 1, 2)};
    broken.set(m, key, fe(tag, 3));
    const auto report = check_family(broken, gl_generators(tag, 3));
    ASSERT_FALSE(report.empty());
    bool named = false;
    for (const auto& v : report) named = named || v.t == block_index(key.n, key.r, m);
    EXPECT_TRUE(named);
  }
  // The sub-action alone already sees a coefficient that is not invariant under r -> r + lambda m.
  const auto tag = make_field(-1);
  FJFamily lone(tag, 2, 1, 0, Rational(3));
  lone.set(HermMatrix::identity(tag, 1), JacobiKey{HermMatrix::zero(tag, 1), Matrix(tag, 1, 1)}, fe(tag, 1));
  EXPECT_EQ(check_family(lone, {}).size(), 4u);  // two generators, each seen from both sides
}

TEST(FJFamily, PartialDecompositionIdentity) {
  for (int d : {-1, -3}) {
    const auto tag = make_field(d);
    const auto fam = disassemble(lattice_theta(d, 3), 2);
    const HermMatrix m2 = HermMatrix::identity(tag, 1);
    for (const auto& s2 : delta_classes(1, m2)) {
      const Matrix r0 = small_rep(s2);
      for (const Matrix& r2 : {r0, r0 + Matrix::scalar(tag, fe(tag, 1)), r0 - Matrix::scalar(tag, FieldElement::omega(tag))})
        EXPECT_TRUE(partial_decomposition_check(fam, m2, s2, r2)) << d << " " << to_string(r2);
    }
    const CosetClass zero = reduce_class(Matrix(tag, 1, 1), m2);
    EXPECT_TRUE(partial_decomposition_check(FJFamily(tag, 3, 2, 12, Rational(4)), m2, zero, Matrix(tag, 1, 1)));
    // Perturb phi_m at m = (1 1; 1 1), i.e. r' = 1, away from the canonical representative r' = 0.
    auto broken = fam;
    const HermMatrix m = herm(tag, {{fe(tag, 1), fe(tag, 1)}, {fe(tag, 1), fe(tag, 1)}});
    const JacobiKey key{HermMatrix::identity(tag, 1), Matrix::from_rows(tag, {{fe(tag, 1), fe(tag, 1)}})};
    broken.set(m, key, broken.table(m).scalar(key) + fe(tag, 1));
    const Matrix one = Matrix::scalar(tag, fe(tag, 1));
    EXPECT_FALSE(partial_decomposition_check(broken, m2, zero, one));
    EXPECT_TRUE(partial_decomposition_check(broken, m2, zero, Matrix(tag, 1, 1)));
    EXPECT_THROW(partial_decomposition_check(fam, m2, zero, Matrix::scalar(tag, FieldElement(tag, make_rational(1, 2)))),
                 DomainError);
  }
}
