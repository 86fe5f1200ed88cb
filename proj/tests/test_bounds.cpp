#include <gtest/gtest.h>

#include "hfj/bounds.hpp"
#include "hfj/jacobi_forms.hpp"

using namespace hfj;

TEST(Bounds, SlopeSpotValues) {
  for (int d : norm_euclidean_fields()) EXPECT_EQ(slope_lower_bound(1, make_field(d)), 12);
  const auto gauss = make_field(-1);
  EXPECT_EQ(slope_lower_bound(2, gauss), 6);
  EXPECT_EQ(slope_lower_bound(3, gauss), 3);
  EXPECT_EQ(slope_lower_bound(3, make_field(-3)), make_rational(16, 3));
  EXPECT_EQ(slope_lower_bound(2, gauss, CReading::squared), 9);
  EXPECT_THROW(slope_lower_bound(0, gauss), DomainError);
}

TEST(Bounds, SlopeRecursion) {
  for (int d : norm_euclidean_fields()) {
    const auto tag = make_field(d);
    const Rational c = 1 - euclidean_constant(tag).mu;
    for (std::size_t g = 1; g < 6; ++g) {
      EXPECT_EQ(slope_lower_bound(g + 1, tag), c * slope_lower_bound(g, tag));
      EXPECT_GT(slope_lower_bound(g, tag), 0);
    }
  }
}

TEST(Bounds, Thresholds) {
  const auto gauss = make_field(-1), eis = make_field(-3);
  EXPECT_EQ(vanishing_threshold(0, 3, gauss), 0);
  EXPECT_EQ(vanishing_threshold(12, 1, gauss), 1);
  EXPECT_EQ(vanishing_threshold(24, 2, gauss), 4);
  EXPECT_EQ(jacobi_index_threshold(0, 2, gauss), 0);
  EXPECT_EQ(jacobi_index_threshold(12, 1, gauss), 2);
  EXPECT_EQ(jacobi_index_threshold(12, 1, eis), make_rational(3, 2));
  EXPECT_THROW(vanishing_threshold(-1, 1, gauss), DomainError);
  for (int d : norm_euclidean_fields()) {
    const auto tag = make_field(d);
    for (std::size_t g = 1; g <= 4; ++g) {
      for (long k = 0; k < 40; k += 4) {
        EXPECT_LT(vanishing_threshold(k, g, tag), vanishing_threshold(k + 1, g, tag));
        EXPECT_LT(jacobi_index_threshold(k, g, tag), jacobi_index_threshold(k + 1, g, tag));
        // smaller slope bound at higher degree: thresholds grow
        if (k > 0) {
          EXPECT_LT(vanishing_threshold(k, g, tag), vanishing_threshold(k, g + 1, tag));
        }
      }
    }
  }
}

TEST(Bounds, TruncationBudget) {
  const auto gauss = make_field(-1);
  EXPECT_EQ(truncation_budget(12, 2, 0, gauss), (std::vector<long>{0, 1, 2}));
  EXPECT_TRUE(truncation_budget(12, 2, 3, gauss).empty());
  EXPECT_EQ(truncation_budget(12, 2, 2, gauss), (std::vector<long>{2}));
  for (int d : norm_euclidean_fields()) {
    const auto tag = make_field(d);
    const Rational c = euclidean_constant(tag).c;
    for (std::size_t g = 2; g <= 4; ++g)
      for (long start = 1; start <= 4; ++start)
        for (long k = 0; k < 60; ++k) {
          Rational edge = 12 * start;
          for (std::size_t i = 1; i < g; ++i) edge *= c;
          EXPECT_EQ(truncation_budget(k, g, start, tag).empty(), Rational(k) < edge) << d << " " << g << " " << k;
        }
  }
  EXPECT_THROW(truncation_budget(12, 1, 0, gauss), DomainError);
}

TEST(Bounds, DimensionExponentsAndTraceConstant) {
  EXPECT_EQ(dimension_exponents(1).fm, 1);
  EXPECT_EQ(dimension_exponents(1).graded, 2);
  EXPECT_EQ(dimension_exponents(2).fm, 4);
  EXPECT_EQ(dimension_exponents(2).graded, 5);
  EXPECT_EQ(dimension_exponents(3).fm, 9);
  EXPECT_EQ(dimension_exponents(3).graded, 10);
  const auto c1 = trace_formula_constant(12, 1);
  EXPECT_EQ(c1.coefficient, make_rational(11, 4));
  EXPECT_EQ(c1.pi_power, -1);
  const auto c2 = trace_formula_constant(12, 2);
  EXPECT_EQ(c2.coefficient, make_rational(2475, 16));
  EXPECT_EQ(c2.pi_power, -4);
}

TEST(Bounds, ReportFormats) {
  const auto report = bound_report(24, 2, make_field(-1));
  EXPECT_EQ(to_text(report),
            "d=-1\ng=2\nk=24\nreading=linear\nslope_lb=6\nord_vanish_threshold=4\njacobi_index_threshold=8\n"
            "fm_exponent=4\ngraded_exponent=5\n");
  EXPECT_EQ(to_json(report).dump(),
            R"({"d":-1,"g":2,"k":24,"reading":"linear","slope_lb":"6","ord_vanish_threshold":"4",)"
            R"("jacobi_index_threshold":"8","fm_exponent":4,"graded_exponent":5})");
  const auto sq = bound_report(24, 2, make_field(-1), CReading::squared);
  EXPECT_EQ(sq.slope_lb, 9);
  EXPECT_EQ(sq.jacobi_index_threshold, make_rational(32, 9));
}

TEST(Bounds, ThetaOrderBelowCellBound) {
  for (int d : norm_euclidean_fields()) {
    const auto tag = make_field(d);
    const Rational c = euclidean_constant(tag).c;
    for (long m = 1; m <= 5; ++m)
      for (const auto& s : delta_classes(tag, 1, m)) {
        const auto th = theta_coeffs(s, Rational(m));
        EXPECT_LE(ord(th), Order((1 - c) * m)) << d << " " << m;
      }
  }
}
