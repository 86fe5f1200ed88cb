#include <gtest/gtest.h>

#include <random>

#include "generators.hpp"
#include "hfj/io.hpp"

using namespace hfj;

namespace {

ParseError parse_failure(const std::function<void()>& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "expected a parse error";
  return ParseError("none");
}

}  // namespace

TEST(Io, SeriesRoundTrip) {
  for (int d : norm_euclidean_fields()) {
    const auto tag = make_field(d);
    std::mt19937 rng(d + 70);
    for (std::size_t g = 1; g <= 2; ++g) {
      const auto f = gen::series(tag, g, 6, 3, rng);
      const std::string text = write_series(f);
      EXPECT_EQ(read_series(text), f);
      EXPECT_EQ(write_series(read_series(text)), text);
    }
  }
  FourierSeries vec(make_field(-2), 1, 0, Rational(2), 2);
  vec.set(HermMatrix::scalar(vec.tag(), Rational(1)), Coefficient{FieldElement(vec.tag(), 1, 2), FieldElement(vec.tag())});
  EXPECT_EQ(read_series(write_series(vec)), vec);
}

TEST(Io, SeriesFormatIsStable) {
  const auto tag = make_field(-3);
  FourierSeries f(tag, 2, 4, Rational(2));
  f.set(HermMatrix::zero(tag, 2), FieldElement(tag, 1));
  f.set(HermMatrix::identity(tag, 2), FieldElement(tag, make_rational(-1, 2), Rational(3)));
  EXPECT_EQ(write_series(f),
            "FJS v1; d=-3; g=2; k=4; trunc=2; dim=1\n"
            "t = [0,0;0,0] ; c = 1\n"
            "t = [1,0;0,1] ; c = -1/2+3*w\n");
  const std::string with_comments = "# fixture\nFJS v1; d=-3; g=2; k=4; trunc=2; dim=1\n\nt = [1,0;0,1] ; c = -1/2+3*w\n";
  EXPECT_EQ(read_series(with_comments).coefficients().size(), 1u);
}

TEST(Io, TableAndComponentsRoundTrip) {
  for (int d : norm_euclidean_fields()) {
    const auto tag = make_field(d);
    std::mt19937 rng(d + 80);
    const auto v = gen::components(3, scalar_index(tag, 2), 3, rng);
    const std::string vt = write_components(v);
    EXPECT_EQ(read_components(vt), v);
    EXPECT_EQ(write_components(read_components(vt)), vt);
    const auto phi = theta_recompose(v, Rational(3));
    const std::string pt = write_table(phi);
    EXPECT_EQ(read_table(pt), phi);
    EXPECT_EQ(write_table(read_table(pt)), pt);
  }
}

TEST(Io, FamilyRoundTrip) {
  for (int d : {-1, -7}) {
    const auto tag = make_field(d);
    const auto fam = disassemble(gram_count_series(tag, 2, 3, 12, 3), 2);
    const std::string text = write_family(fam);
    EXPECT_EQ(read_family(text), fam);
    EXPECT_EQ(write_family(read_family(text)), text);
    EXPECT_EQ(detect_format(text), "FJFAM");
  }
  const FJFamily empty(make_field(-1), 3, 2, 0, Rational(2));
  EXPECT_EQ(write_family(empty), "FJFAM v1; d=-1; g=3; l=2; k=0; trunc=2; dim=1\n");
  EXPECT_EQ(read_family(write_family(empty)), empty);
}

TEST(Io, ErrorsCarryLineAndColumn) {
  auto e = parse_failure([] { read_series("FJS v1; d=-5; g=1; k=0; trunc=2; dim=1\n"); });
  EXPECT_EQ(e.line(), 1u);
  EXPECT_EQ(e.column(), 11u);

  e = parse_failure([] { read_series("FJS v1; d=-1; g=1; k=0; trunc=2; dim=1\nt = [1] ; c = 1\nt = [2] ; c = 1+\n"); });
  EXPECT_EQ(e.line(), 3u);
  EXPECT_EQ(e.column(), 15u);

  e = parse_failure([] { read_series("FJS v1; d=-1; g=1; k=0; trunc=2; dim=1\nt = [1/2] ; c = 1\n"); });
  EXPECT_EQ(e.line(), 2u);
  EXPECT_EQ(e.column(), 5u);

  e = parse_failure([] { read_series("FJS v1; d=-1; g=1; k=0; trunc=2; dim=1\nt = [1] ; c = 1\nt = [1] ; c = 2\n"); });
  EXPECT_EQ(e.line(), 3u);

  e = parse_failure([] { read_series("FJS v1; d=-1; g=1; k=0; trunc=2\n"); });
  EXPECT_EQ(e.line(), 1u);

  e = parse_failure([] { read_table("HJF v1; d=-1; g=1; k=1; m=[1]; trunc=2; dim=1\n([1]; [2]) = 1\n"); });
  EXPECT_EQ(e.line(), 2u);

  e = parse_failure([] { read_family("FJFAM v1; d=-1; g=3; l=2; k=0; trunc=2; dim=1\n([0]; [0,0]) = 1\n"); });
  EXPECT_EQ(e.line(), 2u);

  e = parse_failure([] { read_family("FJFAM v1; d=-1; g=3; l=2; k=0; trunc=2; dim=1\n[index m = [1,0;0,-1]]\n"); });
  EXPECT_EQ(e.line(), 2u);
  EXPECT_EQ(e.column(), 12u);

  e = parse_failure([] { read_components("HTC v1; d=-1; g=1; k=3; m=[1]; trunc=2; dim=1\n"); });
  EXPECT_GE(e.line(), 2u);

  EXPECT_THROW(read_series(""), ParseError);
  EXPECT_EQ(detect_format("junk"), "");
}
