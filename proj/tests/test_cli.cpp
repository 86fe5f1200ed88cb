#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "hfj/ffj_series.hpp"
#include "hfj/io.hpp"

using namespace hfj;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("hfj_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string put(const std::string& name, const std::string& text) const {
    write_file(path(name), text);
    return path(name);
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, CConstant) {
  auto r = call({"c-constant", "--field", "-3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "mu=1/3 c=2/3\n");
  r = call({"c-constant", "--field", "-1", "--reading", "squared"});
  EXPECT_EQ(r.out, "mu=1/2 c=3/4\n");
  r = call({"c-constant", "--field", "-11"});
  EXPECT_EQ(r.out, "mu=9/11 c=2/11\n");
}

TEST_F(Cli, Bounds) {
  const auto r = call({"bounds", "--field", "-1", "--degree", "2", "--weight", "24"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            "d=-1\ng=2\nk=24\nreading=linear\nslope_lb=6\nord_vanish_threshold=4\njacobi_index_threshold=8\n"
            "fm_exponent=4\ngraded_exponent=5\n"
            "json={\"d\":-1,\"g\":2,\"k\":24,\"reading\":\"linear\",\"slope_lb\":\"6\",\"ord_vanish_threshold\":\"4\","
            "\"jacobi_index_threshold\":\"8\",\"fm_exponent\":4,\"graded_exponent\":5}\n");
  const auto neg = call({"bounds", "--field", "-1", "--degree", "2", "--weight", "-2"});
  EXPECT_EQ(neg.code, 1);
  EXPECT_EQ(neg.err.rfind("error: domain: ", 0), 0u);
}

TEST_F(Cli, ThetaDecomposeRecompose) {
  const std::string table = path("theta.hjf");
  auto r = call({"theta", "--field", "-1", "--m", "2", "--trunc", "3", "--out", table});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const JacobiTable phi = read_table(read_file(table));
  EXPECT_EQ(phi.index(), HermMatrix::scalar(make_field(-1), Rational(2)));
  EXPECT_FALSE(phi.coefficients().empty());

  r = call({"decompose", "--in", table, "--out", path("theta.htc")});
  ASSERT_EQ(r.code, 0) << r.err;
  r = call({"decompose", "--in", table, "--strict"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, read_file(path("theta.htc")));

  r = call({"recompose", "--in", path("theta.htc")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, read_file(table));

  // Weight 1 against the unit i: (det u*)^1 != 1 while theta is invariant.
  r = call({"symmetry-check", "--in", path("theta.htc")});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("u=[1*w]; s=[0]; n=[0]"), std::string::npos) << r.out;

  r = call({"validate", "--in", table, "--in", path("theta.htc")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("valid HJF records="), std::string::npos);
  EXPECT_NE(r.out.find("valid HTC records="), std::string::npos);
  EXPECT_EQ(r.out.find("canonical=no"), std::string::npos);
}

TEST_F(Cli, ThetaWithShift) {
  auto r = call({"theta", "--field", "-3", "--degree", "2", "--m", "1", "--shift", "[0,0]", "--trunc", "2"});
  EXPECT_EQ(r.code, 1);
  r = call({"theta", "--field", "-3", "--degree", "2", "--m", "1", "--shift", "[1/3;0]", "--trunc", "2"});
  EXPECT_EQ(r.code, 1);
  r = call({"theta", "--field", "-3", "--degree", "2", "--m", "1", "--shift", "[0;0]", "--trunc", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string zero = r.out;
  r = call({"theta", "--field", "-3", "--degree", "2", "--m", "1", "--shift", "0", "--trunc", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, zero);
  EXPECT_EQ(r.out.rfind("HJF v1; d=-3; g=2; k=1;", 0), 0u);
}

TEST_F(Cli, InconsistentTableExitsThree) {
  const auto tag = make_field(-1);
  auto phi = theta_coeffs(reduce_class(Matrix(tag, 1, 1), HermMatrix::scalar(tag, Rational(1))), Rational(3));
  phi.set(JacobiKey{HermMatrix::scalar(tag, Rational(1)), Matrix::scalar(tag, FieldElement(tag, 1))}, FieldElement(tag, 2));
  const auto in = put("bad.hjf", write_table(phi));
  const auto r = call({"decompose", "--in", in});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.err.rfind("error: consistency: ", 0), 0u);
  EXPECT_NE(r.err.find("n'="), std::string::npos);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST_F(Cli, ParseErrorsExitTwoWithPosition) {
  const auto in = put("broken.fjs", "FJS v1; d=-1; g=1; k=0; trunc=2; dim=1\nt = [1] ; c = 1+\n");
  auto r = call({"validate", "--in", in});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("error: parse: ", 0), 0u);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
  r = call({"validate", "--in", path("missing.fjs")});
  EXPECT_EQ(r.code, 1);
  r = call({"validate", "--in", put("junk.txt", "hello\n")});
  EXPECT_EQ(r.code, 2);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(call(std::vector<std::string>{}).code, 1);
  EXPECT_EQ(call({"frobnicate"}).code, 1);
  EXPECT_EQ(call({"decompose"}).code, 1);
  EXPECT_EQ(call({"c-constant"}).code, 1);
  EXPECT_EQ(call({"c-constant", "--field", "-5"}).code, 1);
  const auto help = call({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("rearrange"), std::string::npos);
}

TEST_F(Cli, MultiplyAndSymmetry) {
  const auto tag = make_field(-1);
  const auto f = gram_count_series(tag, 2, 2, 12, 3);
  const auto a = put("a.fjs", write_series(f));
  auto r = call({"multiply", "--in", a, "--in", a});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_series(r.out), mul(f, f));

  r = call({"symmetry-check", "--in", a});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "symmetric\n");

  FourierSeries lone(tag, 2, 12, Rational(3));
  lone.set(HermMatrix::diagonal(tag, {Rational(1), Rational(0)}), FieldElement(tag, 1));
  r = call({"symmetry-check", "--in", put("lone.fjs", write_series(lone))});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("violation generator="), std::string::npos);

  const JacobiTable t = theta_coeffs(reduce_class(Matrix(tag, 1, 1), HermMatrix::scalar(tag, Rational(1))), Rational(3));
  const auto g1 = gram_count_series(tag, 2, 1, 12, 3);
  r = call({"multiply", "--in", put("g1.fjs", write_series(g1)), "--in", put("t.hjf", write_table(t))});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_table(r.out), mul(g1, t));
}

TEST_F(Cli, RearrangeAndPsi0) {
  const auto tag = make_field(-3);
  const auto fam = disassemble(gram_count_series(tag, 2, 3, 12, 3), 2);
  const auto in = put("fam.fjfam", write_family(fam));
  auto r = call({"rearrange", "--in", in});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_family(r.out), rearrange_cogenus(fam, 1));
  r = call({"rearrange", "--in", in, "--cogenus", "1", "--out", path("one.fjfam")});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(read_family(read_file(path("one.fjfam"))), rearrange_cogenus(fam, 1));

  r = call({"psi0", "--in", in});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_family(r.out), extract_psi0(fam));

  r = call({"symmetry-check", "--in", in});
  EXPECT_EQ(r.code, 0) << r.out;
  r = call({"psi0", "--in", path("one.fjfam")});
  EXPECT_EQ(r.code, 1);
}

TEST_F(Cli, OutputIsDeterministic) {
  const auto a = path("a.hjf"), b = path("b.hjf");
  ASSERT_EQ(call({"theta", "--field", "-7", "--degree", "2", "--m", "[2,0;0,1]", "--shift", "0", "--trunc", "4", "--out", a}).code, 0);
  ASSERT_EQ(call({"theta", "--field", "-7", "--degree", "2", "--m", "[2,0;0,1]", "--shift", "0", "--trunc", "4", "--out", b}).code, 0);
  EXPECT_EQ(read_file(a), read_file(b));
}
