#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <isowill/isowill.hpp>

using namespace isowill;
using cdm = Mat<cd>;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int parse_error_line(const std::string& text) {
  try {
    parse_spec(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

double max_diff(const cdm& a, const cdm& b) { return max_abs(cdm(a - b)); }

cdm mat2x4(std::array<cd, 8> v) {
  cdm m(2, 4);
  for (int i = 0; i < 8; ++i) m(i / 4, i % 4) = v[static_cast<size_t>(i)];
  return m;
}

const cd I(0, 1);

}  // namespace

TEST(SpecFile, ShippedFilesMatchBuiltinCases) {
  for (const char* name : {"sphere", "minimal"}) {
    const SpecFile file = read_spec_file(std::string(ISOWILL_SPEC_DIR) + "/" + name + ".spec");
    const SpecFile builtin = golden_case(name).spec();
    EXPECT_EQ(file.potential.name, builtin.potential.name);
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 2; ++k)
        EXPECT_TRUE((file.potential.h[j][k] - builtin.potential.h[j][k]).is_zero()) << name << " h" << j + 1 << k + 1;
  }
}

TEST(SpecFile, GridAndLambdaKeys) {
  const SpecFile s = read_spec_file(std::string(ISOWILL_SPEC_DIR) + "/sphere.spec");
  ASSERT_TRUE(s.grid);
  EXPECT_EQ(s.grid->kind, GridSpec::Kind::Polar);
  EXPECT_EQ(s.grid->rows(), 6);
  EXPECT_EQ(s.grid->cols(), 4);
  EXPECT_EQ(s.lambda_deg, (std::vector<double>{0, 90}));
  const SpecFile m = read_spec_file(std::string(ISOWILL_SPEC_DIR) + "/minimal.spec");
  ASSERT_TRUE(m.grid);
  EXPECT_EQ(m.grid->kind, GridSpec::Kind::Rect);
  EXPECT_EQ(m.grid->points().size(), 25u);
}

TEST(SpecFile, SourceBytesAreKept) {
  const std::string path = std::string(ISOWILL_SPEC_DIR) + "/minimal.spec";
  EXPECT_EQ(read_spec_file(path).source, slurp(path));
}

TEST(SpecFile, ErrorsCarryLineNumbers) {
  const std::string head = "format = isowill-potential/1\nname = t\n";
  EXPECT_EQ(parse_error_line(head + "# comment\nbogus = 1\n"), 4);
  EXPECT_EQ(parse_error_line(head + "h11.num = 1\nh11.num = 2\n"), 4);
  EXPECT_EQ(parse_error_line(head + "h11.num = 1+\n"), 3);
  EXPECT_EQ(parse_error_line(head + "h11.den = 0\n"), 3);
  EXPECT_EQ(parse_error_line(head + "h51.num = 1\n"), 3);
  EXPECT_EQ(parse_error_line(head + "just text\n"), 3);
  EXPECT_EQ(parse_error_line(head + "grid = hex\n"), 3);
  EXPECT_EQ(parse_error_line(head + "grid.radii = 1, -2\n"), 3);
  EXPECT_EQ(parse_error_line(head + "grid.arg_count = 2.5\n"), 3);
  EXPECT_EQ(parse_error_line(head + "grid.x = 0, 1\n"), 3);
  EXPECT_EQ(parse_error_line("name = t\n"), 1);
  EXPECT_EQ(parse_error_line("format = isowill-potential/2\n"), 1);
}

TEST(SpecFile, MessageNamesTheLine) {
  try {
    parse_spec("format = isowill-potential/1\nwhat = 1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
  }
}

TEST(SpecFile, GaussianLiterals) {
  const SpecFile s = parse_spec(
      "format = isowill-potential/1\n"
      "h11.num = 1/2, -3i, 2-1/3i, i\n"
      "h11.den = 1, 0, 0, 0, 1\n");
  const auto& h = s.potential.h[0][0];
  const cd z(0.3, -0.7);
  const cd want = (0.5 - 3.0 * I * z + (2.0 - I / 3.0) * z * z + I * z * z * z) / (1.0 + std::pow(z, 4));
  EXPECT_NEAR(std::abs(h.eval_num(z) - want), 0, 1e-14);
}

TEST(Potential, SphereFcheckAndPrimitives) {
  const FcheckData fc = load_potential(golden_case("sphere").spec().potential);
  for (const cd z : {cd(0.3, 0.2), cd(-1.1, 0.4)}) {
    EXPECT_LT(max_diff(eval_rmat(fc.fcheck, z), mat2x4({0, 0, -1, -z, 2, -2.0 * z, 0, 0})), 1e-14);
    EXPECT_LT(max_diff(eval_rmat(fc.f, z), mat2x4({0, 0, -z, -z * z / 2.0, 2.0 * z, -z * z, 0, 0})), 1e-14);
    cdm g(2, 2);
    g(0, 0) = -z * z * z / 3.0, g(1, 1) = z * z * z / 3.0;
    EXPECT_LT(max_diff(eval_rmat(fc.g, z), g), 1e-14);
  }
  EXPECT_TRUE(fc.polynomial());
}

TEST(Potential, MinimalFcheckAndPrimitives) {
  const FcheckData fc = load_potential(golden_case("minimal").spec().potential);
  const cd z(0.6, -0.25);
  EXPECT_LT(max_diff(eval_rmat(fc.fcheck, z), mat2x4({0, 0, 0, 0, 0, 2.0 * z, 0, 1})), 1e-14);
  EXPECT_LT(max_diff(eval_rmat(fc.f, z), mat2x4({0, 0, 0, 0, 0, z * z, 0, z})), 1e-14);
  EXPECT_LT(max_abs(eval_rmat(fc.g, z)), 1e-14);
}

TEST(Potential, ZeroSpec) {
  const SpecFile s = read_spec_file(std::string(ISOWILL_SPEC_DIR) + "/zero.spec");
  EXPECT_TRUE(is_zero_potential(s.potential));
  const FcheckData fc = load_potential(s.potential);
  EXPECT_EQ(max_abs(eval_rmat(fc.fcheck, cd(0.5, 0.5))), 0);
  EXPECT_EQ(max_abs(eval_rmat(fc.g, cd(0.5, 0.5))), 0);
}

TEST(Potential, IsotropyIsEnforced) {
  EXPECT_NO_THROW(assert_isotropic(golden_case("sphere").spec().potential));
  const SpecFile bad = parse_spec("format = isowill-potential/1\nh11.num = 1\n");
  try {
    load_potential(bad.potential);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonIsotropicPotential);
  }
}

TEST(Potential, ResidueIsNotIntegrable) {
  const SpecFile s = parse_spec(
      "format = isowill-potential/1\n"
      "h31.num = 1\nh31.den = -2, 1\n"
      "h41.num = i\nh41.den = -2, 1\n");
  try {
    load_potential(s.potential);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonintegrableResidue);
  }
}

TEST(Potential, DoublePoleIsFlaggedAtThePole) {
  const SpecFile s = parse_spec(
      "format = isowill-potential/1\n"
      "h31.num = 1\nh31.den = 4, -4, 1\n"
      "h41.num = i\nh41.den = 4, -4, 1\n");
  const FcheckData fc = load_potential(s.potential);
  EXPECT_FALSE(fc.polynomial());
  EXPECT_NEAR(pole_distance(fc, cd(2.5, 0)), 0.5, 1e-9);
  EXPECT_THROW(check_not_pole(fc, cd(2, 0)), Error);
  EXPECT_NO_THROW(check_not_pole(fc, cd(1, 0)));
}

TEST(MeromorphicFrame, IdentityAtBaseAndFdDerivative) {
  const FcheckData fc = load_potential(golden_case("sphere").spec().potential);
  const auto H0 = meromorphic_frame(fc, cd(0));
  EXPECT_LT(to_double(loop_max_abs_diff(H0, LoopMat<cd>::identity(8))), 1e-15);
  // ∂z H = H λ⁻¹ P(η₋₁): compare degree by degree at λ = e^{iθ}
  const cd z(0.4, -0.3), lam = unit_lambda(33);
  const double h = 1e-5;
  const cdm dH = cdm(loop_eval(meromorphic_frame(fc, z + h), lam) - loop_eval(meromorphic_frame(fc, z - h), lam)) *
                 cd(1 / (2 * h));
  const cdm eta = potential_matrix(eval_rmat(fc.fcheck, z)) * (1.0 / lam);
  EXPECT_LT(max_diff(dH, loop_eval(meromorphic_frame(fc, z), lam) * eta), 1e-6);
}
