#include <gtest/gtest.h>

#include <random>

#include <isowill/isowill.hpp>

using namespace isowill;
using C = std::complex<long double>;
using cdm = Mat<cd>;

namespace {

const Pipeline<C>& sphere() {
  static const Pipeline<C> pl(load_potential(golden_case("sphere").spec().potential));
  return pl;
}

GQ random_gq(std::mt19937_64& g) {
  std::uniform_int_distribution<long> n(-12, 12), d(1, 9);
  return GQ(qfrac(n(g), d(g)), qfrac(n(g), d(g)));
}

K2Params<GQ> random_k2(std::mt19937_64& g) { return {random_gq(g), random_gq(g), random_gq(g), random_gq(g)}; }

const C z1(0.3L, 0.2L);

}  // namespace

TEST(K2, SelfBracketVanishes) {
  std::mt19937_64 g(3);
  const Mat<GQ> a = k2_matrix(random_k2(g));
  EXPECT_TRUE(is_zero(Mat<GQ>(a * a - a * a)));
  EXPECT_TRUE(k2_closure_check(a, a));
}

TEST(K2, HandComputedBracket) {
  const K2Params<GQ> a{GQ(1), GQ(1), GQ(0), GQ(0)}, b{GQ(0), GQ(0), GQ(1), GQ(0)};
  const Mat<GQ> br = k2_matrix(a) * k2_matrix(b) - k2_matrix(b) * k2_matrix(a);
  const K2Params<GQ> p = k2_params(br);
  EXPECT_EQ(p.b13, GQ(1));
  EXPECT_EQ(p.b14, GQ(0));
  EXPECT_EQ(p.b12, GQ(-2));
  EXPECT_EQ(p.b34, GQ(2));
  EXPECT_TRUE(k2_closure_check(k2_matrix(a), k2_matrix(b)));
}

TEST(K2, RandomPairsCloseExactly) {
  std::mt19937_64 g(99);
  for (int n = 0; n < 100; ++n) {
    const Mat<GQ> a = k2_matrix(random_k2(g)), b = k2_matrix(random_k2(g));
    ASSERT_TRUE(k2_closure_check(a, b)) << n;
  }
}

TEST(K2, PatternViolationIsReported) {
  Mat<GQ> a = k2_matrix(K2Params<GQ>{GQ(1), GQ(2), GQ(3), GQ(4)});
  EXPECT_TRUE(in_k2(a));
  a(0, 0) = GQ(1);
  EXPECT_FALSE(in_k2(a));
  try {
    k2_closure_check(a, a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PatternViolation);
  }
}

TEST(B1, ResidualsOnHandBuiltMatrices) {
  EXPECT_EQ(b1_pattern_residual(cdm(4, 4)), 0);
  EXPECT_EQ(b1_isotropy_residual(cdm(4, 4)), 0);
  cdm diag(4, 4);
  for (int i = 0; i < 4; ++i) diag(i, i) = 1;
  EXPECT_GT(b1_pattern_residual(diag), 0.5);
  EXPECT_GT(b1_isotropy_residual(diag), 0.5);
}

TEST(MaurerCartan, B1AtBasePointIsThePotential) {
  const auto mc = mc_form(sphere(), C(0), 1e-4L);
  const C i(0, 1);
  const C want[4][4] = {{0, 0, -i, 1}, {0, 0, -i, 1}, {-2, -2.0L * i, 0, 0}, {2.0L * i, -2, 0, 0}};
  long double e = 0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) e = std::max(e, std::abs(mc.B1(r, c) - want[r][c] / 2.0L));
  EXPECT_LT(static_cast<double>(e), 1e-7);
  EXPECT_LT(static_cast<double>(mc.stray), 1e-7);
}

TEST(MaurerCartan, StructureAtInteriorPoints) {
  for (const C z : {z1, C(-0.8L, 0.5L), C(1.3L, -0.6L)}) {
    const auto mc = mc_form(sphere(), z, 1e-4L);
    EXPECT_LT(static_cast<double>(b1_pattern_residual(mc.B1)), 1e-6);
    EXPECT_LT(static_cast<double>(b1_isotropy_residual(mc.B1)), 1e-6);
    EXPECT_LT(static_cast<double>(mc.stray / mc.scale), 1e-6);
    EXPECT_LT(static_cast<double>(mc.antiholo / mc.scale), 1e-6);
    EXPECT_LT(static_cast<double>(cartan_residual(mc) / mc.scale), 1e-6);
    EXPECT_LT(static_cast<double>(k2_pattern_residual(mc.A2)), 1e-6);
  }
}

TEST(MaurerCartan, BlockFormulasAgree) {
  for (const C z : {z1, C(-1.1L, 0.4L)}) {
    const auto r = check_block_formulas(sphere(), z, 1e-4L);
    EXPECT_LT(static_cast<double>(r.p), 1e-6);
    EXPECT_LT(static_cast<double>(r.a1), 1e-4);
    EXPECT_LT(static_cast<double>(r.a0), 1e-4);
    EXPECT_LT(static_cast<double>(r.a4), 1e-4);
  }
}

TEST(MaurerCartan, OdeReconstructsTheFrame) {
  const auto r20 = ode_frame_residual(sphere(), C(0.6L, 0.3L), C(1), 20, 1e-4L);
  const auto r40 = ode_frame_residual(sphere(), C(0.6L, 0.3L), C(1), 40, 1e-4L);
  EXPECT_LT(static_cast<double>(r40), 1e-6);
  EXPECT_LT(r40, r20);
}

TEST(Flatness, FamilyOfConnectionsIsFlat) {
  for (const double deg : {0.0, 90.0, 60.0}) {
    const C lam = from_cd<C>(unit_lambda(deg));
    const auto a = flatness_residual(sphere(), z1, lam, 1e-4L);
    const auto b = flatness_residual(sphere(), z1, lam, 5e-5L);
    EXPECT_LT(static_cast<double>(a), 1e-3) << deg;
    EXPECT_GT(static_cast<double>(a / b), 3) << deg;
  }
}

TEST(Flatness, ConstantFrameGivesZero) {
  const Pipeline<C> pl(load_potential(parse_spec("format = isowill-potential/1\n").potential));
  EXPECT_EQ(static_cast<double>(flatness_residual(pl, z1, C(1), 1e-4L)), 0);
}

TEST(Stencil, PoleInsideStencilThrows) {
  const SpecFile s = parse_spec(
      "format = isowill-potential/1\n"
      "h31.num = 1\nh31.den = 4, -4, 1\n"
      "h41.num = i\nh41.den = 4, -4, 1\n");
  const Pipeline<C> pl(load_potential(s.potential), Mode::Numeric);
  EXPECT_THROW(mc_form(pl, C(2, 0), 1e-4L), Error);
}
