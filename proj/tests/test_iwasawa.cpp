#include <gtest/gtest.h>

#include <random>

#include <isowill/isowill.hpp>

using namespace isowill;
using cdm = Mat<cd>;

namespace {

const FcheckData& sphere_fc() {
  static const FcheckData fc = load_potential(golden_case("sphere").spec().potential);
  return fc;
}
const FcheckData& minimal_fc() {
  static const FcheckData fc = load_potential(golden_case("minimal").spec().potential);
  return fc;
}

template <size_t N>
cdm from_array(const std::array<std::array<cd, N>, N>& a) {
  cdm m(N, N);
  for (size_t i = 0; i < N; ++i)
    for (size_t j = 0; j < N; ++j) m(static_cast<int>(i), static_cast<int>(j)) = a[i][j];
  return m;
}

double rel_diff(const cdm& a, const cdm& b) { return max_abs(cdm(a - b)) / std::max(1.0, max_abs(b)); }

std::vector<cd> sample_points() {
  std::mt19937 g(11);
  std::uniform_real_distribution<double> u(-1.4, 1.4);
  std::vector<cd> pts;
  for (int k = 0; k < 12; ++k) pts.emplace_back(u(g), u(g));
  return pts;
}

}  // namespace

TEST(W0, IdentityAtBasePoint) {
  const auto pot = eval_fcheck(sphere_fc(), cd(0));
  const auto w = solve_w0(pot.f, pot.g);
  EXPECT_EQ(max_abs(cdm(w.d - cdm::identity(2))), 0);
  EXPECT_EQ(max_abs(cdm(w.q - cdm::identity(4))), 0);
  EXPECT_EQ(max_abs(cdm(w.a - cdm::identity(2))), 0);
  EXPECT_EQ(max_abs(w.u), 0);
  EXPECT_EQ(max_abs(w.gcheck), 0);
  EXPECT_DOUBLE_EQ(big_cell_margin(sphere_fc(), cd(0)), 1.0);
}

TEST(W0, ExactSystemHoldsSymbolically) {
  const ExactW0 w = solve_w0_exact(sphere_fc());
  const ExactW0Check c = check_w0_exact(w);
  EXPECT_TRUE(c.a && c.b && c.c && c.d && c.e && c.gcheck);
  EXPECT_TRUE(check_w0_exact(solve_w0_exact(minimal_fc())).all());
}

TEST(W0, SphereBlocksMatchClosedForms) {
  const ExactW0Eval<cd> ev(solve_w0_exact(sphere_fc()));
  for (const cd z : sample_points()) {
    const auto w = ev(z);
    const double dd = golden::sphere::det_d(z);
    EXPECT_LT(rel_diff(w.d, from_array(golden::sphere::d(z))), 1e-13) << z;
    EXPECT_NEAR(std::abs(ev.det_d(z) - dd) / dd, 0, 1e-14);
    EXPECT_LT(rel_diff(cdm(w.q * cd(dd)), from_array(golden::sphere::dq(z))), 1e-12) << z;
    cdm dus(4, 2);
    const auto ref = golden::sphere::du_sharp(z);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 2; ++j) dus(i, j) = ref[static_cast<size_t>(i)][static_cast<size_t>(j)];
    EXPECT_LT(rel_diff(cdm(w.usharp * cd(dd)), dus), 1e-12) << z;
  }
}

TEST(W0, NumericAndExactAgree) {
  const ExactW0Eval<cd> ev(solve_w0_exact(sphere_fc()));
  for (const cd z : sample_points()) {
    const auto pot = eval_fcheck(sphere_fc(), z);
    const auto a = solve_w0(pot.f, pot.g), b = ev(z);
    for (auto [x, y] : {std::pair{&a.a, &b.a}, {&a.q, &b.q}, {&a.d, &b.d}, {&a.u, &b.u}, {&a.gcheck, &b.gcheck}})
      EXPECT_LT(rel_diff(*x, *y), 1e-12);
    EXPECT_LT(w0_residuals(a, pot.f, pot.g).max(), 1e-12);
    EXPECT_LT(w0_residuals(b, pot.f, pot.g).max(), 1e-12);
  }
}

TEST(W0, MarginIsAtLeastTheSmallestEigenvalue) {
  for (const cd z : sample_points()) {
    const auto d = golden::sphere::d(z);
    const double tr = d[0][0].real() + d[1][1].real(), det = golden::sphere::det_d(z);
    const double lmin = (tr - std::sqrt(tr * tr - 4 * det)) / 2;
    EXPECT_GE(big_cell_margin(sphere_fc(), z), lmin * (1 - 1e-12));
    EXPECT_GT(lmin, 0);
  }
}

TEST(Factor, IdentityBlocks) {
  W0Blocks<cd> w{cdm::identity(2), cdm::identity(4), cdm::identity(2), cdm(2, 4), cdm(4, 2), cdm(2, 2)};
  const auto l = factor_l0(w);
  EXPECT_EQ(max_abs(cdm(l.l1 - cdm::identity(2))), 0);
  EXPECT_EQ(max_abs(cdm(l.l0 - cdm::identity(4))), 0);
  EXPECT_EQ(max_abs(cdm(l.l4 - cdm::identity(2))), 0);
}

TEST(Factor, SphereFactorsMatchClosedForms) {
  const ExactW0Eval<cd> ev(solve_w0_exact(sphere_fc()));
  for (const cd z : sample_points()) {
    if (std::abs(z) >= golden::sphere::blowup_radius()) continue;
    const auto w = ev(z);
    const auto l = factor_l0(w, Gauge::DetD);
    EXPECT_LT(rel_diff(l.l1, from_array(golden::sphere::l1(z))), 1e-12) << z;
    EXPECT_LT(rel_diff(l.l0, from_array(golden::sphere::l0(z))), 1e-12) << z;
    EXPECT_LT(l0_residuals(l, w).max(), 1e-12);
  }
}

TEST(Factor, MinimalFactorMatchesClosedForm) {
  for (const cd z : sample_points()) {
    const auto pot = eval_fcheck(minimal_fc(), z);
    const auto w = solve_w0(pot.f, pot.g);
    const auto l = factor_l0(w, Gauge::UnitMiddle);
    EXPECT_LT(rel_diff(l.l0, from_array(golden::minimal::l0(golden::minimal::polynomial_example(z)))), 1e-12) << z;
    EXPECT_NEAR(golden::minimal::det_d(golden::minimal::polynomial_example(z)), det2(w.d).real(), 1e-12);
  }
}

TEST(Factor, NonFactorableQIsRejected) {
  W0Blocks<cd> w{cdm::identity(2), cdm::identity(4), cdm::identity(2), cdm(2, 4), cdm(4, 2), cdm(2, 2)};
  w.q(1, 1) = 3;  // breaks the J-conjugate triangular form
  try {
    factor_l0(w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutsideBigCell);
  }
  W0Blocks<cd> bad = w;
  bad.q = cdm::identity(4);
  bad.d(0, 0) = -1;
  EXPECT_THROW(factor_l0(bad), Error);
}

TEST(Frame, IdentityAtBaseAndStructure) {
  const Pipeline<cd> pl(sphere_fc());
  const auto p0 = pl.at(cd(0));
  EXPECT_LT(to_double(loop_max_abs_diff(p0.F, LoopMat<cd>::identity(8))), 1e-15);
  for (const cd z : sample_points()) {
    const auto p = pl.at(z);
    // W carries no v block and F₊ = L₀τ̌(W)⁻¹ has no negative degrees
    const cdm w1 = p.W.coeff(-1);
    EXPECT_EQ(max_abs(cdm(w1.block(2, 0, 4, 2))), 0);
    EXPECT_EQ(max_abs(cdm(w1.block(6, 2, 2, 4))), 0);
    const auto Fp = positive_factor(p.W, p.L0);
    EXPECT_EQ(to_double(negative_part(Fp)), 0);
    // H = F F₊
    EXPECT_LT(to_double(loop_max_abs_diff(p.F * Fp, p.H)) / std::max(1.0, to_double(max_abs(p.H.coeff(0)))), 1e-11);
    EXPECT_LT(to_double(g8_residual(p.frame(unit_lambda(40)))) / std::pow(max_abs(p.frame(unit_lambda(40))), 2), 1e-13);
  }
}

TEST(Frame, MinimalColumnsMatchClosedForm) {
  const Pipeline<cd> pl(minimal_fc(), Mode::Exact, Gauge::UnitMiddle);
  for (const cd z : sample_points()) {
    const cdm F = pl.at(z).frame(cd(1));
    const auto G = golden::minimal::frame_columns(golden::minimal::polynomial_example(z));
    double e = 0;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 4; ++j) e = std::max(e, std::abs(F(i, j + 2) - G[static_cast<size_t>(i)][static_cast<size_t>(j)]));
    EXPECT_LT(e, 1e-12) << z;
  }
}

TEST(Pipeline, ExactModeRejectsRationalPotential) {
  const SpecFile s = parse_spec(
      "format = isowill-potential/1\n"
      "h31.num = 1\nh31.den = 4, -4, 1\n"
      "h41.num = i\nh41.den = 4, -4, 1\n");
  const FcheckData fc = load_potential(s.potential);
  EXPECT_THROW(Pipeline<cd>(fc, Mode::Exact), Error);
  const Pipeline<cd> pl(fc, Mode::Numeric);
  EXPECT_NO_THROW(pl.at(cd(0.5, 0.5)));
}
