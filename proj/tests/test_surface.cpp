#include <gtest/gtest.h>

#include <algorithm>

#include <isowill/isowill.hpp>

using namespace isowill;
using C = std::complex<long double>;
using cdm = Mat<cd>;

namespace {

const cd I(0, 1);

const Pipeline<C>& sphere() {
  static const Pipeline<C> pl(load_potential(golden_case("sphere").spec().potential));
  return pl;
}
const Pipeline<C>& minimal() {
  static const Pipeline<C> pl(load_potential(golden_case("minimal").spec().potential), Mode::Exact, Gauge::UnitMiddle);
  return pl;
}

// B₁ = (h, ih, c·h, ic·h) with h isotropic
cdm rank1_b1(cd r1, cd r2, cd c) {
  const std::array<cd, 4> h{1.0 + r1 * r2, 1.0 - r1 * r2, r1 + r2, -I * (r1 - r2)};
  cdm b(4, 4);
  for (int i = 0; i < 4; ++i) {
    b(i, 0) = h[static_cast<size_t>(i)];
    b(i, 1) = I * h[static_cast<size_t>(i)];
    b(i, 2) = c * h[static_cast<size_t>(i)];
    b(i, 3) = I * c * h[static_cast<size_t>(i)];
  }
  return b;
}

std::vector<cd> roots_of(const RhoSolution<cd>& s) {
  std::vector<cd> out;
  for (const auto& r : s.roots) out.push_back(r.rho());
  return out;
}

}  // namespace

TEST(Rho, RankOneBranches) {
  const auto s = solve_rho1(rank1_b1(1.0, I, cd(0.5, -2)));
  EXPECT_EQ(s.rank, 1);
  ASSERT_EQ(s.roots.size(), 2u);
  EXPECT_EQ(s.roots[0].branch, Branch::Rank1Primal);
  EXPECT_EQ(s.roots[1].branch, Branch::Rank1Dual);
  auto r = roots_of(s);
  std::sort(r.begin(), r.end(), [](cd a, cd b) { return a.imag() < b.imag(); });
  EXPECT_LT(std::abs(r[0] - (-I)), 1e-12);
  EXPECT_LT(std::abs(r[1] - 1.0), 1e-12);
  for (const auto& x : s.roots) EXPECT_LT(x.residual, 1e-12);
}

TEST(Rho, RankOneCoincidentBranches) {
  const auto s = solve_rho1(rank1_b1(0.0, 0.0, cd(3)));
  EXPECT_EQ(s.rank, 1);
  ASSERT_EQ(s.roots.size(), 2u);
  for (const auto& x : s.roots) EXPECT_LT(std::abs(x.rho()), 1e-12);
}

TEST(Rho, ZeroB1IsDegenerate) {
  try {
    solve_rho1(cdm(4, 4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateB1);
  }
}

TEST(Rho, SphereHasOneRootFromTheClosedForm) {
  for (const cd z : {cd(0.3, 0.2), cd(-1.2, 0.5), cd(0.1, -1.7)}) {
    const auto p = sphere().at(from_cd<C>(z));
    const Mat<C> b1 = b1_at(p, C(1));
    const auto s = solve_rho1(b1);
    EXPECT_EQ(s.rank, 2);
    ASSERT_EQ(s.roots.size(), 1u);
    EXPECT_EQ(s.roots[0].branch, Branch::Rank2Unique);
    const cd rho = golden::sphere::rho(z);
    EXPECT_LT(std::abs(cd(s.roots[0].rho()) - I * std::conj(rho)), 1e-12) << z;
    // both columns lie in the span of (1,1,-iρ,ρ) and (ρ,-ρ,i,1)
    cdm span(4, 4);
    const std::array<cd, 4> e1{1, 1, -I * rho, rho}, e2{rho, -rho, I, 1};
    for (int c : {0, 2}) {
      cdm m(4, 3);
      for (int i = 0; i < 4; ++i)
        m(i, 0) = e1[static_cast<size_t>(i)], m(i, 1) = e2[static_cast<size_t>(i)], m(i, 2) = cd(b1(i, c));
      // 4x3 of rank 2: every 3x3 minor vanishes
      for (int skip = 0; skip < 4; ++skip) {
        cdm q(3, 3);
        for (int i = 0, r = 0; i < 4; ++i)
          if (i != skip) {
            for (int j = 0; j < 3; ++j) q(r, j) = m(i, j);
            ++r;
          }
        const cd det = q(0, 0) * (q(1, 1) * q(2, 2) - q(1, 2) * q(2, 1)) - q(0, 1) * (q(1, 0) * q(2, 2) - q(1, 2) * q(2, 0)) +
                       q(0, 2) * (q(1, 0) * q(2, 1) - q(1, 1) * q(2, 0));
        EXPECT_LT(std::abs(det), 1e-10);
      }
    }
  }
}

TEST(Projection, HandExamples) {
  const auto x = project_to_sphere(std::array<double, 8>{1, 1, 0, 0, 0, 0, 0, 0});
  EXPECT_EQ(x, (std::array<double, 7>{1, 0, 0, 0, 0, 0, 0}));
  const auto y = project_to_sphere(std::array<double, 8>{2, 0, 2, 0, 0, 0, 0, 0});
  EXPECT_EQ(y, (std::array<double, 7>{0, 1, 0, 0, 0, 0, 0}));
  try {
    project_to_sphere(std::array<double, 8>{0, 1, 0, 0, 0, 0, 0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DivideByZero);
  }
}

TEST(Lift, SphereAtBasePoint) {
  const auto s = surface_at(sphere().at(C(0)), C(1));
  ASSERT_EQ(s.size(), 1u);
  const double y0 = static_cast<double>(s[0].Y[0]);
  EXPECT_GT(y0, 0);
  for (size_t i = 0; i < 8; ++i) EXPECT_NEAR(static_cast<double>(s[0].Y[i]) / y0, i < 2 ? 1.0 : 0.0, 1e-15);
  const auto phi = phi_columns(sphere().at(C(0)).frame(C(1)));
  for (size_t i = 0; i < 8; ++i) {
    EXPECT_NEAR(static_cast<double>(phi.phi[0][i] + phi.phi[1][i]), i < 2 ? 1.0 : 0.0, 1e-15);
  }
}

TEST(Lift, ZeroRootCollapsesToFirstPair) {
  PhiColumns<cd> ph;
  for (size_t j = 0; j < 4; ++j)
    for (size_t i = 0; i < 8; ++i) ph.phi[j][i] = static_cast<double>(1 + i + 8 * j);
  RhoRoot<cd> root;
  root.u = 0, root.v = 2;
  const auto y = canonical_lift(ph, root);
  for (size_t i = 0; i < 8; ++i) EXPECT_DOUBLE_EQ(y[i], 4 * (ph.phi[0][i] + ph.phi[1][i]));
}

TEST(Lift, PhiHatTableIsTheRecombinedRealFrame) {
  const Mat<C> F = sphere().at(C(0.7L, -0.4L)).frame(C(1));
  const Mat<C> hat = phi_hat_from_frame(F);
  const auto ph = phi_columns(F);
  double e = 0;
  for (size_t i = 0; i < 8; ++i) {
    const auto& p = ph.phi;
    const C want[4] = {C(p[0][i] + p[1][i]), C(p[0][i] - p[1][i]), C(p[2][i], -p[3][i]), C(p[2][i], p[3][i])};
    for (int j = 0; j < 4; ++j) e = std::max(e, static_cast<double>(std::abs(hat(static_cast<int>(i), j) - want[j])));
  }
  EXPECT_LT(e, 1e-12);
  EXPECT_LT(static_cast<double>(ph.imag_residual), 1e-12);
}

TEST(Surface, ResidualsAcrossTheGoldenGrid) {
  for (const cd z : default_grid().points())
    for (const double deg : {0.0, 90.0}) {
      for (const auto& s : surface_at(sphere().at(from_cd<C>(z)), from_cd<C>(unit_lambda(deg)))) {
        EXPECT_LT(s.residuals.at("lightcone"), 1e-9) << z;
        EXPECT_LT(s.residuals.at("sphere"), 1e-10) << z;
        EXPECT_LT(s.residuals.at("phi_imag"), 1e-9) << z;
        EXPECT_LT(s.residuals.at("rho"), 1e-8) << z;
        EXPECT_EQ(s.rank, 2);
      }
    }
}

TEST(Surface, MatchesBothClosedForms) {
  for (const cd z : {cd(0.25, 0.5), cd(-1.5, 0.3), cd(2.5, -1)}) {
    const auto x = to_double7(x_at(sphere(), from_cd<C>(z), C(0, 1), Branch::Rank2Unique));
    EXPECT_LT(chordal_distance(x, golden::sphere::x(z, cd(0, 1))), 1e-10) << z;
    const auto m = to_double7(x_at(minimal(), from_cd<C>(z), C(1), Branch::Rank1Primal));
    EXPECT_LT(chordal_distance(m, golden_case("minimal").closed_form(z, cd(1))), 1e-10) << z;
  }
}

TEST(Surface, MinimalDualBranchIsThePointAtInfinity) {
  const auto s = surface_at(minimal().at(C(0.5L, 0.5L)), C(1));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_FALSE(s[0].rho_infinite);
  EXPECT_TRUE(s[1].rho_infinite);
}

TEST(Metric, SphereAtOriginAndInfinity) {
  EXPECT_NEAR(static_cast<double>(induced_metric(sphere(), C(0), C(1), 1e-4L)), 2.0, 1e-6);
  const Pipeline<mp_complex> hp(load_potential(golden_case("sphere").spec().potential));
  EXPECT_NEAR(to_double(induced_metric_at_infinity(hp, mp_complex(1), mp_real(2e-5))), 32.0, 1e-6);
  for (const double r : {0.5, 1.0, 1.5})
    EXPECT_NEAR(static_cast<double>(induced_metric(sphere(), C(r, 0), C(1), 1e-4L)), golden::sphere::metric(r),
                1e-6 * golden::sphere::metric(r));
}

TEST(Metric, MinimalMatchesClosedFormDifferences) {
  const cd z(1, 0);
  const double h = 1e-4;
  auto x = [&](cd w) { return golden_case("minimal").closed_form(w, cd(1)); };
  double g = 0;
  for (size_t i = 0; i < 7; ++i) {
    const cd dz = ((x(z + h)[i] - x(z - h)[i]) - I * (x(z + I * h)[i] - x(z - I * h)[i])) / (4 * h);
    g += std::norm(dz);
  }
  const double m = static_cast<double>(induced_metric(minimal(), C(1), C(1), 1e-4L, Branch::Rank1Primal));
  EXPECT_GT(m, 0);
  EXPECT_NEAR(m, g, 1e-6 * g);
}

TEST(Isotropy, HigherDerivativesAreNull) {
  for (const C z : {C(0.3L, 0.2L), C(-1, 0.7L)}) {
    const auto a = isotropy_residuals(sphere(), z, C(1), 1e-4L);
    const auto b = isotropy_residuals(sphere(), z, C(1), 5e-5L);
    for (int k = 0; k < 3; ++k) {
      EXPECT_LT(static_cast<double>(a[static_cast<size_t>(k)]), 1e-5);
      EXPECT_GT(static_cast<double>(a[static_cast<size_t>(k)] / b[static_cast<size_t>(k)]), 3);
    }
  }
}

TEST(Metric, LambdaFamilyIsIsometric) {
  const double a = static_cast<double>(induced_metric(sphere(), C(0.9L, 0.4L), C(1), 1e-4L));
  for (const double deg : {45.0, 90.0, 200.0})
    EXPECT_NEAR(static_cast<double>(induced_metric(sphere(), C(0.9L, 0.4L), from_cd<C>(unit_lambda(deg)), 1e-4L)), a,
                1e-8 * a);
}

TEST(Gauge, SurfaceDoesNotDependOnTheMiddleGauge) {
  const Pipeline<C> other(load_potential(golden_case("sphere").spec().potential), Mode::Exact, Gauge::UnitMiddle);
  for (const cd z : {cd(0.4, -0.2), cd(-1.3, 0.9)}) {
    const auto p = sphere().at(from_cd<C>(z)), q = other.at(from_cd<C>(z));
    const C lam = from_cd<C>(unit_lambda(25));
    // columns 3 and 6 are invariant, 4 and 5 rescale
    const Mat<C> F = p.frame(lam), G = q.frame(lam);
    long double e = 0;
    for (int i = 0; i < 8; ++i) e = std::max({e, std::abs(F(i, 2) - G(i, 2)), std::abs(F(i, 5) - G(i, 5))});
    EXPECT_LT(static_cast<double>(e), 1e-12);
    // B₁ changes by a block conjugation, which keeps its pattern and isotropy
    const Mat<C> b = b1_at(q, lam);
    EXPECT_LT(static_cast<double>(b1_pattern_residual(b)), 1e-12);
    EXPECT_LT(static_cast<double>(b1_isotropy_residual(b)), 1e-12);
    const auto x = to_double7(x_at(sphere(), from_cd<C>(z), lam, Branch::Rank2Unique));
    const auto y = to_double7(x_at(other, from_cd<C>(z), lam, Branch::Rank2Unique));
    EXPECT_LT(chordal_distance(x, y), 1e-12);
  }
}
