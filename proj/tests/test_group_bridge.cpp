#include <gtest/gtest.h>

#include <random>

#include <isowill/group_bridge.hpp>

using namespace isowill;
using C = std::complex<double>;
using M = Mat<C>;

namespace {
M random_mat(std::mt19937& g) {
  std::normal_distribution<double> nd;
  M m(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) m(i, j) = C(nd(g), nd(g));
  return m;
}
}  // namespace

TEST(Bridge, IsUnitary) {
  const auto& b = BridgeConstants<GQ>::get();
  Mat<GQ> tt = b.TintH * b.Tint;
  EXPECT_EQ(tt, Mat<GQ>::identity(8) * GQ(2));
}

TEST(Bridge, RecomputesS8Exactly) {
  EXPECT_EQ(recomputed_s8<GQ>(), G8Constants<GQ>::get().S8);
}

TEST(Bridge, IdentityMapsToIdentity) {
  EXPECT_EQ(to_g8(Mat<GQ>::identity(8)), Mat<GQ>::identity(8));
  EXPECT_EQ(from_g8(Mat<GQ>::identity(8)), Mat<GQ>::identity(8));
}

TEST(Bridge, InvolutionOfTheSymmetricSpace) {
  Mat<GQ> d = Mat<GQ>::identity(8);
  for (int i = 0; i < 4; ++i) d(i, i) = GQ(-1);
  EXPECT_EQ(to_g8(d), G8Constants<GQ>::get().D0);
}

TEST(Bridge, RoundTrip) {
  std::mt19937 g(11);
  for (int k = 0; k < 10; ++k) {
    M a = random_mat(g);
    EXPECT_LT(max_abs_diff(from_g8(to_g8(a)), a), 1e-13);
  }
}

TEST(Bridge, Homomorphism) {
  std::mt19937 g(12);
  M a = random_mat(g), b = random_mat(g);
  EXPECT_LT(max_abs_diff(to_g8(M(a * b)), M(to_g8(a) * to_g8(b))), 1e-12);
}

TEST(Bridge, MembershipTransport) {
  // a real Lorentz boost mixing coordinates 0 and 3, then a rotation in 5-6
  M a = M::identity(8);
  double ch = std::cosh(0.7), sh = std::sinh(0.7);
  a(0, 0) = a(3, 3) = ch;
  a(0, 3) = a(3, 0) = sh;
  M r = M::identity(8);
  r(5, 5) = r(6, 6) = std::cos(0.4);
  r(5, 6) = -std::sin(0.4);
  r(6, 5) = std::sin(0.4);
  a = a * r;
  ASSERT_LT(so17_residual(a), 1e-14);
  M b = to_g8(a);
  EXPECT_LT(g8_residual(b), 1e-14);
  // reality: τ̌ fixes the image of a real matrix
  LoopMat<C> l = LoopMat<C>::constant(b);
  EXPECT_LT(loop_max_abs_diff(tau(l), l), 1e-14);
}

TEST(So17Residual, Orientation) {
  M a = M::identity(8);
  a(0, 0) = a(1, 1) = -1.0;
  EXPECT_EQ(so17_residual(a), 0.0);
  EXPECT_EQ(so17_residual(M::identity(8)), 0.0);
}
