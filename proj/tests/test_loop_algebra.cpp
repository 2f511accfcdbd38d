#include <gtest/gtest.h>

#include <random>

#include <isowill/loop_algebra.hpp>

using namespace isowill;
using C = std::complex<double>;
using M = Mat<C>;
using L = LoopMat<C>;

namespace {
M random_mat(std::mt19937& g, int n = 8) {
  std::normal_distribution<double> nd;
  M m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = C(nd(g), nd(g));
  return m;
}
L random_loop(std::mt19937& g) {
  L l(8);
  for (int d = -2; d <= 2; ++d) l.set(d, random_mat(g));
  return l;
}
}  // namespace

TEST(LoopMat, IdentityIsNeutral) {
  std::mt19937 g(1);
  L a = random_loop(g);
  EXPECT_EQ(loop_max_abs_diff(L::identity(8) * a, a), 0.0);
}

TEST(LoopMat, Telescoping) {
  std::mt19937 g(2);
  M n = random_mat(g);
  L a = L::identity(8), b = L::identity(8);
  a.set(-1, n);
  b.set(-1, -n);
  L expect = L::identity(8);
  expect.set(-2, -(n * n));
  EXPECT_LT(loop_max_abs_diff(a * b, expect), 1e-12);
}

TEST(LoopMat, SupportOfProduct) {
  std::mt19937 g(3);
  L a(8), b(8);
  a.set(-1, random_mat(g));
  a.set(1, random_mat(g));
  b.set(2, random_mat(g));
  L p = a * b;
  EXPECT_EQ(p.min_degree(), 1);
  EXPECT_EQ(p.max_degree(), 3);
}

TEST(LoopMat, DegreeCapIsEnforced) {
  L a(8);
  a.set(3, M::identity(8));
  try {
    L b = a * a;
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegreeOverflow);
  }
}

TEST(Tau, IsInvolutiveAndMultiplicative) {
  std::mt19937 g(4);
  for (int k = 0; k < 10; ++k) {
    L a = random_loop(g), b = random_loop(g);
    a.set(2, M::zero(8, 8));
    b.set(-2, M::zero(8, 8));
    EXPECT_LT(loop_max_abs_diff(tau(tau(a)), a), 1e-13);
    EXPECT_LT(loop_max_abs_diff(tau(a * b), tau(a) * tau(b)), 1e-11);
  }
  EXPECT_EQ(loop_max_abs_diff(tau(L::identity(8)), L::identity(8)), 0.0);
}

TEST(Tau, BarNegatesDegrees) {
  L a(8);
  M m = M::identity(8) * C(0, 1);
  a.set(-1, m);
  L b = loop_bar(a);
  EXPECT_FALSE(b.has(-1));
  EXPECT_EQ(max_abs_diff(b.coeff(1), M(M::identity(8) * C(0, -1))), 0.0);
}

TEST(G8Constants, Relations) {
  const auto& k = G8Constants<C>::get();
  EXPECT_EQ(max_abs_diff(M(k.S8 * k.J8), k.J8c), 0.0);
  EXPECT_EQ(max_abs_diff(M(k.J8 * k.S8), k.J8c), 0.0);
  EXPECT_EQ(max_abs_diff(M(k.S8 * k.S8), M::identity(8)), 0.0);
  EXPECT_EQ(max_abs_diff(M(k.D0 * k.D0), M::identity(8)), 0.0);
  // J̌₈ = diag(I₂, J̌₄, I₂) with J̌₄ swapping indices 2 and 3
  M expect = M::identity(8);
  expect(3, 3) = expect(4, 4) = 0.0;
  expect(3, 4) = expect(4, 3) = 1.0;
  EXPECT_EQ(max_abs_diff(k.J8c, expect), 0.0);
}

TEST(G8Residual, MembersAndNonMembers) {
  const auto& k = G8Constants<C>::get();
  EXPECT_EQ(g8_residual(M::identity(8)), 0.0);
  EXPECT_EQ(g8_residual(k.S8), 0.0);
  std::mt19937 g(5);
  EXPECT_GT(g8_residual(random_mat(g)), 1e-3);
}

TEST(G8Residual, InvariantUnderGroupMultiplication) {
  // exp of an element X with XᵗJ₈ + J₈X = 0, via a unipotent truncation
  const auto& k = G8Constants<C>::get();
  std::mt19937 g(6);
  M y = random_mat(g) * C(0.1);
  M x = y - k.J8 * y.transpose() * k.J8;
  M e = M::identity(8), term = M::identity(8);
  for (int n = 1; n < 40; ++n) {
    term = term * x * C(1.0 / n);
    e += term;
  }
  ASSERT_LT(g8_residual(e), 1e-12);
  M a = random_mat(g);
  double r0 = g8_residual(a);
  EXPECT_NEAR(g8_residual(M(e * a)), r0, 1e-12 * (1 + r0) * 50);
}

TEST(InvUnipotent, ClosedFormForTwoTerms) {
  std::mt19937 g(7);
  // H₁ strictly block upper triangular, H₂ in the top-right corner
  M h1(8, 8), h2(8, 8);
  M r = random_mat(g);
  h1.set_block(0, 2, r.block(0, 2, 2, 4));
  h1.set_block(2, 6, r.block(2, 6, 4, 2));
  h2.set_block(0, 6, r.block(6, 0, 2, 2));
  L h = L::identity(8);
  h.set(-1, h1);
  h.set(-2, h2);
  L inv = inv_unipotent(h);
  L expect = L::identity(8);
  expect.set(-1, -h1);
  expect.set(-2, -(h2 - h1 * h1));
  EXPECT_LT(loop_max_abs_diff(inv, expect), 1e-13);
  EXPECT_LT(loop_max_abs_diff(h * inv, L::identity(8)), 1e-13);
  EXPECT_LT(loop_max_abs_diff(inv_unipotent(L::identity(8)), L::identity(8)), 1e-15);
}

TEST(InvUnipotent, RejectsNonUnipotent) {
  L a = L::identity(8);
  a.set(0, M::identity(8) * C(2));
  EXPECT_THROW(inv_unipotent(a), Error);
}

TEST(TwistResidual, DetectsWrongParity) {
  const auto& k = G8Constants<C>::get();
  L a(8);
  M odd(8, 8);
  odd(0, 2) = 1.0;  // off-diagonal block: anticommutes with D₀
  a.set(-1, odd);
  EXPECT_EQ(twist_residual(a), 0.0);
  a.set(0, odd);
  EXPECT_GT(twist_residual(a), 0.5);
  (void)k;
}
