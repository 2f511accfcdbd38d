#pragma once

// Maurer-Cartan form of the extended frame by finite differences, the
// zero-curvature residual of the loop family, the k2 subalgebra pattern and
// the diagonal block formulas.

#include <array>
#include <functional>

#include "group_bridge.hpp"
#include "pipeline.hpp"

namespace isowill {

namespace detail {
template <class S>
LoopMat<S> scaled(const LoopMat<S>& a, const S& s) {
  return a.map([&](const Mat<S>& m) { return Mat<S>(m * s); });
}
template <class S>
Mat<S> scaled(const Mat<S>& a, const S& s) {
  return a * s;
}

// ∂z (conj = false) or ∂z̄ (conj = true) by the four-point central stencil
template <class T, class C, class Fn>
T wirtinger(const Fn& f, const C& z, const real_t<C>& h, bool conj) {
  const C i = imag_unit<C>();
  const T dx = f(z + C(h)) - f(z - C(h));
  const T dy = f(z + i * h) - f(z - i * h);
  const C s = conj ? i : -i;
  return scaled(T(dx + scaled(dy, s)), C(real_t<C>(1) / (4 * h)));
}

inline bool crosses_boundary(const Error& e) {
  return e.kind() == ErrorKind::OutsideBigCell || e.kind() == ErrorKind::PoleOfPotential;
}
}  // namespace detail

// ‖col₂ − i col₁‖ + ‖col₄ − i col₃‖
template <class C>
real_t<C> b1_pattern_residual(const Mat<C>& b) {
  const C i = imag_unit<C>();
  return frob(Mat<C>(b.col(1) - b.col(0) * i)) + frob(Mat<C>(b.col(3) - b.col(2) * i));
}

// B₁ᵗI₁,₃B₁
template <class C>
real_t<C> b1_isotropy_residual(const Mat<C>& b) {
  Mat<C> i13 = Mat<C>::identity(4);
  i13(0, 0) = C(-1);
  return max_abs(Mat<C>(b.transpose() * i13 * b));
}

// FD step; absolute, so stencils near the blow-up circle stay tight
template <class C>
real_t<C> fd_step(const C&, double h) {
  return real_t<C>(h);
}

// frame loop at a stencil point
template <class C>
LoopMat<C> stencil_frame(const Pipeline<C>& pl, const C& z) {
  try {
    return pl.at(z).F;
  } catch (const Error& e) {
    if (detail::crosses_boundary(e)) throw Error(ErrorKind::StencilCrossesBigCellBoundary, e.what());
    throw;
  }
}

template <class C>
struct MCForm {
  Mat<C> A1, A2, B1;       // so(1,7) picture, B1 without the 1/λ
  Mat<C> a1, a0, a4;       // diagonal λ⁰ blocks, G(8) picture
  Mat<C> p;                // λ⁻¹ coefficient, G(8) picture
  real_t<C> stray{0};      // other λ-degrees of F̌⁻¹∂zF̌
  real_t<C> antiholo{0};   // λ⁻¹ coefficient of F̌⁻¹∂z̄F̌
  real_t<C> scale{1};      // max(1, largest coefficient of F̌⁻¹∂zF̌)
};

template <class C>
MCForm<C> mc_form(const Pipeline<C>& pl, const C& z, const real_t<C>& h) {
  auto F = [&](const C& w) { return stencil_frame(pl, w); };
  const LoopMat<C> F0 = F(z);
  const LoopMat<C> Finv = g8_inverse(F0);
  const LoopMat<C> alpha = Finv * detail::wirtinger<LoopMat<C>>(F, z, h, false);
  const LoopMat<C> beta = Finv * detail::wirtinger<LoopMat<C>>(F, z, h, true);
  MCForm<C> mc;
  mc.p = alpha.coeff(-1);
  const Mat<C> k = alpha.coeff(0);
  mc.a1 = k.block(0, 0, 2, 2);
  mc.a0 = k.block(2, 2, 4, 4);
  mc.a4 = k.block(6, 6, 2, 2);
  for (const auto& [d, m] : alpha.coeffs())
    if (d != -1 && d != 0) mc.stray = std::max(mc.stray, max_abs(m));
  mc.antiholo = max_abs(beta.coeff(-1));
  for (const auto& [d, m] : alpha.coeffs()) mc.scale = std::max(mc.scale, max_abs(m));
  const Mat<C> bp = from_g8(mc.p), bk = from_g8(k);
  mc.B1 = bp.block(0, 4, 4, 4);
  mc.A1 = bk.block(0, 0, 4, 4);
  mc.A2 = bk.block(4, 4, 4, 4);
  return mc;
}

// A₁ᵗI₁,₃ + I₁,₃A₁ and A₂ + A₂ᵗ
template <class C>
real_t<C> cartan_residual(const MCForm<C>& mc) {
  Mat<C> i13 = Mat<C>::identity(4);
  i13(0, 0) = C(-1);
  return std::max(max_abs(Mat<C>(mc.A1.transpose() * i13 + i13 * mc.A1)), max_abs(Mat<C>(mc.A2 + mc.A2.transpose())));
}

// F̌⁻¹∂F̌ at a fixed λ
template <class C>
std::array<Mat<C>, 2> mc_at_lambda(const Pipeline<C>& pl, const C& z, const C& lambda, const real_t<C>& h) {
  auto F = [&](const C& w) { return loop_eval(stencil_frame(pl, w), lambda); };
  const auto& k = G8Constants<C>::get();
  const Mat<C> f0 = F(z);
  const Mat<C> finv = k.J8 * f0.transpose() * k.J8;
  return {finv * detail::wirtinger<Mat<C>>(F, z, h, false), finv * detail::wirtinger<Mat<C>>(F, z, h, true)};
}

// ‖∂zB − ∂z̄A + [A, B]‖ with A = α(∂z), B = α(∂z̄)
template <class C>
real_t<C> flatness_residual(const Pipeline<C>& pl, const C& z, const C& lambda, const real_t<C>& h) {
  auto A = [&](const C& w) { return mc_at_lambda(pl, w, lambda, h)[0]; };
  auto B = [&](const C& w) { return mc_at_lambda(pl, w, lambda, h)[1]; };
  const auto ab = mc_at_lambda(pl, z, lambda, h);
  const Mat<C> r = detail::wirtinger<Mat<C>>(B, z, h, false) - detail::wirtinger<Mat<C>>(A, z, h, true) +
                   ab[0] * ab[1] - ab[1] * ab[0];
  return max_abs(r);
}

// ---------------------------------------------------------------------------
// k2 pattern: b12, b13, b14, b34

template <class S>
struct K2Params {
  S b12{}, b13{}, b14{}, b34{};
};

template <class S>
Mat<S> k2_matrix(const K2Params<S>& b) {
  Mat<S> a(4, 4);
  a(0, 1) = -b.b12, a(0, 2) = -b.b13, a(0, 3) = -b.b14;
  a(1, 0) = b.b12, a(1, 2) = b.b14, a(1, 3) = -b.b13;
  a(2, 0) = b.b13, a(2, 1) = -b.b14, a(2, 3) = -b.b34;
  a(3, 0) = b.b14, a(3, 1) = b.b13, a(3, 2) = b.b34;
  return a;
}

template <class S>
K2Params<S> k2_params(const Mat<S>& a) {
  return {a(1, 0), a(2, 0), a(3, 0), a(3, 2)};
}

template <class C>
real_t<C> k2_pattern_residual(const Mat<C>& a) {
  return max_abs(Mat<C>(a - k2_matrix(k2_params(a))));
}

template <class S>
bool in_k2(const Mat<S>& a) {
  if (a.rows() != 4 || a.cols() != 4) return false;
  return a == k2_matrix(k2_params(a));
}

// closed-form bracket
template <class S>
K2Params<S> k2_bracket_formula(const K2Params<S>& b, const K2Params<S>& t) {
  K2Params<S> r;
  const S two = S(2);
  r.b13 = (b.b12 - b.b34) * t.b14 - (t.b12 - t.b34) * b.b14;
  r.b14 = (b.b34 - b.b12) * t.b13 - (t.b34 - t.b12) * b.b13;
  r.b12 = two * (t.b13 * b.b14 - b.b13 * t.b14);
  r.b34 = two * (b.b13 * t.b14 - t.b13 * b.b14);
  return r;
}

// [A, Ã] checked against the closed form; exact for exact scalars
template <class S>
bool k2_closure_check(const Mat<S>& a, const Mat<S>& t) {
  if (!in_k2(a) || !in_k2(t)) throw Error(ErrorKind::PatternViolation, "input outside the k2 pattern");
  const Mat<S> br = a * t - t * a;
  return in_k2(br) && br == k2_matrix(k2_bracket_formula(k2_params(a), k2_params(t)));
}

// ---------------------------------------------------------------------------
// block formulas for α′ from the factors

template <class C>
struct BlockFormulas {
  Mat<C> p;            // λ⁻¹ coefficient
  Mat<C> a1, a0, a4;   // λ⁰ diagonal blocks
};

template <class C>
BlockFormulas<C> block_formulas(const Pipeline<C>& pl, const C& z, const real_t<C>& h) {
  const auto& k = G8Constants<C>::get();
  auto P = [&](const C& w) {
    try {
      return pl.at(w);
    } catch (const Error& e) {
      if (detail::crosses_boundary(e)) throw Error(ErrorKind::StencilCrossesBigCellBoundary, e.what());
      throw;
    }
  };
  const PointFrame<C> p0 = P(z);
  auto L = [&](int j) {
    return [&, j](const C& w) {
      const auto l = P(w).l;
      return j == 1 ? l.l1 : j == 0 ? l.l0 : l.l4;
    };
  };
  const Mat<C> l1z = detail::wirtinger<Mat<C>>(L(1), z, h, false);
  const Mat<C> l0z = detail::wirtinger<Mat<C>>(L(0), z, h, false);
  const Mat<C> l4z = detail::wirtinger<Mat<C>>(L(4), z, h, false);
  const Mat<C>& l1 = p0.l.l1;
  const Mat<C>& l0 = p0.l.l0;
  const Mat<C>& l4 = p0.l.l4;
  const Mat<C> l1i = inverse(l1), l0i = inverse(l0), l4i = inverse(l4);
  const Mat<C>& fc = p0.pot.fcheck;
  const Mat<C> fcs = sharp(fc);
  const Mat<C> ub = p0.w0.u.conjugate(), ubs = p0.w0.usharp.conjugate();

  BlockFormulas<C> out;
  out.a1 = -(l1 * fc * k.S4 * ubs * k.J2 * l1i) - l1z * l1i;
  out.a0 = -(l0 * (fcs * k.J2 * ub * k.S4 - k.S4 * ubs * k.J2 * fc) * l0i) - l0z * l0i;
  out.a4 = l4 * k.J2 * ub * k.S4 * fcs * l4i - l4z * l4i;
  const Mat<C> x = l1 * fc * l0i;
  out.p = Mat<C>::zero(8, 8);
  out.p.set_block(0, 2, x);
  out.p.set_block(2, 6, Mat<C>(-sharp(x)));
  return out;
}

template <class C>
struct BlockFormulaCheck {  // relative to max(1, ‖block‖)
  real_t<C> p{0}, a1{0}, a0{0}, a4{0};
};

template <class C>
BlockFormulaCheck<C> check_block_formulas(const Pipeline<C>& pl, const C& z, const real_t<C>& h) {
  const MCForm<C> mc = mc_form(pl, z, h);
  const BlockFormulas<C> bf = block_formulas(pl, z, h);
  auto rel = [](const Mat<C>& a, const Mat<C>& b) {
    const real_t<C> s = max_abs(b);
    return max_abs_diff(a, b) / (s > real_t<C>(1) ? s : real_t<C>(1));
  };
  return {rel(mc.p, bf.p), rel(mc.a1, bf.a1), rel(mc.a0, bf.a0), rel(mc.a4, bf.a4)};
}

// RK4 along z = t·e^{iθ}, t ∈ [0, |z|], for dF̌/dt = F̌·(α′e^{iθ} + τ̌(α′)e^{-iθ})
// with α′ assembled from the block formulas and F̌(0) = I. Returns the
// distance to the pointwise frame at z.
template <class C>
real_t<C> ode_frame_residual(const Pipeline<C>& pl, const C& z, const C& lambda, int steps, const real_t<C>& h) {
  using R = real_t<C>;
  const R len = cabs(z);
  if (len == R(0)) return R(0);
  const C dir = z / C(len);
  auto rhs = [&](const R& t, const Mat<C>& F) {
    const BlockFormulas<C> bf = block_formulas(pl, C(dir * t), h);
    LoopMat<C> a(8);
    a.set(-1, bf.p);
    Mat<C> k = Mat<C>::zero(8, 8);
    k.set_block(0, 0, bf.a1);
    k.set_block(2, 2, bf.a0);
    k.set_block(6, 6, bf.a4);
    a.set(0, k);
    const Mat<C> ap = loop_eval(a, lambda), app = loop_eval(tau(a), lambda);
    return Mat<C>(F * (ap * dir + app * cconj(dir)));
  };
  Mat<C> F = Mat<C>::identity(8);
  const R dt = len / R(steps);
  for (int s = 0; s < steps; ++s) {
    const R t = dt * R(s);
    const Mat<C> k1 = rhs(t, F);
    const Mat<C> k2 = rhs(t + dt / 2, Mat<C>(F + k1 * C(dt / 2)));
    const Mat<C> k3 = rhs(t + dt / 2, Mat<C>(F + k2 * C(dt / 2)));
    const Mat<C> k4 = rhs(t + dt, Mat<C>(F + k3 * C(dt)));
    F += (k1 + k2 * C(2) + k3 * C(2) + k4) * C(dt / 6);
  }
  return max_abs_diff(F, pl.at(z).frame(lambda));
}

}  // namespace isowill
