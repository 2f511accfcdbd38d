#pragma once

// Conjugation between the SO(1,7) picture and the G(8) picture. With
// T = P̃P̌ unitary and T = T_int/√2 for a Gaussian-integer T_int, both
// directions only need the factor 1/2, so they stay exact over GQ.

#include "loop_algebra.hpp"
#include "matrix.hpp"

namespace isowill {

template <class S>
struct BridgeConstants {
  using M = Mat<S>;
  M Pcheck;  // P̌
  M Pint;    // √2·P̃
  M Tint;    // √2·T
  M TintH;

  BridgeConstants() {
    // clang-format off
    Pcheck = M::from_ints(8, 8, {
      0,0,0,1,0,0,0,0,
      0,0,1,0,0,0,0,0,
      0,1,0,0,0,0,0,0,
      1,0,0,0,0,0,0,0,
      0,0,0,0,0,0,0,1,
      0,0,0,0,0,0,1,0,
      0,0,0,0,0,1,0,0,
      0,0,0,0,1,0,0,0});
    Pint = M::from_ints(8, 8, {
      1,0,0,0,0,0,0,-1,
      1,0,0,0,0,0,0, 1,
      0,0,0,0,0,0,0, 0,
      0,1,0,0,0,0,1, 0,
      0,0,0,0,0,0,0, 0,
      0,0,1,0,0,1,0, 0,
      0,0,0,0,0,0,0, 0,
      0,0,0,1,1,0,0, 0}, {
      0, 0, 0, 0,0,0,0,0,
      0, 0, 0, 0,0,0,0,0,
      0,-1, 0, 0,0,0,1,0,
      0, 0, 0, 0,0,0,0,0,
      0, 0,-1, 0,0,1,0,0,
      0, 0, 0, 0,0,0,0,0,
      0, 0, 0,-1,1,0,0,0,
      0, 0, 0, 0,0,0,0,0});
    // clang-format on
    Tint = Pint * Pcheck;
    TintH = Tint.adjoint();
  }

  static const BridgeConstants& get() {
    static const BridgeConstants c;
    return c;
  }
};

template <class S>
S half() {
  return lift_gauss<S>(GQ(qfrac(1, 2)));
}

// T⁻¹AT
template <class S>
Mat<S> to_g8(const Mat<S>& a) {
  const auto& b = BridgeConstants<S>::get();
  return b.TintH * a * b.Tint * half<S>();
}

// TBT⁻¹
template <class S>
Mat<S> from_g8(const Mat<S>& m) {
  const auto& b = BridgeConstants<S>::get();
  return b.Tint * m * b.TintH * half<S>();
}

template <class S>
LoopMat<S> to_g8(const LoopMat<S>& a) {
  return a.map([](const Mat<S>& m) { return to_g8(m); });
}

template <class S>
LoopMat<S> from_g8(const LoopMat<S>& a) {
  return a.map([](const Mat<S>& m) { return from_g8(m); });
}

// conj(T)⁻¹T = TᵗT, which should equal Š₈
template <class S>
Mat<S> recomputed_s8() {
  const auto& b = BridgeConstants<S>::get();
  return b.Tint.transpose() * b.Tint * half<S>();
}

// ‖AᵗI₁,₇A − I₁,₇‖_max
template <class C>
real_t<C> so17_residual(const Mat<C>& a) {
  const auto& k = G8Constants<C>::get();
  return max_abs(Mat<C>(a.transpose() * k.I17 * a - k.I17));
}

}  // namespace isowill
