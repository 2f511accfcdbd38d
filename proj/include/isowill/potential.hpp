#pragma once

// Type-3 normalized potentials: ingestion, translation into the G(8)
// picture, exact integration, and the meromorphic frame H.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "exact.hpp"
#include "loop_algebra.hpp"
#include "matrix.hpp"

namespace isowill {

using RMat = Mat<Rational1>;

struct PotentialSpec {
  std::string name = "unnamed";
  // h[j][k] is h_{j+1,k+1}; column k = 0 feeds B̂₁ columns 1-2, k = 1 feeds 3-4
  std::array<std::array<Rational1, 2>, 4> h{};
  GQ base_point{};
};

// B̂₁ = (ĥ₁, iĥ₁, ĥ₂, iĥ₂)
inline RMat b1hat(const PotentialSpec& s) {
  RMat b(4, 4);
  const Rational1 i(GQ::i());
  for (int j = 0; j < 4; ++j) {
    b(j, 0) = s.h[j][0];
    b(j, 1) = i * s.h[j][0];
    b(j, 2) = s.h[j][1];
    b(j, 3) = i * s.h[j][1];
  }
  return b;
}

// B̂₁ᵗI₁,₃B̂₁, identically zero for an admissible potential
inline RMat b1hat_gram(const PotentialSpec& s) {
  RMat b = b1hat(s);
  RMat i13 = RMat::identity(4);
  i13(0, 0) = Rational1(-1);
  return b.transpose() * i13 * b;
}

inline void assert_isotropic(const PotentialSpec& s) {
  RMat g = b1hat_gram(s);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (!g(i, j).is_zero())
        throw Error(ErrorKind::NonIsotropicPotential,
                    "B1^t I13 B1 has a nonzero entry at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
}

inline bool is_zero_potential(const PotentialSpec& s) {
  for (const auto& row : s.h)
    for (const auto& x : row)
      if (!x.is_zero()) return false;
  return true;
}

// m^♯ = J₄mᵗJ₂ for a 2×4 block
template <class S>
Mat<S> sharp(const Mat<S>& m) {
  Mat<S> out(4, 2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) out(i, j) = m(1 - j, 3 - i);
  return out;
}

// inverse of sharp: recover the 2×4 block
template <class S>
Mat<S> unsharp(const Mat<S>& m) {
  Mat<S> out(2, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) out(1 - j, 3 - i) = m(i, j);
  return out;
}

inline RMat b1_to_fcheck(const PotentialSpec& s) {
  auto h = [&](int j, int k) -> const Rational1& { return s.h[j - 1][k - 1]; };
  const Rational1 i(GQ::i());
  RMat f(2, 4);
  for (int row = 0; row < 2; ++row) {
    const int k = row == 0 ? 2 : 1;
    f(row, 0) = -h(3, k) - i * h(4, k);
    f(row, 1) = i * (h(1, k) - h(2, k));
    f(row, 2) = -i * (h(1, k) + h(2, k));
    f(row, 3) = h(3, k) - i * h(4, k);
  }
  return f;
}

struct FcheckData {
  RMat fcheck{2, 4};
  RMat f{2, 4};
  RMat g{2, 2};
  GQ base_point{};
  std::vector<std::complex<double>> poles;  // union over all entries

  bool polynomial() const {
    for (const RMat* m : {&fcheck, &f, &g})
      for (const auto& x : m->data())
        if (!x.is_polynomial()) return false;
    return true;
  }
};

inline FcheckData integrate_potential(const RMat& fcheck, const GQ& base = GQ()) {
  FcheckData out;
  out.fcheck = fcheck;
  out.base_point = base;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 4; ++j) out.f(i, j) = integrate(fcheck(i, j), base);
  RMat integrand = out.f * sharp(fcheck);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.g(i, j) = -integrate(integrand(i, j), base);
  for (const RMat* m : {&out.fcheck, &out.f, &out.g})
    for (const auto& x : m->data())
      for (auto p : x.poles()) {
        bool seen = false;
        for (auto q : out.poles) seen = seen || std::abs(p - q) < 1e-9;
        if (!seen) out.poles.push_back(p);
      }
  return out;
}

inline FcheckData load_potential(const PotentialSpec& s) {
  assert_isotropic(s);
  return integrate_potential(b1_to_fcheck(s), s.base_point);
}

inline constexpr double kPoleRadius = 1e-6;

inline double pole_distance(const FcheckData& fc, std::complex<double> z) {
  double d = std::numeric_limits<double>::infinity();
  for (auto p : fc.poles) d = std::min(d, std::abs(z - p));
  return d;
}

inline void check_not_pole(const FcheckData& fc, std::complex<double> z) {
  if (pole_distance(fc, z) < kPoleRadius) throw Error(ErrorKind::PoleOfPotential, "sample too close to a pole");
}

template <class C>
Mat<C> eval_rmat(const RMat& m, const C& z) {
  Mat<C> out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) out(i, j) = m(i, j).eval_num(z);
  return out;
}

template <class C>
struct FcheckAt {
  Mat<C> fcheck, f, g;
};

template <class C>
FcheckAt<C> eval_fcheck(const FcheckData& fc, const C& z) {
  check_not_pole(fc, to_cd(z));
  return {eval_rmat(fc.fcheck, z), eval_rmat(fc.f, z), eval_rmat(fc.g, z)};
}

// H = I + λ⁻¹H₁ + λ⁻²H₂
template <class S>
LoopMat<S> meromorphic_frame(const Mat<S>& f, const Mat<S>& g) {
  Mat<S> h1(8, 8), h2(8, 8);
  h1.set_block(0, 2, f);
  h1.set_block(2, 6, Mat<S>(-sharp(f)));
  h2.set_block(0, 6, g);
  LoopMat<S> h = LoopMat<S>::identity(8);
  h.set(-1, h1);
  h.set(-2, h2);
  return h;
}

template <class C>
LoopMat<C> meromorphic_frame(const FcheckData& fc, const C& z) {
  auto v = eval_fcheck(fc, z);
  return meromorphic_frame(v.f, v.g);
}

// λ⁻¹ coefficient of the potential in the G(8) picture
template <class S>
Mat<S> potential_matrix(const Mat<S>& fcheck) {
  Mat<S> p(8, 8);
  p.set_block(0, 2, fcheck);
  p.set_block(2, 6, Mat<S>(-sharp(fcheck)));
  return p;
}

// ---------------------------------------------------------------------------
// Wu's formula η₋₁ = F₀δ₁F₀⁻¹ with F₀⁻¹dF₀ = δ₀dz, F₀(0) = I, integrated
// along the ray from 0 by RK4 with step doubling

template <class C>
using MatFn = std::function<Mat<C>(const C&)>;

template <class C>
Mat<C> integrate_ray(const MatFn<C>& delta0, const C& z, int steps) {
  using R = real_t<C>;
  const int n = delta0(C(0)).rows();
  Mat<C> F = Mat<C>::identity(n);
  const R dt = R(1) / R(steps);
  auto rhs = [&](const R& t, const Mat<C>& x) { return Mat<C>(x * delta0(z * C(t)) * z); };
  for (int k = 0; k < steps; ++k) {
    R t = R(k) * dt;
    Mat<C> k1 = rhs(t, F);
    Mat<C> k2 = rhs(t + dt / 2, F + k1 * C(dt / 2));
    Mat<C> k3 = rhs(t + dt / 2, F + k2 * C(dt / 2));
    Mat<C> k4 = rhs(t + dt, F + k3 * C(dt));
    F += (k1 + k2 * C(2) + k3 * C(2) + k4) * C(dt / 6);
  }
  return F;
}

template <class C>
std::vector<Mat<C>> wu_normalized_potential(const MatFn<C>& delta0, const MatFn<C>& delta1, const std::vector<C>& grid,
                                            double tol = 1e-12, int max_steps = 1 << 16) {
  std::vector<Mat<C>> out;
  out.reserve(grid.size());
  for (const C& z : grid) {
    int steps = 8;
    Mat<C> coarse = integrate_ray(delta0, z, steps);
    for (;;) {
      if (steps > max_steps) throw Error(ErrorKind::IntegrationDivergence, "step doubling did not converge");
      Mat<C> fine = integrate_ray(delta0, z, 2 * steps);
      double err = to_double(max_abs_diff(fine, coarse));
      steps *= 2;
      coarse = fine;
      if (err <= tol * (1.0 + to_double(max_abs(fine)))) break;
    }
    out.push_back(coarse * delta1(z) * inverse(coarse));
  }
  return out;
}

}  // namespace isowill
