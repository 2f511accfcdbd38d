#pragma once

// Closed-form reference data for the two worked examples. Deliberately
// independent of the pipeline: plain std::complex<double> and std::array,
// no Mat, no loop algebra.

#include <array>
#include <cmath>
#include <complex>

namespace isowill::golden {

using cd = std::complex<double>;

// ---------------------------------------------------------------------------
// totally isotropic, not S-Willmore two-sphere

namespace sphere {

inline double r2(cd z) { return std::norm(z); }

// 1 + 4r² - 2r⁶/9, vanishing on the blow-up circle
inline double P(double r) { return 1 + 4 * r * r - 2 * std::pow(r, 6) / 9; }

// positive root of P by bisection
inline double blowup_radius() {
  double lo = 1.0, hi = 3.0;
  for (int k = 0; k < 200; ++k) {
    double mid = 0.5 * (lo + hi);
    (P(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double denom(double r) {
  double s = r * r;
  return 1 + s + 5 * s * s / 4 + 4 * s * s * s / 9 + s * s * s * s / 36;
}

inline std::array<double, 7> x(cd z, cd lambda) {
  const double s = r2(z), r = std::sqrt(s);
  const cd zb = std::conj(z), li = 1.0 / lambda;
  const cd I(0, 1);
  const double a = 1 + s * s * s / 9, b = 1 - s * s / 12, c = 1 + 4 * s / 3;
  std::array<cd, 7> v = {
      cd(1 - s - 3 * s * s / 4 + 4 * s * s * s / 9 - s * s * s * s / 36),
      -I * (z - zb) * a,
      (z + zb) * a,
      -I * (li * z * z - lambda * zb * zb) * b,
      (li * z * z + lambda * zb * zb) * b,
      -I * (s / 2) * (li * z - lambda * zb) * c,
      (s / 2) * (li * z + lambda * zb) * c,
  };
  std::array<double, 7> out{};
  for (int i = 0; i < 7; ++i) out[static_cast<size_t>(i)] = v[static_cast<size_t>(i)].real() / denom(r);
  return out;
}

// induced metric density |x_z|²
inline double metric(double r) {
  double s = r * r;
  double num = 2 + 8 * s + s * s / 2 + 4 * std::pow(s, 3) / 9 + 8 * std::pow(s, 4) / 9 + std::pow(s, 5) / 18 +
               2 * std::pow(s, 6) / 81;
  return num / (denom(r) * denom(r));
}

// same density in the chart z̃ = 1/z, as a function of |z̃|
inline double metric_at_infinity(double rt) {
  double s = rt * rt;
  double num = 2 * std::pow(s, 6) + 8 * std::pow(s, 5) + std::pow(s, 4) / 2 + 4 * std::pow(s, 3) / 9 +
               8 * s * s / 9 + s / 18 + 2.0 / 81;
  double den = std::pow(s, 4) + std::pow(s, 3) + 5 * s * s / 4 + 4 * s / 9 + 1.0 / 36;
  return num / (den * den);
}

using M2 = std::array<std::array<cd, 2>, 2>;
using M4 = std::array<std::array<cd, 4>, 4>;

inline M2 d(cd z) {
  const double s = r2(z);
  return {{{cd(1 + 4 * s + s * s * s / 9), s * std::conj(z)}, {s * z, cd(1 + s * s / 4 + s * s * s / 9)}}};
}

inline double det_d(cd z) {
  const double s = r2(z);
  return (1 + 4 * s + s * s / 4 + s * s * s / 9) * (1 + s * s * s / 9);
}

// |d|·q, entrywise
inline M4 dq(cd z) {
  const double s = r2(z), r = std::sqrt(s);
  const double p = P(r), q4 = 1 + s * s / 4 + 4 * s * s * s / 9, b = 1 - s * s / 12, c = 1 + 4 * s / 3;
  const cd zb = std::conj(z);
  M4 m{};
  m[0][0] = p * p;
  m[0][1] = -2 * s * z * b * p;
  m[2][0] = std::conj(m[0][1]);
  m[0][2] = -(s * z / 2.0) * c * p;
  m[1][0] = std::conj(m[0][2]);
  m[0][3] = -s * s * z * z * c * b;
  m[3][0] = std::conj(m[0][3]);
  m[1][1] = p * q4;
  m[2][2] = std::conj(m[1][1]);
  m[1][2] = (s * s * s / 4) * c * c;
  m[1][3] = (s * z / 2.0) * c * q4;
  m[3][2] = std::conj(m[1][3]);
  m[2][1] = 4 * s * s * s * b * b;
  m[2][3] = 2 * s * z * b * q4;
  m[3][1] = std::conj(m[2][3]);
  m[3][3] = q4 * q4;
  (void)zb;
  return m;
}

// triangular factor of a = l̄₁ᵗl₁
inline M2 l1(cd z) {
  const double s = r2(z), dd = det_d(z), d11 = 1 + 4 * s + s * s * s / 9;
  return {{{cd(std::sqrt(d11) / std::sqrt(dd)), -s * std::conj(z) / (std::sqrt(dd) * std::sqrt(d11))},
           {cd(0), cd(1 / std::sqrt(d11))}}};
}

inline M4 l0(cd z) {
  const double s = r2(z), r = std::sqrt(s), sd = std::sqrt(det_d(z));
  const double p = P(r), b = 1 - s * s / 12, c = 1 + 4 * s / 3;
  M4 m{};
  m[0][0] = p / sd;
  m[0][1] = -2.0 * s * z * b / sd;
  m[0][2] = -s * z * c / (2.0 * sd);
  m[0][3] = -s * s * z * z * c * b / (sd * p);
  m[1][1] = sd;
  m[1][3] = s * z * c * sd / (2.0 * p);
  m[2][2] = 1 / sd;
  m[2][3] = 2.0 * s * z * b / (sd * p);
  m[3][3] = sd / p;
  return m;
}

// |d|·u^♯ (4×2)
inline std::array<std::array<cd, 2>, 4> du_sharp(cd z) {
  const double s = r2(z);
  const double c = 1 + 4 * s / 3, b = 1 - s * s / 12;
  return {{{s * z * z * z / 2.0 * c, -z * z / 2.0 * c * (1 + 4 * s + s * s * s / 9)},
           {s * z * z / 3.0 * (2 - s * s * s / 9 - s * s / 4), -z * (1 + 4 * s - 2 * s * s * s / 9)},
           {-z * z * (1 + s * s / 4 + 4 * s * s * s / 9), s * s * z / 3.0 * (4 + 4 * s + s * s * s / 9)},
           {2.0 * z * b * (1 + s * s / 4 + s * s * s / 9), cd(-2 * s * s * b)}}};
}

// ρ entering the spanning vectors (1,1,-iρ,ρ), (ρ,-ρ,i,1)
inline cd rho(cd z) {
  const double s = r2(z);
  return z * (1 + 2 * s - s * s * s / 18) / det_d(z);
}

// columns 3-6 of the extended frame times √|d|·P
inline std::array<std::array<cd, 4>, 8> frame_columns_scaled(cd z, cd lambda) {
  const double s = r2(z), r = std::sqrt(s), dd = det_d(z);
  const cd zb = std::conj(z), L = 1.0 / lambda;
  const double c = 1 + 4 * s / 3, d11 = 1 + 4 * s + s * s * s / 9;
  const double f23 = 1 + 4 * s + s * s / 6 - 2 * s * s * s / 9 + std::pow(s, 5) / 54;
  const double f25 = c * d11;
  const double f24 = 1 + 4 * s - 10 * s * s * s / 9 - 8 * std::pow(s, 4) / 9 - 2 * std::pow(s, 6) / 81;
  (void)r;
  return {{
      {-std::pow(s, 4) / 6 * L * c, z * s * s / 3.0 * L, -z * (1 + 4 * s) * dd * L, -z * z * f25 / 2.0 * L},
      {2.0 * z * L * f23, -z * z * L, 2.0 * z * z * s * dd * L / 3.0, z * z * z * s * c * L / 2.0},
      {cd(f24), 2.0 * z * s, -4.0 * z * s * s * dd / 3.0, -z * z * s * s * c},
      {-s * zb * f25 / 2.0, cd(d11), cd(-s * (1 + 4 * s) * dd), -z * s * f25 / 2.0},
      {s * s * s * zb * c / 2.0, cd(-s * s), cd((1 + 4 * s + 4 * s * s * s / 9) * dd), s * s * s * z * c / 2.0},
      {-s * s * zb * zb * c, 2.0 * zb * s, -4.0 * zb * s * s * dd / 3.0, cd(f24)},
      {lambda * s * zb * zb * zb * c / 2.0, -lambda * zb * zb, 2.0 * lambda * zb * zb * s * dd / 3.0,
       2.0 * lambda * zb * f23},
      {-lambda * zb * zb * f25 / 2.0, lambda * zb * s * s / 3.0, -lambda * zb * (1 + 4 * s) * dd,
       -lambda * std::pow(s, 4) * c / 6.0},
  }};
}

// potential coefficients h_{j1}, h_{j2}
inline std::array<std::array<cd, 2>, 4> h(cd z) {
  const cd I(0, 1);
  return {{{I * z, -I / 2.0}, {-I * z, -I / 2.0}, {cd(-1), -z / 2.0}, {I, -I * z / 2.0}}};
}

}  // namespace sphere

// ---------------------------------------------------------------------------
// isotropic minimal surfaces in R⁴ from f₂, f₄

namespace minimal {

struct Data {
  cd f2, df2, f4, df4;
};

inline Data polynomial_example(cd z) { return {z * z, 2.0 * z, z, cd(1)}; }

// homogeneous lift in R^{1,7}
inline std::array<double, 8> Y(const Data& v, cd lambda) {
  const cd I(0, 1), li = 1.0 / lambda;
  const cd r = v.df2 / v.df4;  // f₂'/f₄'
  const cd cr = std::conj(r);
  const cd a = std::conj(v.f2) * v.f4 * r;
  const double t = std::norm(v.df2) * (1 + std::norm(v.f4)) / std::norm(v.df4);
  std::array<cd, 8> y = {
      (1 + std::norm(v.f2)) - a - std::conj(a) + t,
      (1 - std::norm(v.f2)) + a + std::conj(a) - t,
      -I * r + I * cr,
      -r - cr,
      -I * (li * v.f2 - lambda * std::conj(v.f2)) + I * li * r * v.f4 - I * lambda * cr * std::conj(v.f4),
      (li * v.f2 + lambda * std::conj(v.f2)) - li * r * v.f4 - lambda * cr * std::conj(v.f4),
      cd(0),
      cd(0),
  };
  std::array<double, 8> out{};
  for (int i = 0; i < 8; ++i) out[static_cast<size_t>(i)] = y[static_cast<size_t>(i)].real();
  return out;
}

// the minimal surface in R⁴ conformal to [Y]
inline std::array<double, 4> x_r4(const Data& v, cd lambda) {
  auto y = Y(v, lambda);
  return {y[2], y[3], y[4], y[5]};
}

inline double det_d(const Data& v) { return 1 + std::norm(v.f4); }

// l₀ in the gauge with unit middle diagonal
inline std::array<std::array<cd, 4>, 4> l0(const Data& v) {
  const double sd = std::sqrt(det_d(v));
  const cd w = std::conj(v.f2) * v.f4;
  std::array<std::array<cd, 4>, 4> m{};
  m[0][0] = 1 / sd;
  m[0][1] = -w / sd;
  m[1][1] = 1;
  m[2][2] = 1;
  m[2][3] = w;
  m[3][3] = sd;
  return m;
}

// columns 3-6 of the extended frame at λ = 1
inline std::array<std::array<cd, 4>, 8> frame_columns(const Data& v) {
  const double sd = std::sqrt(det_d(v));
  const cd f2 = v.f2, f4 = v.f4, f2b = std::conj(v.f2), f4b = std::conj(v.f4);
  return {{
      {0.0, 0.0, 0.0, 0.0},
      {0.0, f2, 0.0, f4 / sd},
      {1 / sd, 0.0, 0.0, 0.0},
      {0.0, 1.0, 0.0, 0.0},
      {-f2 * f4b / sd, -std::norm(f2), 1.0, -f2b * f4 / sd},
      {0.0, 0.0, 0.0, 1 / sd},
      {f4b / sd, f2b, 0.0, 0.0},
      {0.0, 0.0, 0.0, 0.0},
  }};
}

}  // namespace minimal

}  // namespace isowill::golden
