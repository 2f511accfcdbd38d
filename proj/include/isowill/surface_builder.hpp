#pragma once

// From the frame and B₁ to the canonical lift Y and the point x ∈ S⁶.

#include <array>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "group_bridge.hpp"
#include "frame_geometry.hpp"

namespace isowill {

// B₁ at λ: the λ⁻¹ part of α′ is L₀P̌(η₋₁)L₀⁻¹, bridged back to 𝔰𝔬(1,7)
template <class C>
Mat<C> b1_at(const PointFrame<C>& p, const C& lambda) {
  Mat<C> k = p.L0 * potential_matrix(p.pot.fcheck) * p.L0inv;
  return from_g8(k).block(0, 4, 4, 4) * (C(1) / lambda);
}

// ---------------------------------------------------------------------------
// the quadratic condition on the lift parameter

enum class Branch { Rank1Primal, Rank1Dual, Rank2Unique };

inline const char* branch_name(Branch b) {
  switch (b) {
    case Branch::Rank1Primal: return "primal";
    case Branch::Rank1Dual: return "dual";
    case Branch::Rank2Unique: return "unique";
  }
  return "?";
}

// projective root (u : v); ρ = u/v, infinite when v = 0
template <class C>
struct RhoRoot {
  C u{1}, v{1};
  Branch branch = Branch::Rank2Unique;
  real_t<C> residual{0};

  bool infinite() const { return cabs(v) <= epsilon_of<real_t<C>>() * cabs(u); }
  C rho() const { return u / v; }
};

template <class C>
struct RhoSolution {
  int rank = 0;
  real_t<C> sigma_ratio{0};
  std::vector<RhoRoot<C>> roots;  // unique root, or primal then dual
};

// M(h) with E_h(u, v) = -[ū v̄] M [u v]ᵀ for the lift below
template <class C>
std::array<C, 4> rho_form(const Mat<C>& h) {
  const C i = imag_unit<C>();
  const C a = h(0, 0) + h(1, 0), b = h(0, 0) - h(1, 0);
  const C p = h(2, 0) + i * h(3, 0), m = h(2, 0) - i * h(3, 0);
  return {a, -p, -m, b};
}

template <class C>
C rho_form_value(const std::array<C, 4>& M, const C& u, const C& v) {
  return cconj(u) * (M[0] * u + M[1] * v) + cconj(v) * (M[2] * u + M[3] * v);
}

template <class R>
R rank_threshold() {
  constexpr int digits = std::numeric_limits<R>::digits10;
  if constexpr (digits <= 15) return R(1e-8);
  else if constexpr (digits <= 18) return R(1e-10);
  else {
    using std::pow;
    return pow(R(10), R(-0.45 * digits));
  }
}

namespace detail {
template <class C>
real_t<C> norm4(const std::array<C, 4>& m) {
  real_t<C> s(0);
  for (const auto& x : m) s += re_part(C(x * cconj(x)));
  return rsqrt(s);
}

// |E_h1| + |E_h3| with (u, v) and each form normalized
template <class C>
real_t<C> rho_residual(const std::array<C, 4>& m1, const std::array<C, 4>& m3, C u, C v) {
  const real_t<C> n = rsqrt(re_part(C(u * cconj(u) + v * cconj(v))));
  u /= C(n);
  v /= C(n);
  real_t<C> r(0);
  for (const auto* m : {&m1, &m3}) {
    const real_t<C> s = norm4(*m);
    if (s > 0) r += cabs(rho_form_value(*m, u, v)) / s;
  }
  return r;
}
}  // namespace detail

template <class C>
RhoSolution<C> solve_rho1(const Mat<C>& b1) {
  using R = real_t<C>;
  const Mat<C> h1 = b1.col(0), h3 = b1.col(2);
  const R n1 = frob(h1), n3 = frob(h3);
  const R scale = n1 > n3 ? n1 : n3;
  if (!(scale > epsilon_of<R>() * R(16))) throw Error(ErrorKind::DegenerateB1, "both columns of B1 vanish");

  // singular values of [h1 h3] by Gram-Schmidt
  RhoSolution<C> out;
  {
    const Mat<C>& a = n1 >= n3 ? h1 : h3;
    const Mat<C>& b = n1 >= n3 ? h3 : h1;
    const R na = n1 >= n3 ? n1 : n3, nb = n1 >= n3 ? n3 : n1;
    C proj = (a.adjoint() * b)(0, 0) / C(na * na);
    const R bperp = frob(Mat<C>(b - a * proj));
    const R prod = na * bperp, sum = na * na + nb * nb;
    R disc = sum * sum - 4 * prod * prod;
    if (disc < 0) disc = 0;
    const R s1 = rsqrt((sum + rsqrt(disc)) / 2);
    out.sigma_ratio = prod / (s1 * s1);
    out.rank = out.sigma_ratio > rank_threshold<R>() ? 2 : 1;
  }

  const C i = imag_unit<C>();
  const auto m1 = rho_form(h1), m3 = rho_form(h3);
  std::array<C, 4> mp = m1;
  R best(-1);
  for (const Mat<C>& h : {h1, h3, Mat<C>(h1 + h3), Mat<C>(h1 + h3 * i)}) {
    auto m = rho_form(h);
    R n = detail::norm4(m);
    if (n > best) best = n, mp = m;
  }

  // primal: right kernel from the heavier row; dual: conjugated left kernel
  RhoRoot<C> primal, dual;
  primal.branch = Branch::Rank1Primal;
  dual.branch = Branch::Rank1Dual;
  {
    const R r0 = cabs(mp[0]) + cabs(mp[1]), r1 = cabs(mp[2]) + cabs(mp[3]);
    const C al = r0 >= r1 ? mp[0] : mp[2], be = r0 >= r1 ? mp[1] : mp[3];
    primal.u = -be;
    primal.v = al;
    const R c0 = cabs(mp[0]) + cabs(mp[2]), c1 = cabs(mp[1]) + cabs(mp[3]);
    const C x1 = c0 >= c1 ? mp[0] : mp[1], x2 = c0 >= c1 ? mp[2] : mp[3];
    dual.u = cconj(x2);
    dual.v = cconj(C(-x1));
  }
  for (RhoRoot<C>* r : {&primal, &dual}) {
    if (!r->infinite()) {
      r->u = r->u / r->v;
      r->v = C(1);
    } else {
      r->u = C(1);
      r->v = C(0);
    }
    r->residual = detail::rho_residual(m1, m3, r->u, r->v);
  }
  if (out.rank == 2) {
    RhoRoot<C> r = primal.residual <= dual.residual ? primal : dual;
    r.branch = Branch::Rank2Unique;
    out.roots.push_back(r);
  } else {
    out.roots.push_back(primal);
    out.roots.push_back(dual);
  }
  return out;
}

// ---------------------------------------------------------------------------
// lift and projection

template <class C>
using Vec8 = std::array<real_t<C>, 8>;
template <class C>
using Vec7 = std::array<real_t<C>, 7>;

// φ₁..φ₄: first four columns of the real frame from_g8(F̌(λ))
template <class C>
struct PhiColumns {
  std::array<Vec8<C>, 4> phi;
  real_t<C> imag_residual{0};
};

template <class C>
PhiColumns<C> phi_columns(const Mat<C>& frame_g8) {
  const Mat<C> F = from_g8(frame_g8);
  PhiColumns<C> out;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 8; ++i) {
      out.phi[static_cast<size_t>(j)][static_cast<size_t>(i)] = re_part(F(i, j));
      const real_t<C> im = cabs(im_part(F(i, j)));
      if (im > out.imag_residual) out.imag_residual = im;
    }
  return out;
}

// (φ₁+φ₂, φ₁−φ₂, φ₃−iφ₄, φ₃+iφ₄) read off columns 3-6 of F̌ directly
template <class C>
Mat<C> phi_hat_from_frame(const Mat<C>& f) {
  const C i = imag_unit<C>();
  auto e = [&](int r, int c) { return f(r - 1, c - 1); };
  Mat<C> out(8, 4);
  for (int s = 0; s < 2; ++s) {
    const C sg = s == 0 ? C(-1) : C(1);
    out(s, 0) = e(4, 4) + sg * e(5, 4);
    out(s, 1) = -(e(4, 5) + sg * e(5, 5));
    out(s, 2) = -i * (e(4, 6) + sg * e(5, 6));
    out(s, 3) = i * (e(4, 3) + sg * e(5, 3));
  }
  const int pairs[3][2] = {{3, 6}, {2, 7}, {1, 8}};
  for (int k = 0; k < 3; ++k) {
    const int a = pairs[k][0], b = pairs[k][1], r = 2 + 2 * k;
    out(r, 0) = -i * (e(a, 4) - e(b, 4));
    out(r, 1) = i * (e(a, 5) - e(b, 5));
    out(r, 2) = -(e(a, 6) - e(b, 6));
    out(r, 3) = e(a, 3) - e(b, 3);
    out(r + 1, 0) = e(a, 4) + e(b, 4);
    out(r + 1, 1) = -(e(a, 5) + e(b, 5));
    out(r + 1, 2) = -i * (e(a, 6) + e(b, 6));
    out(r + 1, 3) = i * (e(a, 3) + e(b, 3));
  }
  return out;
}

// Y = |v|²(φ₁+φ₂) + |u|²(φ₁−φ₂) + 2Re(uv̄)φ₃ + 2Im(uv̄)φ₄, forward cone
template <class C>
Vec8<C> canonical_lift(const PhiColumns<C>& ph, const RhoRoot<C>& root) {
  using R = real_t<C>;
  const R A = re_part(C(root.v * cconj(root.v))), B = re_part(C(root.u * cconj(root.u)));
  const C w = root.u * cconj(root.v);
  const R c[4] = {A + B, A - B, 2 * re_part(w), 2 * im_part(w)};
  Vec8<C> y{};
  R mx(0);
  for (int i = 0; i < 8; ++i) {
    R s(0);
    for (int j = 0; j < 4; ++j) s += c[j] * ph.phi[static_cast<size_t>(j)][static_cast<size_t>(i)];
    y[static_cast<size_t>(i)] = s;
    if (cabs(C(s)) > mx) mx = cabs(C(s));
  }
  R cmax(0);
  for (const R& v : c) cmax = cabs(C(v)) > cmax ? cabs(C(v)) : cmax;
  if (!(mx > R(1e3) * epsilon_of<R>() * cmax)) throw Error(ErrorKind::NullOutput, "vanishing lift");
  if (y[0] < 0)
    for (auto& v : y) v = -v;
  return y;
}

template <class R>
R lorentz(const std::array<R, 8>& a, const std::array<R, 8>& b) {
  R s = -a[0] * b[0];
  for (int i = 1; i < 8; ++i) s += a[static_cast<size_t>(i)] * b[static_cast<size_t>(i)];
  return s;
}

template <class R>
std::array<R, 7> project_to_sphere(const std::array<R, 8>& y) {
  using std::abs;
  R mx(0);
  for (const R& v : y) mx = abs(v) > mx ? abs(v) : mx;
  if (!(abs(y[0]) > R(1e3) * epsilon_of<R>() * mx))
    throw Error(ErrorKind::DivideByZero, "Y0 vanishes");
  std::array<R, 7> x{};
  for (int i = 0; i < 7; ++i) x[static_cast<size_t>(i)] = y[static_cast<size_t>(i) + 1] / y[0];
  return x;
}

template <class R>
R sphere_norm_residual(const std::array<R, 7>& x) {
  using std::abs;
  R s(0);
  for (const auto& v : x) s += v * v;
  return abs(rsqrt(s) - R(1));
}

// ---------------------------------------------------------------------------
// full per-point evaluation

template <class C>
struct SurfaceSample {
  C z, lambda;
  Branch branch = Branch::Rank2Unique;
  int rank = 0;
  C rho{0};
  bool rho_infinite = false;
  Vec8<C> Y{};
  Vec7<C> x{};
  real_t<C> margin{0};
  bool renormalized = false;  // frame close to blow-up, lift rescaled
  std::map<std::string, double> residuals;
};

inline constexpr double kBlowupNorm = 1e8;

template <class C>
std::vector<SurfaceSample<C>> surface_at(const PointFrame<C>& p, const C& lambda) {
  using R = real_t<C>;
  const Mat<C> F = p.frame(lambda);
  const Mat<C> b1 = b1_at(p, lambda);
  const auto sol = solve_rho1(b1);
  const auto ph = phi_columns(F);
  std::vector<SurfaceSample<C>> out;
  for (const auto& root : sol.roots) {
    SurfaceSample<C> s;
    s.z = p.z;
    s.lambda = lambda;
    s.branch = root.branch;
    s.rank = sol.rank;
    s.rho_infinite = root.infinite();
    s.rho = s.rho_infinite ? C(0) : root.rho();
    s.margin = p.margin();
    Vec8<C> y = canonical_lift(ph, root);
    if (to_double(max_abs(F)) > kBlowupNorm) {
      R mx(0);
      for (auto v : y) mx = std::max(mx, R(cabs(C(v))));
      for (auto& v : y) v /= mx;
      s.renormalized = true;
    }
    s.Y = y;
    s.x = project_to_sphere(y);
    R ysq(0);
    for (auto v : y) ysq += v * v;
    s.residuals["lightcone"] = to_double(cabs(C(lorentz(y, y))) / ysq);
    s.residuals["sphere"] = to_double(sphere_norm_residual(s.x));
    s.residuals["rho"] = to_double(root.residual);
    s.residuals["phi_imag"] = to_double(ph.imag_residual);
    s.residuals["b1_pattern"] = to_double(b1_pattern_residual(b1));
    s.residuals["b1_isotropy"] = to_double(b1_isotropy_residual(b1));
    out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// x as a function of z, for derivatives

template <class C>
const RhoRoot<C>& pick_root(const RhoSolution<C>& sol, Branch want) {
  for (const auto& r : sol.roots)
    if (r.branch == want) return r;
  return sol.roots.front();
}

// x(z) on one branch; rank-2 points ignore the preference
template <class C>
Vec7<C> x_at(const Pipeline<C>& pl, const C& z, const C& lambda, Branch want = Branch::Rank1Primal) {
  PointFrame<C> p;
  try {
    p = pl.at(z);
  } catch (const Error& e) {
    if (detail::crosses_boundary(e)) throw Error(ErrorKind::StencilCrossesBigCellBoundary, e.what());
    throw;
  }
  const Mat<C> F = p.frame(lambda);
  const auto sol = solve_rho1(b1_at(p, lambda));
  return project_to_sphere(canonical_lift(phi_columns(F), pick_root(sol, want)));
}

// lift normalized to Y = (1, x)
template <class R>
std::array<R, 8> affine_lift(const std::array<R, 7>& x) {
  std::array<R, 8> y{};
  y[0] = R(1);
  for (int i = 0; i < 7; ++i) y[static_cast<size_t>(i) + 1] = x[static_cast<size_t>(i)];
  return y;
}

template <class C>
using CVec8 = std::array<C, 8>;

namespace detail {
template <class C, class Fn>
CVec8<C> lift_dz(const Fn& y, const C& z, const real_t<C>& h) {
  const C i = imag_unit<C>();
  const auto px = y(z + C(h)), mx = y(z - C(h)), py = y(z + i * h), my = y(z - i * h);
  CVec8<C> out{};
  for (size_t k = 0; k < 8; ++k) out[k] = (C(px[k] - mx[k]) - i * C(py[k] - my[k])) / C(4 * h);
  return out;
}

// ∂z² = (∂xx − ∂yy − 2i∂xy)/4
template <class C, class Fn>
CVec8<C> lift_dzz(const Fn& y, const C& z, const real_t<C>& h) {
  const C i = imag_unit<C>();
  const auto c = y(z);
  const auto px = y(z + C(h)), mx = y(z - C(h)), py = y(z + i * h), my = y(z - i * h);
  const auto pp = y(z + C(h) + i * h), pm = y(z + C(h) - i * h), mp = y(z - C(h) + i * h), mm = y(z - C(h) - i * h);
  const real_t<C> h2 = h * h;
  CVec8<C> out{};
  for (size_t k = 0; k < 8; ++k) {
    const real_t<C> xx = (px[k] - 2 * c[k] + mx[k]) / h2, yy = (py[k] - 2 * c[k] + my[k]) / h2;
    const real_t<C> xy = (pp[k] - pm[k] - mp[k] + mm[k]) / (4 * h2);
    out[k] = (C(xx - yy) - C(2) * i * C(xy)) / C(4);
  }
  return out;
}

// complex bilinear (1,7) form, no conjugation
template <class C>
C lorentz_c(const CVec8<C>& a, const CVec8<C>& b) {
  C s = -a[0] * b[0];
  for (size_t k = 1; k < 8; ++k) s += a[k] * b[k];
  return s;
}
}  // namespace detail

// |x_z|² = Σ|∂z x_i|²
template <class C>
real_t<C> induced_metric(const Pipeline<C>& pl, const C& z, const C& lambda, const real_t<C>& h,
                         Branch want = Branch::Rank1Primal) {
  auto y = [&](const C& w) { return affine_lift(x_at(pl, w, lambda, want)); };
  const auto d = detail::lift_dz(y, z, h);
  real_t<C> s(0);
  for (size_t k = 1; k < 8; ++k) s += re_part(C(d[k] * cconj(d[k])));
  return s;
}

// the same density in the chart z̃ = 1/z, at z̃ = 0
template <class C>
real_t<C> induced_metric_at_infinity(const Pipeline<C>& pl, const C& lambda, const real_t<C>& h,
                                     Branch want = Branch::Rank1Primal) {
  auto y = [&](const C& w) { return affine_lift(x_at(pl, C(C(1) / w), lambda, want)); };
  const auto d = detail::lift_dz(y, C(0), h);
  real_t<C> s(0);
  for (size_t k = 1; k < 8; ++k) s += re_part(C(d[k] * cconj(d[k])));
  return s;
}

// ⟨Y_z, Y_z⟩, ⟨Y_z, Y_zz⟩, ⟨Y_zz, Y_zz⟩ for Y = (1, x)
template <class C>
std::array<real_t<C>, 3> isotropy_residuals(const Pipeline<C>& pl, const C& z, const C& lambda, const real_t<C>& h,
                                            Branch want = Branch::Rank1Primal) {
  auto y = [&](const C& w) { return affine_lift(x_at(pl, w, lambda, want)); };
  const auto d1 = detail::lift_dz(y, z, h);
  const auto d2 = detail::lift_dzz(y, z, h);
  return {cabs(detail::lorentz_c(d1, d1)), cabs(detail::lorentz_c(d1, d2)), cabs(detail::lorentz_c(d2, d2))};
}

}  // namespace isowill
