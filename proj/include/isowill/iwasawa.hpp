#pragma once

// Explicit Iwasawa decomposition of the meromorphic frame H = F̌·F̌₊ for
// the nilpotent potentials handled here.

#include <memory>

#include "dfrac.hpp"
#include "group_bridge.hpp"
#include "loop_algebra.hpp"
#include "potential.hpp"

namespace isowill {

struct IwasawaTolerances {
  double cond_max = 1e12;         // big-cell cutoff on cond(d)
  double factor_residual = 1e-11;  // relative, for the triangular factors
};

template <class S>
struct W0Blocks {
  Mat<S> a, q, d, u, usharp, gcheck;
};

// d → u^♯ → q → a → ǧ. The bars are entrywise conjugates.
template <class C>
W0Blocks<C> solve_w0(const Mat<C>& f, const Mat<C>& g, const IwasawaTolerances& tol = {}) {
  const auto& k = G8Constants<C>::get();
  const Mat<C> fs = sharp(f);
  W0Blocks<C> w;
  w.d = Mat<C>::identity(2) + fs.adjoint() * k.J4c * fs + g.adjoint() * g;
  // Hermitian positive definite; condition number via eigenvalues
  const real_t<C> tr = re_part(C(w.d(0, 0) + w.d(1, 1)));
  const real_t<C> det = re_part(det2(w.d));
  const real_t<C> lmax = (tr + rsqrt(real_t<C>(tr * tr - 4 * det > 0 ? tr * tr - 4 * det : real_t<C>(0)))) / 2;
  const real_t<C> lmin = det / lmax;
  if (!(lmin > 0) || to_double(lmax / lmin) > tol.cond_max)
    throw Error(ErrorKind::OutsideBigCell, "d is numerically singular");
  const Mat<C> dinv = inverse2(w.d);
  w.usharp = (fs - k.J4c * f.conjugate().transpose() * g) * dinv;
  w.u = unsharp(w.usharp);
  w.q = Mat<C>::identity(4) + k.J4c * f.conjugate().transpose() * f - w.usharp * w.d * w.usharp.adjoint() * k.J4c;
  w.a = Mat<C>::identity(2) - w.u * w.q * k.J4c * w.u.conjugate().transpose() - g * dinv.adjoint() * g.adjoint();
  w.gcheck = g * dinv;
  return w;
}

// residuals of the block equations (a)-(e) and ǧd = g, relative to max(1, |rhs|)
struct W0Residuals {
  double a = 0, b = 0, c = 0, d = 0, e = 0, gcheck = 0;
  double max() const { return std::max({a, b, c, d, e, gcheck}); }
};

template <class C>
W0Residuals w0_residuals(const W0Blocks<C>& w, const Mat<C>& f, const Mat<C>& g) {
  const auto& k = G8Constants<C>::get();
  const Mat<C> fs = sharp(f);
  auto rel = [](const Mat<C>& lhs, const Mat<C>& rhs) {
    double s = std::max(1.0, to_double(max_abs(rhs)));
    return to_double(max_abs_diff(lhs, rhs)) / s;
  };
  const Mat<C> I2 = Mat<C>::identity(2), I4 = Mat<C>::identity(4);
  W0Residuals r;
  r.a = rel(w.d, I2 + fs.adjoint() * k.J4c * fs + g.adjoint() * g);
  r.b = rel(w.usharp * w.d, fs - k.J4c * f.conjugate().transpose() * g);
  r.c = rel(w.q + w.usharp * w.d * w.usharp.adjoint() * k.J4c, I4 + k.J4c * f.conjugate().transpose() * f);
  r.d = rel(w.a + w.u * w.q * k.J4c * w.u.conjugate().transpose() + g * inverse2(w.d.adjoint()) * g.adjoint(), I2);
  r.e = rel(w.u * w.q - g * w.usharp.adjoint() * k.J4c, f);
  r.gcheck = rel(w.gcheck * w.d, g);
  return r;
}

// smallest singular value of d
template <class C>
real_t<C> big_cell_margin(const W0Blocks<C>& w) {
  const real_t<C> tr = re_part(C(w.d(0, 0) + w.d(1, 1)));
  const real_t<C> det = re_part(det2(w.d));
  real_t<C> disc = tr * tr - 4 * det;
  if (disc < 0) disc = 0;
  const real_t<C> lmax = (tr + rsqrt(disc)) / 2;
  return det / lmax;
}

template <class C>
real_t<C> big_cell_margin(const FcheckData& fc, const C& z) {
  auto v = eval_fcheck(fc, z);
  const auto& k = G8Constants<C>::get();
  const Mat<C> fs = sharp(v.f);
  W0Blocks<C> w;
  w.d = Mat<C>::identity(2) + fs.adjoint() * k.J4c * fs + v.g.adjoint() * v.g;
  return big_cell_margin(w);
}

// ---------------------------------------------------------------------------
// exact W0 over the fractions N / |d|^k

struct ExactW0 {
  std::shared_ptr<const DContext> ctx;
  Mat<DFrac> a, q, d, u, usharp, gcheck;
  Mat<DFrac> f, g;  // inputs, lifted
};

inline Mat<DFrac> lift_poly_matrix(const RMat& m) {
  Mat<DFrac> out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      if (!m(i, j).is_polynomial())
        throw Error(ErrorKind::UnsupportedFormat, "exact mode needs polynomial f and g");
      GQ c = m(i, j).den()[0];
      out(i, j) = DFrac(BiPoly::from_z(m(i, j).num()) * BiPoly(GQ(1) / c));
    }
  return out;
}

inline ExactW0 solve_w0_exact(const FcheckData& fc) {
  const auto& k = G8Constants<DFrac>::get();
  ExactW0 w;
  w.f = lift_poly_matrix(fc.f);
  w.g = lift_poly_matrix(fc.g);
  const Mat<DFrac> fs = sharp(w.f);
  w.d = Mat<DFrac>::identity(2) + fs.adjoint() * k.J4c * fs + w.g.adjoint() * w.g;
  w.ctx = std::make_shared<const DContext>(det2(w.d).num());
  // rewrite every input with the context attached
  auto attach = [&](Mat<DFrac>& m) {
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) m(i, j) = DFrac(m(i, j).num(), m(i, j).power(), w.ctx);
  };
  attach(w.d);
  attach(w.f);
  attach(w.g);
  Mat<DFrac> dinv = adj2(w.d);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) dinv(i, j) = over_d(dinv(i, j), 1, w.ctx);
  const Mat<DFrac> N = sharp(w.f) - k.J4c * w.f.conjugate().transpose() * w.g;
  w.usharp = N * dinv;
  w.u = unsharp(w.usharp);
  // u^♯ d u^♯ᴴ = N adj(d) Nᴴ / |d| since adj(d) d = |d| and adj(d) is Hermitian
  Mat<DFrac> nan = N * adj2(w.d) * N.adjoint();
  for (auto i = 0; i < 4; ++i)
    for (auto j = 0; j < 4; ++j) nan(i, j) = over_d(nan(i, j), 1, w.ctx);
  w.q = Mat<DFrac>::identity(4) + k.J4c * w.f.conjugate().transpose() * w.f - nan * k.J4c;
  // a = J conj(d)⁻¹ J = J adj(dᵗ) J / |d|
  Mat<DFrac> a = k.J2 * adj2(Mat<DFrac>(w.d.transpose())) * k.J2;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) a(i, j) = over_d(a(i, j), 1, w.ctx);
  w.a = a;
  w.gcheck = w.g * dinv;
  return w;
}

struct ExactW0Check {
  bool a = false, b = false, c = false, d = false, e = false, gcheck = false;
  bool all() const { return a && b && c && d && e && gcheck; }
};

// exact verification of the system, with d⁻¹ = adj(d)/|d|
inline ExactW0Check check_w0_exact(const ExactW0& w) {
  const auto& k = G8Constants<DFrac>::get();
  const Mat<DFrac> fs = sharp(w.f);
  const Mat<DFrac> I2 = Mat<DFrac>::identity(2), I4 = Mat<DFrac>::identity(4);
  Mat<DFrac> dHinv = adj2(Mat<DFrac>(w.d.adjoint()));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) dHinv(i, j) = over_d(dHinv(i, j), 1, w.ctx);
  ExactW0Check c;
  c.a = is_zero(Mat<DFrac>(w.d - I2 - fs.adjoint() * k.J4c * fs - w.g.adjoint() * w.g));
  c.b = is_zero(Mat<DFrac>(w.usharp * w.d - fs + k.J4c * w.f.conjugate().transpose() * w.g));
  c.c = is_zero(Mat<DFrac>(w.q + w.usharp * w.d * w.usharp.adjoint() * k.J4c - I4 -
                           k.J4c * w.f.conjugate().transpose() * w.f));
  c.d = is_zero(Mat<DFrac>(w.a + w.u * w.q * k.J4c * w.u.conjugate().transpose() + w.g * dHinv * w.g.adjoint() - I2));
  c.e = is_zero(Mat<DFrac>(w.u * w.q - w.g * w.usharp.adjoint() * k.J4c - w.f));
  c.gcheck = is_zero(Mat<DFrac>(w.gcheck * w.d - w.g));
  return c;
}

// compiled numeric evaluation of the exact blocks
template <class C>
class ExactW0Eval {
 public:
  ExactW0Eval() = default;
  explicit ExactW0Eval(const ExactW0& w) : D_(w.ctx->D()) {
    for (const Mat<DFrac>* m : {&w.a, &w.q, &w.d, &w.u, &w.usharp, &w.gcheck}) {
      Block b{m->rows(), m->cols(), {}};
      for (const auto& x : m->data()) {
        b.e.emplace_back(x);
        const DFracEval<C>& ev = b.e.back();
        ma_ = std::max(ma_, ev.max_a());
        mb_ = std::max(mb_, ev.max_b());
        mk_ = std::max(mk_, x.power());
      }
      blocks_.push_back(std::move(b));
    }
    ma_ = std::max(ma_, D_.max_a());
    mb_ = std::max(mb_, D_.max_b());
  }

  W0Blocks<C> operator()(const C& z) const {
    auto zp = powers(z, ma_);
    auto zbp = powers(cconj(z), mb_);
    C dval = D_(zp, zbp);
    if (cabs(dval) == real_t<C>(0)) throw Error(ErrorKind::OutsideBigCell, "det d vanishes");
    auto ip = powers(C(C(1) / dval), mk_);
    auto build = [&](const Block& b) {
      Mat<C> m(b.r, b.c);
      for (int i = 0; i < b.r; ++i)
        for (int j = 0; j < b.c; ++j) m(i, j) = b.e[static_cast<size_t>(i * b.c + j)](zp, zbp, ip);
      return m;
    };
    return {build(blocks_[0]), build(blocks_[1]), build(blocks_[2]),
            build(blocks_[3]), build(blocks_[4]), build(blocks_[5])};
  }
  C det_d(const C& z) const { return D_(powers(z, ma_), powers(cconj(z), mb_)); }

 private:
  struct Block {
    int r, c;
    std::vector<DFracEval<C>> e;
  };
  BiPolyEval<C> D_;
  std::vector<Block> blocks_;
  int ma_ = 0, mb_ = 0, mk_ = 0;
};

// ---------------------------------------------------------------------------
// triangular factors

enum class Gauge { DetD, UnitMiddle };

inline const char* gauge_name(Gauge g) { return g == Gauge::DetD ? "detd" : "unit-middle"; }

template <class C>
struct L0Blocks {
  Mat<C> l1, l0, l4;
};

// m = lᴴl with l upper triangular, positive diagonal
template <class C>
Mat<C> cholesky_upper2(const Mat<C>& m, const char* what) {
  using R = real_t<C>;
  const R m11 = re_part(m(0, 0));
  if (!(m11 > 0)) throw Error(ErrorKind::OutsideBigCell, std::string(what) + " is not positive definite");
  Mat<C> l(2, 2);
  const R l11 = rsqrt(m11);
  l(0, 0) = C(l11);
  l(0, 1) = m(0, 1) / C(l11);
  const R rest = re_part(m(1, 1)) - re_part(C(l(0, 1) * cconj(l(0, 1))));
  if (!(rest > 0)) throw Error(ErrorKind::OutsideBigCell, std::string(what) + " is not positive definite");
  l(1, 1) = C(rsqrt(rest));
  return l;
}

template <class C>
L0Blocks<C> factor_l0(const W0Blocks<C>& w, Gauge gauge = Gauge::DetD, const IwasawaTolerances& tol = {}) {
  using R = real_t<C>;
  const auto& k = G8Constants<C>::get();
  L0Blocks<C> out;
  out.l1 = cholesky_upper2(w.a, "a");
  out.l4 = cholesky_upper2(w.d, "d");
  // q = J̌₄ l̄₀ᵗ J̌₄ l₀: the first row of q fixes l₀ up to diag(1,t,1/t,1)
  const R q11 = re_part(w.q(0, 0));
  const R qscale = max_abs(w.q);
  if (!(q11 > epsilon_of<R>() * R(64) * (R(1) + qscale)))
    throw Error(ErrorKind::OutsideBigCell, "vanishing pivot in the q factorization");
  const R t = gauge == Gauge::DetD ? rsqrt(re_part(det2(w.d))) : R(1);
  Mat<C> l(4, 4);
  const R l11 = rsqrt(q11);
  l(0, 0) = C(l11);
  for (int j = 1; j < 4; ++j) l(0, j) = w.q(0, j) / C(l11);
  l(3, 3) = C(R(1) / l11);
  l(1, 1) = C(t);
  l(2, 2) = C(R(1) / t);
  l(2, 3) = -l(0, 1) * l(3, 3) / C(t);
  l(1, 3) = -l(0, 2) * l(3, 3) * C(t);
  out.l0 = l;
  const double s = std::max(1.0, to_double(qscale));
  const double rq = to_double(max_abs_diff(Mat<C>(k.J4c * l.adjoint() * k.J4c * l), w.q)) / s;
  if (rq > tol.factor_residual) throw Error(ErrorKind::OutsideBigCell, "q is not of triangular-factor form");
  return out;
}

struct L0Residuals {
  double a = 0, q = 0, d = 0, group = 0;
  double max() const { return std::max({a, q, d, group}); }
};

template <class C>
Mat<C> assemble_l0(const L0Blocks<C>& l) {
  Mat<C> m(8, 8);
  m.set_block(0, 0, l.l1);
  m.set_block(2, 2, l.l0);
  m.set_block(6, 6, l.l4);
  return m;
}

template <class C>
Mat<C> assemble_l0_inverse(const L0Blocks<C>& l) {
  Mat<C> m(8, 8);
  m.set_block(0, 0, upper_triangular_inverse(l.l1));
  m.set_block(2, 2, upper_triangular_inverse(l.l0));
  m.set_block(6, 6, upper_triangular_inverse(l.l4));
  return m;
}

template <class C>
L0Residuals l0_residuals(const L0Blocks<C>& l, const W0Blocks<C>& w) {
  const auto& k = G8Constants<C>::get();
  auto rel = [](const Mat<C>& lhs, const Mat<C>& rhs) {
    return to_double(max_abs_diff(lhs, rhs)) / std::max(1.0, to_double(max_abs(rhs)));
  };
  L0Residuals r;
  r.a = rel(Mat<C>(l.l1.adjoint() * l.l1), w.a);
  r.q = rel(Mat<C>(k.J4c * l.l0.adjoint() * k.J4c * l.l0), w.q);
  r.d = rel(Mat<C>(l.l4.adjoint() * l.l4), w.d);
  Mat<C> L = assemble_l0(l);
  r.group = to_double(g8_residual(L)) / std::max(1.0, to_double(max_abs(L) * max_abs(L)));
  return r;
}

// W = I + λ⁻¹W₁ + λ⁻²W₂
template <class C>
LoopMat<C> assemble_w(const W0Blocks<C>& w) {
  Mat<C> w1(8, 8), w2(8, 8);
  w1.set_block(0, 2, w.u);
  w1.set_block(2, 6, Mat<C>(-w.usharp));
  w2.set_block(0, 6, w.gcheck);
  LoopMat<C> W = LoopMat<C>::identity(8);
  W.set(-1, w1);
  W.set(-2, w2);
  return W;
}

template <class C>
Mat<C> assemble_w0(const W0Blocks<C>& w) {
  Mat<C> m(8, 8);
  m.set_block(0, 0, w.a);
  m.set_block(2, 2, w.q);
  m.set_block(6, 6, w.d);
  return m;
}

// F̌ = H τ̌(W) L₀⁻¹
template <class C>
LoopMat<C> extended_frame(const LoopMat<C>& H, const LoopMat<C>& W, const Mat<C>& L0inv) {
  return H * tau(W) * L0inv;
}

// F̌₊ = L₀ τ̌(W)⁻¹, only nonnegative λ-degrees
template <class C>
LoopMat<C> positive_factor(const LoopMat<C>& W, const Mat<C>& L0, double tol = 1e-9) {
  return L0 * inv_unipotent(tau(W), tol);
}

}  // namespace isowill
