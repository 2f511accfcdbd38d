#pragma once

// Matrix-valued Laurent polynomials in the loop parameter lambda.

#include <algorithm>
#include <map>
#include <string>

#include "errors.hpp"
#include "matrix.hpp"

namespace isowill {

inline constexpr int kMaxLoopDegree = 4;

template <class S>
class LoopMat {
 public:
  using M = Mat<S>;

  explicit LoopMat(int n = 8) : n_(n) {}

  static LoopMat identity(int n) {
    LoopMat l(n);
    l.set(0, M::identity(n));
    return l;
  }
  static LoopMat constant(const M& m) {
    LoopMat l(m.rows());
    l.set(0, m);
    return l;
  }

  int dim() const { return n_; }
  const std::map<int, M>& coeffs() const { return c_; }
  bool has(int d) const { return c_.count(d) > 0; }

  M coeff(int d) const {
    auto it = c_.find(d);
    return it == c_.end() ? M::zero(n_, n_) : it->second;
  }

  void set(int d, const M& m) {
    if (d < -kMaxLoopDegree || d > kMaxLoopDegree)
      throw Error(ErrorKind::DegreeOverflow, "lambda degree " + std::to_string(d) + " outside [-4, 4]");
    c_[d] = m;
  }
  void add(int d, const M& m) {
    auto it = c_.find(d);
    if (it == c_.end())
      set(d, m);
    else
      it->second += m;
  }

  int min_degree() const { return c_.empty() ? 0 : c_.begin()->first; }
  int max_degree() const { return c_.empty() ? 0 : c_.rbegin()->first; }

  friend LoopMat operator*(const LoopMat& a, const LoopMat& b) {
    LoopMat out(a.n_);
    for (const auto& [da, ma] : a.c_)
      for (const auto& [db, mb] : b.c_) out.add(da + db, ma * mb);
    return out;
  }
  friend LoopMat operator+(const LoopMat& a, const LoopMat& b) {
    LoopMat out = a;
    for (const auto& [d, m] : b.c_) out.add(d, m);
    return out;
  }
  friend LoopMat operator-(const LoopMat& a, const LoopMat& b) {
    LoopMat out = a;
    for (const auto& [d, m] : b.c_) out.add(d, -m);
    return out;
  }
  friend LoopMat operator*(const LoopMat& a, const M& m) { return a * constant(m); }
  friend LoopMat operator*(const M& m, const LoopMat& a) { return constant(m) * a; }

  // coefficientwise map
  template <class F>
  LoopMat map(F f) const {
    LoopMat out(n_);
    for (const auto& [d, m] : c_) out.set(d, f(m));
    return out;
  }

 private:
  int n_;
  std::map<int, M> c_;
};

template <class S>
LoopMat<S> loop_mul(const LoopMat<S>& a, const LoopMat<S>& b) {
  return a * b;
}

// F̄(λ) = Σ conj(F_d) λ^{-d}
template <class S>
LoopMat<S> loop_bar(const LoopMat<S>& a) {
  LoopMat<S> out(a.dim());
  for (const auto& [d, m] : a.coeffs()) out.set(-d, m.conjugate());
  return out;
}

template <class S>
LoopMat<S> loop_transpose(const LoopMat<S>& a) {
  return a.map([](const Mat<S>& m) { return m.transpose(); });
}

template <class S>
Mat<S> loop_eval(const LoopMat<S>& a, const S& lambda) {
  Mat<S> out = Mat<S>::zero(a.dim(), a.dim());
  for (const auto& [d, m] : a.coeffs()) {
    S p(1);
    if (d >= 0)
      for (int k = 0; k < d; ++k) p *= lambda;
    else
      for (int k = 0; k < -d; ++k) p /= lambda;
    out += m * p;
  }
  return out;
}

// ---------------------------------------------------------------------------
// constants of the G(8) picture

template <class S>
struct G8Constants {
  using M = Mat<S>;
  M J2, J4, J8, S4, J4c, S8, J8c, D0, I13, I17;

  static M anti(int n) {
    M m(n, n);
    for (int i = 0; i < n; ++i) m(i, n - 1 - i) = S(1);
    return m;
  }

  G8Constants() {
    J2 = anti(2);
    J4 = anti(4);
    J8 = anti(8);
    S4 = M(4, 4);
    S4(0, 3) = S4(3, 0) = S4(1, 1) = S4(2, 2) = S(1);
    J4c = S4 * J4;
    S8 = M(8, 8);
    S8.set_block(0, 6, J2);
    S8.set_block(6, 0, J2);
    S8.set_block(2, 2, S4);
    J8c = S8 * J8;
    D0 = M::identity(8);
    for (int i = 2; i < 6; ++i) D0(i, i) = S(-1);
    I13 = M::identity(4);
    I13(0, 0) = S(-1);
    I17 = M::identity(8);
    I17(0, 0) = S(-1);
  }

  static const G8Constants& get() {
    static const G8Constants c;
    return c;
  }
};

// τ̌(F) = Š₈ F̄ Š₈
template <class S>
LoopMat<S> tau(const LoopMat<S>& f) {
  const auto& k = G8Constants<S>::get();
  return loop_bar(f).map([&](const Mat<S>& m) { return Mat<S>(k.S8 * m * k.S8); });
}

// (τ̌(F))⁻¹ = J̌₈ F̄ᵗ J̌₈, valid for F with values in G(8)
template <class S>
LoopMat<S> tau_inv(const LoopMat<S>& f) {
  const auto& k = G8Constants<S>::get();
  return loop_bar(f).map([&](const Mat<S>& m) { return Mat<S>(k.J8c * m.transpose() * k.J8c); });
}

// F⁻¹ = J₈ Fᵗ J₈ for F in G(8)
template <class S>
LoopMat<S> g8_inverse(const LoopMat<S>& f) {
  const auto& k = G8Constants<S>::get();
  return f.map([&](const Mat<S>& m) { return Mat<S>(k.J8 * m.transpose() * k.J8); });
}

namespace detail {
template <class S>
bool loop_is_zero(const LoopMat<S>& a, double tol) {
  for (const auto& [d, m] : a.coeffs()) {
    if constexpr (requires { m.data()[0].is_zero(); }) {
      if (!is_zero(m)) return false;
    } else {
      if (to_double(max_abs(m)) > tol) return false;
    }
  }
  return true;
}
}  // namespace detail

namespace detail {
// product without the degree cap, for intermediate checks
template <class S>
std::map<int, Mat<S>> convolve(const LoopMat<S>& a, const LoopMat<S>& b) {
  std::map<int, Mat<S>> out;
  for (const auto& [da, ma] : a.coeffs())
    for (const auto& [db, mb] : b.coeffs()) {
      auto it = out.try_emplace(da + db, Mat<S>::zero(a.dim(), a.dim())).first;
      it->second += ma * mb;
    }
  return out;
}
template <class S>
bool all_zero(const std::map<int, Mat<S>>& m, double tol, int skip_identity_at = 1) {
  for (auto [d, c] : m) {
    if (d == 0 && skip_identity_at == 0) c -= Mat<S>::identity(c.rows());
    if (!loop_is_zero(LoopMat<S>::constant(c), tol)) return false;
  }
  return true;
}
}  // namespace detail

// A = I + K with K nilpotent of order 3 in the 2+4+2 grading: A⁻¹ = I - K + K²
template <class S>
LoopMat<S> inv_unipotent(const LoopMat<S>& a, double tol = 1e-12) {
  const int n = a.dim();
  LoopMat<S> k = a - LoopMat<S>::identity(n);
  if (!detail::loop_is_zero(LoopMat<S>::constant(k.coeff(0)), tol))
    throw Error(ErrorKind::NotUnipotent, "lambda^0 coefficient is not the identity");
  LoopMat<S> k2 = k * k;
  if (!detail::all_zero(detail::convolve(k2, k), tol))
    throw Error(ErrorKind::NotUnipotent, "Neumann series does not terminate");
  LoopMat<S> inv = LoopMat<S>::identity(n) - k + k2;
  if (!detail::all_zero(detail::convolve(a, inv), tol, 0)) throw Error(ErrorKind::NotUnipotent, "round trip failed");
  // drop exact-zero coefficients left by cancellation
  LoopMat<S> out(n);
  for (const auto& [d, m] : inv.coeffs())
    if (d == 0 || !detail::loop_is_zero(LoopMat<S>::constant(m), 0.0)) out.set(d, m);
  return out;
}

// ‖AᵗJ₈A - J₈‖_max
template <class C>
real_t<C> g8_residual(const Mat<C>& a) {
  const auto& k = G8Constants<C>::get();
  return max_abs(Mat<C>(a.transpose() * k.J8 * a - k.J8));
}

// max over coefficients of ‖A_d - (-1)^d D₀ A_d D₀‖
template <class C>
real_t<C> twist_residual(const LoopMat<C>& a) {
  const auto& k = G8Constants<C>::get();
  real_t<C> r(0);
  for (const auto& [d, m] : a.coeffs()) {
    Mat<C> t = k.D0 * m * k.D0;
    if (d % 2) t = -t;
    real_t<C> v = max_abs_diff(m, t);
    if (v > r) r = v;
  }
  return r;
}

template <class C>
real_t<C> loop_max_abs_diff(const LoopMat<C>& a, const LoopMat<C>& b) {
  real_t<C> r(0);
  LoopMat<C> d = a - b;
  for (const auto& [deg, m] : d.coeffs()) {
    real_t<C> v = max_abs(m);
    if (v > r) r = v;
  }
  return r;
}

// largest coefficient at negative λ-degree
template <class C>
real_t<C> negative_part(const LoopMat<C>& a) {
  real_t<C> r(0);
  for (const auto& [d, m] : a.coeffs()) {
    if (d >= 0) continue;
    real_t<C> v = max_abs(m);
    if (v > r) r = v;
  }
  return r;
}

}  // namespace isowill
