#pragma once

// Small dense row-major matrix over any ring-like scalar: Gaussian rationals,
// bivariate polynomials, rational functions, or complex floating types.

#include <cassert>
#include <complex>
#include <initializer_list>
#include <type_traits>
#include <vector>

#include "errors.hpp"
#include "exact.hpp"
#include "scalar.hpp"

namespace isowill {

// scalar from a Gaussian rational, for every supported scalar type
template <class S>
S lift_gauss(const GQ& g) {
  if constexpr (std::is_constructible_v<S, GQ>) {
    return S(g);
  } else {
    return g.template value<S>();
  }
}

template <class S>
S gauss(int re, int im = 0) {
  return lift_gauss<S>(GQ(re, im));
}

template <class S>
class Mat {
 public:
  using Scalar = S;

  Mat() = default;
  Mat(int r, int c) : r_(r), c_(c), v_(static_cast<size_t>(r) * static_cast<size_t>(c), S(0)) {}

  static Mat zero(int r, int c) { return Mat(r, c); }
  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }
  // integer Gaussian pattern, rows of (re, im) pairs flattened
  static Mat from_ints(int r, int c, std::initializer_list<int> re, std::initializer_list<int> im = {}) {
    Mat m(r, c);
    auto it = re.begin();
    auto jt = im.begin();
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) {
        int a = *it++;
        int b = im.size() ? *jt++ : 0;
        if (a || b) m(i, j) = gauss<S>(a, b);
      }
    return m;
  }

  int rows() const { return r_; }
  int cols() const { return c_; }

  S& operator()(int i, int j) { return v_[idx(i, j)]; }
  const S& operator()(int i, int j) const { return v_[idx(i, j)]; }

  Mat block(int i, int j, int p, int q) const {
    Mat b(p, q);
    for (int a = 0; a < p; ++a)
      for (int c = 0; c < q; ++c) b(a, c) = (*this)(i + a, j + c);
    return b;
  }
  void set_block(int i, int j, const Mat& b) {
    for (int a = 0; a < b.rows(); ++a)
      for (int c = 0; c < b.cols(); ++c) (*this)(i + a, j + c) = b(a, c);
  }
  Mat col(int j) const { return block(0, j, r_, 1); }

  Mat transpose() const {
    Mat t(c_, r_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }
  Mat conjugate() const {
    using std::conj;
    Mat t(r_, c_);
    for (size_t k = 0; k < v_.size(); ++k) t.v_[k] = conj(v_[k]);
    return t;
  }
  Mat adjoint() const { return conjugate().transpose(); }

  Mat& operator+=(const Mat& o) {
    check_same(o);
    for (size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    check_same(o);
    for (size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
    return *this;
  }
  Mat& operator*=(const S& s) {
    for (auto& x : v_) x *= s;
    return *this;
  }

  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator-(const Mat& a) {
    Mat m(a.r_, a.c_);
    for (size_t k = 0; k < a.v_.size(); ++k) m.v_[k] = -a.v_[k];
    return m;
  }
  friend Mat operator*(Mat a, const S& s) { return a *= s; }
  friend Mat operator*(const S& s, Mat a) {
    for (auto& x : a.v_) x = s * x;
    return a;
  }
  friend Mat operator*(const Mat& a, const Mat& b) {
    if (a.c_ != b.r_) throw Error(ErrorKind::PatternViolation, "matrix product shape mismatch");
    Mat m(a.r_, b.c_);
    for (int i = 0; i < a.r_; ++i)
      for (int k = 0; k < a.c_; ++k) {
        const S& x = a(i, k);
        if (is_zero_scalar(x)) continue;
        for (int j = 0; j < b.c_; ++j) m(i, j) += x * b(k, j);
      }
    return m;
  }
  friend bool operator==(const Mat& a, const Mat& b) {
    return a.r_ == b.r_ && a.c_ == b.c_ && a.v_ == b.v_;
  }
  friend bool operator!=(const Mat& a, const Mat& b) { return !(a == b); }

  const std::vector<S>& data() const { return v_; }

 private:
  static bool is_zero_scalar(const S& x) {
    if constexpr (requires { x.is_zero(); }) {
      return x.is_zero();
    } else {
      return x == S(0);
    }
  }
  size_t idx(int i, int j) const {
    assert(i >= 0 && i < r_ && j >= 0 && j < c_);
    return static_cast<size_t>(i) * static_cast<size_t>(c_) + static_cast<size_t>(j);
  }
  void check_same(const Mat& o) const {
    if (o.r_ != r_ || o.c_ != c_) throw Error(ErrorKind::PatternViolation, "matrix shape mismatch");
  }

  int r_ = 0, c_ = 0;
  std::vector<S> v_;
};

template <class S>
bool is_zero(const Mat<S>& m) {
  for (const auto& x : m.data())
    if (!x.is_zero()) return false;
  return true;
}

// numeric helpers -----------------------------------------------------------

template <class C>
real_t<C> max_abs(const Mat<C>& m) {
  real_t<C> r(0);
  for (const auto& x : m.data()) {
    real_t<C> a = cabs(x);
    if (a > r) r = a;
  }
  return r;
}

template <class C>
real_t<C> max_abs_diff(const Mat<C>& a, const Mat<C>& b) {
  return max_abs(Mat<C>(a - b));
}

template <class C>
real_t<C> frob(const Mat<C>& m) {
  real_t<C> s(0);
  for (const auto& x : m.data()) {
    real_t<C> a = cabs(x);
    s += a * a;
  }
  return rsqrt(s);
}

template <class C>
C det2(const Mat<C>& m) {
  return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

template <class S>
Mat<S> adj2(const Mat<S>& m) {
  Mat<S> a(2, 2);
  a(0, 0) = m(1, 1);
  a(1, 1) = m(0, 0);
  a(0, 1) = -m(0, 1);
  a(1, 0) = -m(1, 0);
  return a;
}

template <class C>
Mat<C> inverse2(const Mat<C>& m) {
  C d = det2(m);
  if (cabs(d) == real_t<C>(0)) throw Error(ErrorKind::DivideByZero, "singular 2x2 matrix");
  return adj2(m) * (C(1) / d);
}

template <class C>
Mat<C> upper_triangular_inverse(const Mat<C>& u) {
  const int n = u.rows();
  Mat<C> x(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = j; i >= 0; --i) {
      C s = i == j ? C(1) : C(0);
      for (int k = i + 1; k <= j; ++k) s -= u(i, k) * x(k, j);
      if (cabs(u(i, i)) == real_t<C>(0)) throw Error(ErrorKind::DivideByZero, "singular triangular matrix");
      x(i, j) = s / u(i, i);
    }
  }
  return x;
}

// Gauss-Jordan with partial pivoting
template <class C>
Mat<C> inverse(const Mat<C>& m) {
  const int n = m.rows();
  Mat<C> a = m, x = Mat<C>::identity(n);
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (cabs(a(r, c)) > cabs(a(p, c))) p = r;
    if (cabs(a(p, c)) == real_t<C>(0)) throw Error(ErrorKind::DivideByZero, "singular matrix");
    if (p != c)
      for (int k = 0; k < n; ++k) {
        std::swap(a(p, k), a(c, k));
        std::swap(x(p, k), x(c, k));
      }
    C inv = C(1) / a(c, c);
    for (int k = 0; k < n; ++k) {
      a(c, k) *= inv;
      x(c, k) *= inv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      C f = a(r, c);
      if (cabs(f) == real_t<C>(0)) continue;
      for (int k = 0; k < n; ++k) {
        a(r, k) -= f * a(c, k);
        x(r, k) -= f * x(c, k);
      }
    }
  }
  return x;
}

// exact Gaussian-rational matrix to numeric
template <class C>
Mat<C> to_numeric(const Mat<GQ>& m) {
  Mat<C> out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).template value<C>();
  return out;
}

template <class C>
Mat<std::complex<double>> to_cd(const Mat<C>& m) {
  Mat<std::complex<double>> out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = to_cd(m(i, j));
  return out;
}

template <class C>
Mat<C> from_cd(const Mat<std::complex<double>>& m) {
  Mat<C> out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = from_cd<C>(m(i, j));
  return out;
}

}  // namespace isowill
