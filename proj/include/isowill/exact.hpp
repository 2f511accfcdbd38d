#pragma once

// Exact arithmetic: Gaussian rationals, univariate polynomials and rational
// functions in z, and bivariate polynomials in (z, zbar).

#include <algorithm>
#include <complex>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gmpxx.h>

#include "errors.hpp"
#include "scalar.hpp"

namespace isowill {

inline Q qfrac(long n, long d) {
  Q q(n, d);
  q.canonicalize();
  return q;
}

struct GQ {
  Q re, im;

  GQ() : re(0), im(0) {}
  GQ(int r) : re(r), im(0) {}
  GQ(const Q& r) : re(r), im(0) {}
  GQ(const Q& r, const Q& i) : re(r), im(i) {}
  GQ(int r, int i) : re(r), im(i) {}

  static GQ i() { return GQ(0, 1); }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }

  GQ& operator+=(const GQ& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GQ& operator-=(const GQ& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GQ& operator*=(const GQ& o) {
    Q r = re * o.re - im * o.im;
    Q m = re * o.im + im * o.re;
    re = r;
    im = m;
    return *this;
  }
  GQ& operator/=(const GQ& o) {
    Q n = o.re * o.re + o.im * o.im;
    if (sgn(n) == 0) throw Error(ErrorKind::DivideByZero, "Gaussian rational division by zero");
    Q r = (re * o.re + im * o.im) / n;
    Q m = (im * o.re - re * o.im) / n;
    re = r;
    im = m;
    return *this;
  }

  friend GQ operator+(GQ a, const GQ& b) { return a += b; }
  friend GQ operator-(GQ a, const GQ& b) { return a -= b; }
  friend GQ operator*(GQ a, const GQ& b) { return a *= b; }
  friend GQ operator/(GQ a, const GQ& b) { return a /= b; }
  friend GQ operator-(const GQ& a) { return GQ(Q(-a.re), Q(-a.im)); }
  friend bool operator==(const GQ& a, const GQ& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const GQ& a, const GQ& b) { return !(a == b); }

  template <class C>
  C value() const {
    using R = real_t<C>;
    return make_c<C>(from_q<R>(re), from_q<R>(im));
  }

  friend std::ostream& operator<<(std::ostream& os, const GQ& g) {
    return os << "(" << g.re.get_str() << "," << g.im.get_str() << ")";
  }
};

inline GQ conj(const GQ& g) { return GQ(g.re, Q(-g.im)); }

// ---------------------------------------------------------------------------
// univariate polynomials, ascending coefficients

class Poly1 {
 public:
  Poly1() = default;
  Poly1(const GQ& a) {
    if (!a.is_zero()) c_.push_back(a);
  }
  Poly1(int a) : Poly1(GQ(a)) {}
  explicit Poly1(std::vector<GQ> c) : c_(std::move(c)) { trim(); }

  static Poly1 monomial(const GQ& a, int k) {
    std::vector<GQ> c(static_cast<size_t>(k) + 1);
    c[static_cast<size_t>(k)] = a;
    return Poly1(std::move(c));
  }
  static Poly1 z() { return monomial(GQ(1), 1); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<GQ>& coeffs() const { return c_; }
  GQ operator[](int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size())) return GQ();
    return c_[static_cast<size_t>(k)];
  }
  GQ lead() const { return c_.empty() ? GQ() : c_.back(); }

  Poly1& operator+=(const Poly1& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  Poly1& operator-=(const Poly1& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  friend Poly1 operator+(Poly1 a, const Poly1& b) { return a += b; }
  friend Poly1 operator-(Poly1 a, const Poly1& b) { return a -= b; }
  friend Poly1 operator-(const Poly1& a) { return Poly1() - a; }
  friend Poly1 operator*(const Poly1& a, const Poly1& b) {
    if (a.is_zero() || b.is_zero()) return Poly1();
    std::vector<GQ> c(a.c_.size() + b.c_.size() - 1);
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Poly1(std::move(c));
  }
  friend bool operator==(const Poly1& a, const Poly1& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly1& a, const Poly1& b) { return !(a == b); }

  Poly1 derivative() const {
    if (c_.size() <= 1) return Poly1();
    std::vector<GQ> d(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * GQ(static_cast<int>(k));
    return Poly1(std::move(d));
  }

  Poly1 monic() const {
    if (is_zero()) return *this;
    GQ l = lead();
    std::vector<GQ> c = c_;
    for (auto& x : c) x /= l;
    return Poly1(std::move(c));
  }

  // a = q*b + r
  static void divmod(const Poly1& a, const Poly1& b, Poly1& q, Poly1& r) {
    if (b.is_zero()) throw Error(ErrorKind::DivideByZero, "polynomial division by zero");
    r = a;
    std::vector<GQ> qc(a.degree() >= b.degree() ? static_cast<size_t>(a.degree() - b.degree() + 1) : 0);
    GQ bl = b.lead();
    while (!r.is_zero() && r.degree() >= b.degree()) {
      int s = r.degree() - b.degree();
      GQ t = r.lead() / bl;
      qc[static_cast<size_t>(s)] += t;
      r -= monomial(t, s) * b;
    }
    q = Poly1(std::move(qc));
  }

  GQ eval(const GQ& z) const {
    GQ acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  template <class C>
  C eval_num(const C& z) const {
    C acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + it->template value<C>();
    return acc;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<GQ> c_;
};

inline Poly1 poly_gcd(Poly1 a, Poly1 b) {
  while (!b.is_zero()) {
    Poly1 q, r;
    Poly1::divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

inline Poly1 exact_div(const Poly1& a, const Poly1& b) {
  Poly1 q, r;
  Poly1::divmod(a, b, q, r);
  if (!r.is_zero()) throw Error(ErrorKind::DivideByZero, "inexact polynomial division");
  return q;
}

// numeric roots through the companion matrix
inline std::vector<std::complex<double>> poly_roots(const Poly1& p) {
  std::vector<std::complex<double>> out;
  int n = p.degree();
  if (n < 1) return out;
  std::vector<std::complex<double>> c(static_cast<size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) c[static_cast<size_t>(k)] = p[k].value<std::complex<double>>();
  if (n == 1) {
    out.push_back(-c[0] / c[1]);
    return out;
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) m(i, n - 1) = -c[static_cast<size_t>(i)] / c[static_cast<size_t>(n)];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()(i));
  std::sort(out.begin(), out.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

// ---------------------------------------------------------------------------
// exact linear solve over Gaussian rationals; free unknowns set to zero

inline std::optional<std::vector<GQ>> solve_linear(std::vector<std::vector<GQ>> a, std::vector<GQ> b) {
  const size_t m = a.size();
  const size_t n = m ? a[0].size() : 0;
  std::vector<int> pivot_col;
  size_t row = 0;
  for (size_t col = 0; col < n && row < m; ++col) {
    size_t p = row;
    while (p < m && a[p][col].is_zero()) ++p;
    if (p == m) continue;
    std::swap(a[p], a[row]);
    std::swap(b[p], b[row]);
    GQ inv = GQ(1) / a[row][col];
    for (size_t k = col; k < n; ++k) a[row][k] *= inv;
    b[row] *= inv;
    for (size_t r = 0; r < m; ++r) {
      if (r == row || a[r][col].is_zero()) continue;
      GQ f = a[r][col];
      for (size_t k = col; k < n; ++k) a[r][k] -= f * a[row][k];
      b[r] -= f * b[row];
    }
    pivot_col.push_back(static_cast<int>(col));
    ++row;
  }
  for (size_t r = row; r < m; ++r)
    if (!b[r].is_zero()) return std::nullopt;
  std::vector<GQ> x(n);
  for (size_t r = 0; r < pivot_col.size(); ++r) x[static_cast<size_t>(pivot_col[r])] = b[r];
  return x;
}

// ---------------------------------------------------------------------------
// rational functions of z, kept reduced with monic denominator

class Rational1 {
 public:
  Rational1() : den_(GQ(1)) {}
  Rational1(int v) : num_(GQ(v)), den_(GQ(1)) {}
  Rational1(const GQ& v) : num_(v), den_(GQ(1)) {}
  Rational1(Poly1 n) : num_(std::move(n)), den_(GQ(1)) {}
  Rational1(Poly1 n, Poly1 d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

  const Poly1& num() const { return num_; }
  const Poly1& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }

  friend Rational1 operator+(const Rational1& a, const Rational1& b) {
    if (a.den_ == b.den_) return Rational1(a.num_ + b.num_, a.den_);
    return Rational1(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational1 operator-(const Rational1& a, const Rational1& b) {
    if (a.den_ == b.den_) return Rational1(a.num_ - b.num_, a.den_);
    return Rational1(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational1 operator-(const Rational1& a) { return Rational1(-a.num_, a.den_); }
  friend Rational1 operator*(const Rational1& a, const Rational1& b) {
    return Rational1(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rational1 operator/(const Rational1& a, const Rational1& b) {
    if (b.is_zero()) throw Error(ErrorKind::DivideByZero, "rational function division by zero");
    return Rational1(a.num_ * b.den_, a.den_ * b.num_);
  }
  Rational1& operator+=(const Rational1& o) { return *this = *this + o; }
  Rational1& operator-=(const Rational1& o) { return *this = *this - o; }
  Rational1& operator*=(const Rational1& o) { return *this = *this * o; }
  friend bool operator==(const Rational1& a, const Rational1& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational1& a, const Rational1& b) { return !(a == b); }

  Rational1 derivative() const {
    return Rational1(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
  }

  GQ eval(const GQ& z) const {
    GQ d = den_.eval(z);
    if (d.is_zero()) throw Error(ErrorKind::PoleOfPotential, "evaluation at a pole");
    return num_.eval(z) / d;
  }

  template <class C>
  C eval_num(const C& z) const {
    return num_.eval_num(z) / den_.eval_num(z);
  }

  std::vector<std::complex<double>> poles() const { return poly_roots(den_); }

 private:
  void normalize() {
    if (den_.is_zero()) throw Error(ErrorKind::DivideByZero, "zero denominator");
    if (num_.is_zero()) {
      den_ = Poly1(GQ(1));
      return;
    }
    Poly1 g = poly_gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = exact_div(num_, g);
      den_ = exact_div(den_, g);
    }
    GQ l = den_.lead();
    if (l != GQ(1)) {
      GQ inv = GQ(1) / l;
      num_ = num_ * Poly1(inv);
      den_ = den_ * Poly1(inv);
    }
  }

  Poly1 num_, den_;
};

// Antiderivative vanishing at base; throws NonintegrableResidue when the
// integral needs logarithms.
inline Rational1 integrate(const Rational1& r, const GQ& base = GQ()) {
  if (r.is_zero()) return Rational1();
  const Poly1& a = r.num();
  const Poly1& d = r.den();
  Poly1 q = d.degree() > 0 ? poly_gcd(d, d.derivative()) : Poly1(GQ(1));
  Poly1 s = exact_div(d, q);
  const int np = std::max(a.degree() - d.degree() + q.degree() + 1, q.degree());
  Poly1 rhs = a * q;
  std::vector<Poly1> cols;
  int rows = rhs.degree() + 1;
  for (int k = 0; k <= np; ++k) {
    Poly1 zk = Poly1::monomial(GQ(1), k);
    Poly1 lk = (zk.derivative() * q - zk * q.derivative()) * s;
    rows = std::max(rows, lk.degree() + 1);
    cols.push_back(std::move(lk));
  }
  std::vector<std::vector<GQ>> m(static_cast<size_t>(rows), std::vector<GQ>(static_cast<size_t>(np) + 1));
  std::vector<GQ> b(static_cast<size_t>(rows));
  for (int i = 0; i < rows; ++i) {
    for (int k = 0; k <= np; ++k) m[static_cast<size_t>(i)][static_cast<size_t>(k)] = cols[static_cast<size_t>(k)][i];
    b[static_cast<size_t>(i)] = rhs[i];
  }
  auto sol = solve_linear(std::move(m), std::move(b));
  if (!sol) throw Error(ErrorKind::NonintegrableResidue, "antiderivative is not rational");
  Rational1 prim(Poly1(*sol), q);
  if (prim.den().eval(base).is_zero())
    throw Error(ErrorKind::PoleOfPotential, "base point is a pole of the antiderivative");
  return prim - Rational1(prim.eval(base));
}

// ---------------------------------------------------------------------------
// bivariate polynomials sum c_ab z^a zbar^b

class BiPoly {
 public:
  using Key = std::pair<int, int>;

  BiPoly() = default;
  BiPoly(int v) : BiPoly(GQ(v)) {}
  BiPoly(const GQ& v) {
    if (!v.is_zero()) t_[{0, 0}] = v;
  }

  static BiPoly term(const GQ& c, int a, int b) {
    BiPoly p;
    if (!c.is_zero()) p.t_[{a, b}] = c;
    return p;
  }
  static BiPoly z() { return term(GQ(1), 1, 0); }
  static BiPoly zbar() { return term(GQ(1), 0, 1); }
  static BiPoly from_z(const Poly1& p) {
    BiPoly out;
    for (int k = 0; k <= p.degree(); ++k)
      if (!p[k].is_zero()) out.t_[{k, 0}] = p[k];
    return out;
  }

  const std::map<Key, GQ>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  size_t size() const { return t_.size(); }

  BiPoly& operator+=(const BiPoly& o) {
    for (const auto& [k, v] : o.t_) add_term(k, v);
    return *this;
  }
  BiPoly& operator-=(const BiPoly& o) {
    for (const auto& [k, v] : o.t_) add_term(k, -v);
    return *this;
  }
  friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
  friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
  friend BiPoly operator-(const BiPoly& a) { return BiPoly() - a; }
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
    BiPoly out;
    for (const auto& [ka, va] : a.t_)
      for (const auto& [kb, vb] : b.t_) out.add_term({ka.first + kb.first, ka.second + kb.second}, va * vb);
    return out;
  }
  BiPoly& operator*=(const BiPoly& o) { return *this = *this * o; }
  friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.t_ == b.t_; }
  friend bool operator!=(const BiPoly& a, const BiPoly& b) { return !(a == b); }

  friend BiPoly conj(const BiPoly& p) {
    BiPoly out;
    for (const auto& [k, v] : p.t_) out.t_[{k.second, k.first}] = conj(v);
    return out;
  }

  GQ eval(const GQ& zv) const {
    GQ zb = conj(zv), acc;
    for (const auto& [k, v] : t_) {
      GQ m = v;
      for (int i = 0; i < k.first; ++i) m *= zv;
      for (int i = 0; i < k.second; ++i) m *= zb;
      acc += m;
    }
    return acc;
  }

  int max_z_degree() const {
    int m = 0;
    for (const auto& kv : t_) m = std::max(m, kv.first.first);
    return m;
  }
  int max_zbar_degree() const {
    int m = 0;
    for (const auto& kv : t_) m = std::max(m, kv.first.second);
    return m;
  }

 private:
  void add_term(const Key& k, const GQ& v) {
    if (v.is_zero()) return;
    auto it = t_.find(k);
    if (it == t_.end()) {
      t_.emplace(k, v);
      return;
    }
    it->second += v;
    if (it->second.is_zero()) t_.erase(it);
  }

  std::map<Key, GQ> t_;
};

// numeric evaluator with coefficients converted once
template <class C>
class BiPolyEval {
 public:
  BiPolyEval() = default;
  explicit BiPolyEval(const BiPoly& p) : ma_(p.max_z_degree()), mb_(p.max_zbar_degree()) {
    for (const auto& [k, v] : p.terms()) terms_.push_back({k.first, k.second, v.template value<C>()});
  }

  C operator()(const std::vector<C>& zp, const std::vector<C>& zbp) const {
    C acc(0);
    for (const auto& t : terms_) acc += t.c * zp[static_cast<size_t>(t.a)] * zbp[static_cast<size_t>(t.b)];
    return acc;
  }
  int max_a() const { return ma_; }
  int max_b() const { return mb_; }

 private:
  struct Term {
    int a, b;
    C c;
  };
  std::vector<Term> terms_;
  int ma_ = 0, mb_ = 0;
};

template <class C>
std::vector<C> powers(const C& x, int n) {
  std::vector<C> p(static_cast<size_t>(n) + 1, C(1));
  for (int k = 1; k <= n; ++k) p[static_cast<size_t>(k)] = p[static_cast<size_t>(k - 1)] * x;
  return p;
}

}  // namespace isowill
