#pragma once

// Fractions N / D^k with N a bivariate polynomial and D one fixed real
// polynomial (det d). Sums align powers of D so no polynomial gcd is needed;
// a value is zero exactly when its numerator is.

#include <memory>
#include <vector>

#include "exact.hpp"

namespace isowill {

class DContext {
 public:
  explicit DContext(BiPoly d) { pow_.push_back(BiPoly(1)), pow_.push_back(std::move(d)); }
  const BiPoly& D() const { return pow_[1]; }
  const BiPoly& power(int k) const {
    while (static_cast<int>(pow_.size()) <= k) pow_.push_back(pow_.back() * pow_[1]);
    return pow_[static_cast<size_t>(k)];
  }

 private:
  mutable std::vector<BiPoly> pow_;
};

class DFrac {
 public:
  DFrac() = default;
  DFrac(int v) : num_(v) {}
  DFrac(const GQ& v) : num_(v) {}
  DFrac(BiPoly n, int k = 0, std::shared_ptr<const DContext> ctx = nullptr)
      : num_(std::move(n)), k_(k), ctx_(std::move(ctx)) {}

  const BiPoly& num() const { return num_; }
  int power() const { return k_; }
  const std::shared_ptr<const DContext>& context() const { return ctx_; }
  bool is_zero() const { return num_.is_zero(); }

  // numerator over D^k for a chosen k >= power()
  BiPoly num_at(int k) const {
    if (k == k_ || num_.is_zero()) return num_;
    if (!ctx_) throw Error(ErrorKind::DivideByZero, "power alignment without a context");
    return num_ * ctx_->power(k - k_);
  }

  friend DFrac operator+(const DFrac& a, const DFrac& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    auto ctx = a.ctx_ ? a.ctx_ : b.ctx_;
    DFrac x = a, y = b;
    x.ctx_ = y.ctx_ = ctx;
    int k = std::max(a.k_, b.k_);
    return DFrac(x.num_at(k) + y.num_at(k), k, ctx);
  }
  friend DFrac operator-(const DFrac& a) { return DFrac(-a.num_, a.k_, a.ctx_); }
  friend DFrac operator-(const DFrac& a, const DFrac& b) { return a + (-b); }
  friend DFrac operator*(const DFrac& a, const DFrac& b) {
    if (a.is_zero() || b.is_zero()) return DFrac();
    return DFrac(a.num_ * b.num_, a.k_ + b.k_, a.ctx_ ? a.ctx_ : b.ctx_);
  }
  DFrac& operator+=(const DFrac& o) { return *this = *this + o; }
  DFrac& operator-=(const DFrac& o) { return *this = *this - o; }
  DFrac& operator*=(const DFrac& o) { return *this = *this * o; }
  friend bool operator==(const DFrac& a, const DFrac& b) { return (a - b).is_zero(); }
  friend bool operator!=(const DFrac& a, const DFrac& b) { return !(a == b); }

  // D is real, so only the numerator conjugates
  friend DFrac conj(const DFrac& a) { return DFrac(conj(a.num_), a.k_, a.ctx_); }

 private:
  BiPoly num_;
  int k_ = 0;
  std::shared_ptr<const DContext> ctx_;
};

// x / D^n
inline DFrac over_d(const DFrac& x, int n, std::shared_ptr<const DContext> ctx) {
  return DFrac(x.num(), x.power() + n, x.context() ? x.context() : std::move(ctx));
}

// numeric evaluator for N / D^k
template <class C>
class DFracEval {
 public:
  DFracEval() = default;
  explicit DFracEval(const DFrac& x) : num_(x.num()), k_(x.power()), zero_(x.is_zero()) {}
  C operator()(const std::vector<C>& zp, const std::vector<C>& zbp, const std::vector<C>& inv_dpow) const {
    if (zero_) return C(0);
    return num_(zp, zbp) * inv_dpow[static_cast<size_t>(k_)];
  }
  int power() const { return k_; }
  int max_a() const { return num_.max_a(); }
  int max_b() const { return num_.max_b(); }

 private:
  BiPolyEval<C> num_;
  int k_ = 0;
  bool zero_ = true;
};

}  // namespace isowill
