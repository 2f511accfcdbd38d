#pragma once

// Numeric scalar helpers. Numeric code is written against a complex scalar
// type C (std::complex<double>, std::complex<long double> or a boost
// multiprecision complex); the real type is deduced from real(C).

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>

#include <gmpxx.h>

namespace isowill {

using Q = mpq_class;

namespace detail {
using std::real;
template <class C>
using real_of = std::decay_t<decltype(real(std::declval<C>()))>;
}  // namespace detail

template <class C>
using real_t = detail::real_of<C>;

template <class R>
R from_q(const Q& q) {
  if constexpr (std::is_same_v<R, double>) {
    return q.get_d();
  } else if constexpr (std::is_same_v<R, long double>) {
    // two-term split keeps ~106 bits
    mpf_class x(q, 160);
    double hi = x.get_d();
    mpf_class rest(x - hi, 160);
    return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
  } else {
    return R(q.get_num().get_str()) / R(q.get_den().get_str());
  }
}

template <class C>
C make_c(const real_t<C>& re, const real_t<C>& im) {
  return C(re, im);
}

template <class C>
C imag_unit() {
  return make_c<C>(real_t<C>(0), real_t<C>(1));
}

template <class C>
real_t<C> re_part(const C& c) {
  using std::real;
  return real(c);
}

template <class C>
real_t<C> im_part(const C& c) {
  using std::imag;
  return imag(c);
}

template <class C>
real_t<C> cabs(const C& c) {
  using std::abs;
  return abs(c);
}

template <class C>
C cconj(const C& c) {
  using std::conj;
  return conj(c);
}

template <class C>
C csqrt(const C& c) {
  using std::sqrt;
  return sqrt(c);
}

template <class R>
R rsqrt(const R& x) {
  using std::sqrt;
  return sqrt(x);
}

template <class R>
double to_double(const R& x) {
  return static_cast<double>(x);
}

template <class C>
std::complex<double> to_cd(const C& c) {
  return {to_double(re_part(c)), to_double(im_part(c))};
}

template <class C>
C from_cd(const std::complex<double>& c) {
  return make_c<C>(real_t<C>(c.real()), real_t<C>(c.imag()));
}

template <class R>
R epsilon_of() {
  return std::numeric_limits<R>::epsilon();
}

}  // namespace isowill
