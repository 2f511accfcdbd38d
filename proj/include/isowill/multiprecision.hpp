#pragma once

// 100-digit complex scalar for evaluations far out in the plane.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

namespace isowill {

namespace bmp = boost::multiprecision;

using mp_real = bmp::number<bmp::cpp_bin_float<100>, bmp::et_off>;
using mp_complex = bmp::number<bmp::complex_adaptor<bmp::cpp_bin_float<100>>, bmp::et_off>;

}  // namespace isowill
