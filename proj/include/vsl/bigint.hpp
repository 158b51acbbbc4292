#pragma once

// Counting alias. Sub-space sizes reach 3^(n*k), far past 64 bits even at
// modest scale, so minterm counts ride on an arbitrary-precision integer.

#include <boost/multiprecision/cpp_int.hpp>

namespace vsl {

using big_uint = boost::multiprecision::cpp_int;

inline big_uint pow2(unsigned e) { return big_uint(1) << e; }

inline big_uint pow3(unsigned e) {
  big_uint r = 1;
  for (unsigned i = 0; i < e; ++i) r *= 3;
  return r;
}

}  // namespace vsl
