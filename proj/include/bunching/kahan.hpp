// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>

namespace bunching {

/// Compensated summation; keeps long alternating or Monte-Carlo sums stable
/// and bit-reproducible under a fixed accumulation order.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double value) {
    const double y = value - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

struct ComplexKahan {
  KahanSum re;
  KahanSum im;

  void add(const std::complex<double>& z) {
    re.add(z.real());
    im.add(z.imag());
  }
  std::complex<double> value() const { return {re.sum, im.sum}; }
};

}  // namespace bunching
