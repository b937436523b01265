// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

#include "bunching/matrix.hpp"

namespace bunching {

/// splitmix64 finalizer; maps (seed, index) to a well-mixed engine seed so that
/// Monte-Carlo substreams are independent of worker scheduling.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based substream: same (seed, index) always yields the same stream.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index = 0) {
  return std::mt19937_64(mix_seed(seed, index));
}

/// One complex sample with independent N(0, stddev^2) real and imaginary parts.
inline Complex complex_gaussian(std::mt19937_64& rng, double stddev = 1.0) {
  std::normal_distribution<double> dist(0.0, stddev);
  const double re = dist(rng);
  const double im = dist(rng);
  return Complex(re, im);
}

/// Uniform point on the complex unit sphere in dimension r.
inline ComplexVector random_unit_vector(std::mt19937_64& rng, Eigen::Index r) {
  ComplexVector v(r);
  for (Eigen::Index i = 0; i < r; ++i) v(i) = complex_gaussian(rng);
  const double norm = v.norm();
  if (norm == 0.0) {
    v.setZero();
    v(0) = Complex(1.0, 0.0);
    return v;
  }
  return v / norm;
}

}  // namespace bunching
