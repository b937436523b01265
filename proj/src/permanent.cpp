// SPDX-License-Identifier: Apache-2.0
#include "bunching/permanent.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "bunching/kahan.hpp"
#include "bunching/parallel.hpp"

namespace bunching {

namespace {

// The alternating signs in Ryser's sum cancel heavily for larger n; every
// accumulation below is compensated.
constexpr int kMaxRyserDim = 34;
constexpr std::uint64_t kRyserBlock = std::uint64_t(1) << 16;
constexpr int kRyserParallelMinDim = 22;

// Sum of Ryser terms for subsets k in [k_begin, k_end) of the n columns,
// enumerated in Gray-code order. Terms carry sign (-1)^(n - |subset|).
Complex ryser_block(const ComplexMatrix& m, std::uint64_t k_begin, std::uint64_t k_end) {
  const int n = static_cast<int>(m.rows());
  std::uint64_t gray = k_begin ^ (k_begin >> 1);

  std::vector<Complex> rowsum(static_cast<std::size_t>(n), Complex(0.0, 0.0));
  for (int j = 0; j < n; ++j) {
    if (gray & (std::uint64_t(1) << j)) {
      for (int i = 0; i < n; ++i) rowsum[static_cast<std::size_t>(i)] += m(i, j);
    }
  }

  ComplexKahan acc;
  for (std::uint64_t k = k_begin; k < k_end; ++k) {
    if (k != k_begin) {
      const int j = std::countr_zero(k);
      const std::uint64_t bit = std::uint64_t(1) << j;
      gray ^= bit;
      if (gray & bit) {
        for (int i = 0; i < n; ++i) rowsum[static_cast<std::size_t>(i)] += m(i, j);
      } else {
        for (int i = 0; i < n; ++i) rowsum[static_cast<std::size_t>(i)] -= m(i, j);
      }
    }
    if (gray == 0) continue;  // empty subset contributes nothing for n >= 1

    Complex prod(1.0, 0.0);
    for (int i = 0; i < n; ++i) prod *= rowsum[static_cast<std::size_t>(i)];
    const int parity = (n - std::popcount(gray)) & 1;
    acc.add(parity ? -prod : prod);
  }
  return acc.value();
}

}  // namespace

Complex permanent_ryser(const ComplexMatrix& m, int threads) {
  require_square(m, "permanent_ryser");
  const int n = static_cast<int>(m.rows());
  if (n == 0) return Complex(1.0, 0.0);
  if (n > kMaxRyserDim) {
    throw std::invalid_argument("permanent_ryser: dimension " + std::to_string(n) +
                                " exceeds the 2^n cost cap");
  }

  const std::uint64_t total = std::uint64_t(1) << n;
  const std::uint64_t blocks = (total + kRyserBlock - 1) / kRyserBlock;
  std::vector<Complex> partial(static_cast<std::size_t>(blocks));

  auto run_block = [&](std::size_t b) {
    const std::uint64_t begin = static_cast<std::uint64_t>(b) * kRyserBlock;
    const std::uint64_t end = std::min<std::uint64_t>(begin + kRyserBlock, total);
    partial[b] = ryser_block(m, begin, end);
  };

  if (blocks > 1 && n >= kRyserParallelMinDim && resolve_threads(threads) > 1) {
    parallel_for_index(static_cast<std::size_t>(blocks), run_block, threads);
  } else {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  }

  // Fixed combine order keeps the value independent of the worker count.
  ComplexKahan acc;
  for (const Complex& p : partial) acc.add(p);
  return acc.value();
}

Complex permanent_naive(const ComplexMatrix& m) {
  require_square(m, "permanent_naive");
  const int n = static_cast<int>(m.rows());
  if (n == 0) return Complex(1.0, 0.0);
  if (n > 10) {
    throw std::invalid_argument("permanent_naive: dimension " + std::to_string(n) +
                                " exceeds the n! reference-path limit of 10");
  }

  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  ComplexKahan acc;
  do {
    Complex prod(1.0, 0.0);
    for (int i = 0; i < n; ++i) prod *= m(i, perm[static_cast<std::size_t>(i)]);
    acc.add(prod);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc.value();
}

Complex permanent_glynn(const ComplexMatrix& m) {
  require_square(m, "permanent_glynn");
  const int n = static_cast<int>(m.rows());
  if (n == 0) return Complex(1.0, 0.0);
  if (n > kMaxRyserDim) {
    throw std::invalid_argument("permanent_glynn: dimension too large");
  }

  // Sign vectors delta in {+1,-1}^n with delta_0 = +1, Gray-coded over the
  // remaining n-1 positions; perm = 2^(1-n) * sum_delta (prod delta) prod_j (delta . col_j).
  std::vector<Complex> colsum(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) colsum[static_cast<std::size_t>(j)] = m.col(j).sum();

  ComplexKahan acc;
  int sign = 1;
  const std::uint64_t total = std::uint64_t(1) << (n - 1);
  std::uint64_t gray = 0;
  for (std::uint64_t k = 0; k < total; ++k) {
    if (k != 0) {
      const int bit = std::countr_zero(k);
      const std::uint64_t mask = std::uint64_t(1) << bit;
      gray ^= mask;
      const int row = bit + 1;  // delta_0 stays +1
      const double step = (gray & mask) ? -2.0 : 2.0;
      for (int j = 0; j < n; ++j) colsum[static_cast<std::size_t>(j)] += step * m(row, j);
      sign = -sign;
    }
    Complex prod(1.0, 0.0);
    for (int j = 0; j < n; ++j) prod *= colsum[static_cast<std::size_t>(j)];
    acc.add(sign > 0 ? prod : -prod);
  }
  return acc.value() / std::pow(2.0, n - 1);
}

Complex determinant(const ComplexMatrix& m) {
  require_square(m, "determinant");
  if (m.rows() == 0) return Complex(1.0, 0.0);
  return Eigen::PartialPivLU<ComplexMatrix>(m).determinant();
}

ComplexMatrix minor_matrix(const ComplexMatrix& m, Eigen::Index drop_row, Eigen::Index drop_col) {
  require_square(m, "minor_matrix");
  const Eigen::Index n = m.rows();
  if (drop_row < 0 || drop_row >= n || drop_col < 0 || drop_col >= n) {
    throw std::out_of_range("minor_matrix: index out of range");
  }
  ComplexMatrix out(n - 1, n - 1);
  for (Eigen::Index i = 0, oi = 0; i < n; ++i) {
    if (i == drop_row) continue;
    for (Eigen::Index j = 0, oj = 0; j < n; ++j) {
      if (j == drop_col) continue;
      out(oi, oj) = m(i, j);
      ++oj;
    }
    ++oi;
  }
  return out;
}

ComplexMatrix hadamard_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "hadamard_product");
  return a.cwiseProduct(b);
}

}  // namespace bunching
