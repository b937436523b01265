// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "bunching/matrix.hpp"

namespace bunching {

/// Permanent via Ryser's inclusion-exclusion formula with Gray-code updates,
/// O(2^n n). The outer sum is accumulated blockwise with compensated summation;
/// the block layout is fixed by n alone, so the result does not depend on the
/// number of worker threads. perm of the 0x0 matrix is 1.
Complex permanent_ryser(const ComplexMatrix& m, int threads = 0);

/// Reference oracle: sum over all n! permutations, O(n! n). Limited to n <= 10.
Complex permanent_naive(const ComplexMatrix& m);

/// Second production kernel (Glynn's formula, Gray-coded), used to cross-check
/// Ryser on the same input.
Complex permanent_glynn(const ComplexMatrix& m);

/// Determinant via pivoted elimination.
Complex determinant(const ComplexMatrix& m);

/// (n-1)x(n-1) matrix with drop_row and drop_col removed.
ComplexMatrix minor_matrix(const ComplexMatrix& m, Eigen::Index drop_row, Eigen::Index drop_col);

/// Entrywise product.
ComplexMatrix hadamard_product(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace bunching
