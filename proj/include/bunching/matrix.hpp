// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>

namespace bunching {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// All-ones matrix, the Gram matrix of fully indistinguishable photons.
ComplexMatrix all_ones(Eigen::Index n);

bool is_finite(const ComplexMatrix& m);

/// Max-entry deviation from Hermiticity is at most `tol`.
bool is_hermitian(const ComplexMatrix& m, double tol = 1e-10);

/// Frobenius norm of U†U - 1 is at most `tol`.
bool is_unitary(const ComplexMatrix& m, double tol = 1e-9);

/// Smallest eigenvalue of a (numerically) Hermitian matrix.
double min_eigenvalue_hermitian(const ComplexMatrix& m);

void require_square(const ComplexMatrix& m, const char* what);
void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what);

}  // namespace bunching
