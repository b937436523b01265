// SPDX-License-Identifier: Apache-2.0
#include "bunching/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bunching {

ComplexMatrix all_ones(Eigen::Index n) {
  return ComplexMatrix::Constant(n, n, Complex(1.0, 0.0));
}

bool is_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const Complex& z = m(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  }
  return true;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  ComplexMatrix gram = m.adjoint() * m;
  gram -= ComplexMatrix::Identity(m.rows(), m.cols());
  return gram.norm() <= tol;
}

double min_eigenvalue_hermitian(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square, got " +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch");
  }
}

}  // namespace bunching
