// SPDX-License-Identifier: Apache-2.0
#include "bunching/distinguishability.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "bunching/permanent.hpp"
#include "bunching/rng.hpp"

namespace bunching {

void validate_states(const InternalStateSet& states) {
  if (states.count() < 1 || states.dim() < 1) {
    throw std::invalid_argument("InternalStateSet: need n >= 1 and r >= 1");
  }
  if (!is_finite(states.vectors)) {
    throw std::invalid_argument("InternalStateSet: non-finite entries");
  }
  for (int j = 0; j < states.count(); ++j) {
    const double norm = states.vectors.col(j).norm();
    if (std::abs(norm - 1.0) > kStateNormTol) {
      throw std::invalid_argument("InternalStateSet: state " + std::to_string(j) +
                                  " is not unit-norm (norm = " + std::to_string(norm) + ")");
    }
  }
}

void validate_gram(const GramMatrix& gram) {
  const ComplexMatrix& s = gram.matrix;
  require_square(s, "GramMatrix");
  if (s.rows() < 1) throw std::invalid_argument("GramMatrix: empty matrix");
  if (!is_finite(s)) throw std::invalid_argument("GramMatrix: non-finite entries");
  if (!is_hermitian(s, kGramHermitianTol)) {
    throw std::invalid_argument("GramMatrix: not Hermitian within tolerance");
  }
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    if (std::abs(s(i, i) - Complex(1.0, 0.0)) > kGramDiagonalTol) {
      throw std::invalid_argument("GramMatrix: diagonal entry " + std::to_string(i) +
                                  " is not 1");
    }
  }
  const double min_eig = min_eigenvalue_hermitian(s);
  if (min_eig < -kGramPsdTol) {
    throw std::invalid_argument("GramMatrix: not positive semidefinite (min eigenvalue " +
                                std::to_string(min_eig) + ")");
  }
}

GramMatrix make_gram(ComplexMatrix s) {
  GramMatrix gram{std::move(s)};
  validate_gram(gram);
  return gram;
}

GramMatrix gram_indistinguishable(int n) { return GramMatrix{all_ones(n)}; }

GramMatrix gram_distinguishable(int n) { return GramMatrix{ComplexMatrix::Identity(n, n)}; }

GramMatrix gram_from_states(const InternalStateSet& states) {
  validate_states(states);
  GramMatrix gram{states.vectors.adjoint() * states.vectors};
  // Clean the diagonal: norms are 1 within tolerance, pin them exactly.
  for (Eigen::Index i = 0; i < gram.matrix.rows(); ++i) gram.matrix(i, i) = Complex(1.0, 0.0);
  return gram;
}

InternalStateSet states_from_gram(const GramMatrix& gram) {
  validate_gram(gram);
  const Eigen::Index n = gram.matrix.rows();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(gram.matrix);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("states_from_gram: eigendecomposition failed");
  }
  const Eigen::VectorXd eigenvalues = solver.eigenvalues();
  const double lambda_max = eigenvalues.maxCoeff();
  const double threshold = 1e-9 * std::max(1.0, lambda_max);

  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (eigenvalues(i) > threshold) ++rank;
  }
  if (rank == 0) throw std::invalid_argument("states_from_gram: zero matrix");

  // Eigen returns ascending eigenvalues; take the top `rank` of them.
  ComplexMatrix factor(rank, n);
  for (Eigen::Index k = 0; k < rank; ++k) {
    const Eigen::Index src = n - 1 - k;
    const double scale = std::sqrt(std::max(0.0, eigenvalues(src)));
    factor.row(k) = scale * solver.eigenvectors().col(src).adjoint();
  }
  for (Eigen::Index j = 0; j < n; ++j) factor.col(j).normalize();
  return InternalStateSet{std::move(factor)};
}

InternalStateSet star_states(int q) {
  if (q < 1) throw std::invalid_argument("star_states: q must be >= 1");
  ComplexMatrix vectors(2, q);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < q; ++j) {
    const double angle = 2.0 * std::numbers::pi * j / q;
    vectors(0, j) = Complex(inv_sqrt2, 0.0);
    vectors(1, j) = inv_sqrt2 * Complex(std::cos(angle), std::sin(angle));
  }
  return InternalStateSet{std::move(vectors)};
}

InternalStateSet violation_family_states(int n) {
  if (n < 4) throw std::invalid_argument("violation_family_states: need n >= 4");
  const int q = n - 2;
  InternalStateSet stars = star_states(q);
  ComplexMatrix vectors(2, n);
  vectors.leftCols(q) = stars.vectors;
  vectors.col(q) = ComplexVector::Zero(2);
  vectors(1, q) = Complex(1.0, 0.0);  // vertical photon on mode 0'
  vectors.col(q + 1) = ComplexVector::Zero(2);
  vectors(0, q + 1) = Complex(1.0, 0.0);  // horizontal photon on mode 1'
  return InternalStateSet{std::move(vectors)};
}

GramMatrix interpolated_gram(double x, double y, int n) {
  if (x < 0.0 || y < 0.0 || x + y > 1.0 + 1e-12) {
    throw std::invalid_argument("interpolated_gram: (x, y) outside the simplex");
  }
  const GramMatrix star = gram_from_states(violation_family_states(n));
  ComplexMatrix s = (1.0 - x - y) * star.matrix;
  s += x * all_ones(n);
  s += y * ComplexMatrix::Identity(n, n);
  return make_gram(std::move(s));
}

InternalStateSet perturb_states(const InternalStateSet& states, double epsilon,
                                std::mt19937_64& rng) {
  if (epsilon < 0.0) throw std::invalid_argument("perturb_states: epsilon must be >= 0");
  validate_states(states);
  ComplexMatrix vectors = states.vectors;
  if (epsilon > 0.0) {
    for (int j = 0; j < states.count(); ++j) {
      for (int i = 0; i < states.dim(); ++i) {
        vectors(i, j) += complex_gaussian(rng, epsilon);
      }
      vectors.col(j).normalize();
    }
  }
  return InternalStateSet{std::move(vectors)};
}

double symmetric_component(const GramMatrix& gram) {
  validate_gram(gram);
  const Complex perm = permanent_ryser(gram.matrix);
  double factorial = 1.0;
  for (int k = 2; k <= gram.size(); ++k) factorial *= k;
  return perm.real() / factorial;
}

}  // namespace bunching
