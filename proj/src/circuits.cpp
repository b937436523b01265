// SPDX-License-Identifier: Apache-2.0
#include "bunching/circuits.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "bunching/rng.hpp"

namespace bunching {

Interferometer dft_unitary(int q) {
  if (q < 1) throw std::invalid_argument("dft_unitary: q must be >= 1");
  ComplexMatrix u(q, q);
  const double inv_sqrt_q = 1.0 / std::sqrt(static_cast<double>(q));
  for (int j = 0; j < q; ++j) {
    for (int k = 0; k < q; ++k) {
      const double angle = 2.0 * std::numbers::pi * ((static_cast<long long>(j) * k) % q) / q;
      u(j, k) = inv_sqrt_q * Complex(std::cos(angle), std::sin(angle));
    }
  }
  return Interferometer{std::move(u)};
}

Interferometer beam_splitter_unitary(int m, const BeamSplitterSpec& spec) {
  if (spec.mode_a == spec.mode_b) {
    throw std::invalid_argument("beam_splitter_unitary: modes must differ");
  }
  if (spec.mode_a < 0 || spec.mode_a >= m || spec.mode_b < 0 || spec.mode_b >= m) {
    throw std::invalid_argument("beam_splitter_unitary: mode out of range");
  }
  if (spec.eta < 0.0 || spec.eta > 1.0) {
    throw std::invalid_argument("beam_splitter_unitary: eta must lie in [0, 1]");
  }
  ComplexMatrix u = ComplexMatrix::Identity(m, m);
  const double t = std::sqrt(spec.eta);
  const double r = std::sqrt(1.0 - spec.eta);
  u(spec.mode_a, spec.mode_a) = t;
  u(spec.mode_a, spec.mode_b) = r;
  u(spec.mode_b, spec.mode_a) = -r;
  u(spec.mode_b, spec.mode_b) = t;
  return Interferometer{std::move(u)};
}

FamilyCircuit family_circuit(int n, double eta) {
  if (n < 4) throw std::invalid_argument("family_circuit: need n >= 4");
  if (eta <= 0.0) eta = 2.0 / n;
  if (eta >= 1.0) throw std::invalid_argument("family_circuit: eta must lie in (0, 1)");
  const int q = n - 2;

  // Fourier stage on modes 0..q-1, identity on 0' and 1'. The Fourier block
  // enters conjugated: with the perm(H . S^T) pairing used throughout, this
  // orientation is the one that couples the star polarization pattern to the
  // NOON-state mechanism (pinned by the R_7 = 1237/1152 ratio; the opposite
  // orientation fails it).
  ComplexMatrix stage = ComplexMatrix::Identity(n, n);
  stage.topLeftCorner(q, q) = dft_unitary(q).u.conjugate();

  const Interferometer bs0 = beam_splitter_unitary(n, BeamSplitterSpec{0, q, eta});
  const Interferometer bs1 = beam_splitter_unitary(n, BeamSplitterSpec{1, q + 1, eta});
  ComplexMatrix u = bs0.u * bs1.u * stage;

  FamilyCircuit circuit{n, q, eta, make_interferometer(std::move(u)),
                        OutputSubset{{q, q + 1}}};
  return circuit;
}

BunchingInstance family_instance(const FamilyCircuit& circuit, GramMatrix gram) {
  return make_instance(circuit.interferometer, circuit.subset, std::move(gram));
}

std::pair<GramMatrix, ComplexMatrix> drury_matrices() {
  ComplexMatrix m(2, 7);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  m.setZero();
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  for (int j = 0; j < 5; ++j) {
    const double angle = 2.0 * std::numbers::pi * j / 5.0;
    m(0, 2 + j) = inv_sqrt2;
    m(1, 2 + j) = inv_sqrt2 * Complex(std::cos(angle), std::sin(angle));
  }
  ComplexMatrix a = m.adjoint() * m;
  for (int i = 0; i < 7; ++i) a(i, i) = Complex(1.0, 0.0);
  return {make_gram(std::move(a)), std::move(m)};
}

EmbeddedFactor embed_factor_into_unitary(const ComplexMatrix& factor,
                                         std::uint64_t completion_seed) {
  const Eigen::Index r = factor.rows();
  const Eigen::Index n = factor.cols();
  if (r < 1 || n < 1 || r > n) {
    throw std::invalid_argument("embed_factor_into_unitary: need 1 <= r <= n");
  }
  if (!is_finite(factor)) {
    throw std::invalid_argument("embed_factor_into_unitary: non-finite factor");
  }

  double max_row_norm_sq = 0.0;
  for (Eigen::Index i = 0; i < r; ++i) {
    max_row_norm_sq = std::max(max_row_norm_sq, factor.row(i).squaredNorm());
  }
  if (max_row_norm_sq <= 0.0) {
    throw std::invalid_argument("embed_factor_into_unitary: zero factor");
  }
  const double alpha = 1.0 / max_row_norm_sq;

  ComplexMatrix scaled = std::sqrt(alpha) * factor;
  ComplexMatrix row_gram = scaled * scaled.adjoint();
  const bool rows_orthonormal =
      (row_gram - ComplexMatrix::Identity(r, r)).cwiseAbs().maxCoeff() <= 1e-12;

  // When the scaled rows are already orthonormal they sit directly inside an
  // n x n unitary; otherwise dilate with r extra columns carrying the defect
  // (1 - alpha M M^dagger)^(1/2) so the first r rows become orthonormal.
  Eigen::Index dim = rows_orthonormal ? n : n + r;
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  u.topLeftCorner(r, n) = scaled;
  if (!rows_orthonormal) {
    ComplexMatrix defect = ComplexMatrix::Identity(r, r) - row_gram;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(defect);
    Eigen::VectorXd eigenvalues = solver.eigenvalues();
    for (Eigen::Index i = 0; i < r; ++i) {
      if (eigenvalues(i) < -1e-10) {
        throw std::invalid_argument("embed_factor_into_unitary: row scaling infeasible");
      }
      eigenvalues(i) = std::sqrt(std::max(0.0, eigenvalues(i)));
    }
    u.block(0, n, r, r) = solver.eigenvectors() * eigenvalues.asDiagonal() *
                          solver.eigenvectors().adjoint();
  }

  // Complete the remaining rows by Gram-Schmidt over the orthogonal
  // complement, seeding candidates from a deterministic random stream and
  // re-orthogonalizing whenever a pivot collapses.
  std::mt19937_64 rng = substream(completion_seed);
  Eigen::Index filled = r;
  while (filled < dim) {
    ComplexVector candidate(dim);
    for (Eigen::Index i = 0; i < dim; ++i) candidate(i) = complex_gaussian(rng);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < filled; ++i) {
        candidate -= u.row(i).dot(candidate) * u.row(i).transpose();
      }
    }
    const double norm = candidate.norm();
    if (norm < 1e-12) continue;  // collapsed pivot, draw again
    u.row(filled) = (candidate / norm).transpose();
    ++filled;
  }

  std::vector<int> subset_modes(static_cast<std::size_t>(r));
  for (Eigen::Index i = 0; i < r; ++i) subset_modes[static_cast<std::size_t>(i)] = static_cast<int>(i);
  return EmbeddedFactor{make_interferometer(std::move(u)), OutputSubset{std::move(subset_modes)},
                        alpha};
}

Interferometer haar_random_unitary(int m, std::mt19937_64& rng) {
  if (m < 1) throw std::invalid_argument("haar_random_unitary: m must be >= 1");
  ComplexMatrix z(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      z(i, j) = complex_gaussian(rng);
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Absorb the R-diagonal phases so Q follows the Haar measure.
  for (int j = 0; j < m; ++j) {
    const double magnitude = std::abs(r(j, j));
    const Complex phase = magnitude > 0.0 ? r(j, j) / magnitude : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  return make_interferometer(std::move(q));
}

GramMatrix random_rank_r_gram(int n, int r, std::mt19937_64& rng) {
  if (n < 1 || r < 1 || r > n) {
    throw std::invalid_argument("random_rank_r_gram: need 1 <= r <= n");
  }
  ComplexMatrix vectors(r, n);
  for (int j = 0; j < n; ++j) {
    vectors.col(j) = random_unit_vector(rng, r);
  }
  return gram_from_states(InternalStateSet{std::move(vectors)});
}

}  // namespace bunching
