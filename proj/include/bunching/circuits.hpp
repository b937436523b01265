// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>
#include <utility>

#include "bunching/distinguishability.hpp"
#include "bunching/interferometry.hpp"
#include "bunching/matrix.hpp"

namespace bunching {

/// Two-mode coupler acting on (mode_a, mode_b) with transmittance eta:
/// [[sqrt(eta), sqrt(1-eta)], [-sqrt(1-eta), sqrt(eta)]].
struct BeamSplitterSpec {
  int mode_a = 0;
  int mode_b = 1;
  double eta = 0.5;
};

/// The n-mode bunching-violation circuit: a q-mode Fourier stage (q = n-2) on
/// inputs 0..q-1, followed by beam splitters coupling (0, 0') and (1, 1') with
/// equal transmittance. Logical modes [0..q-1, 0', 1'] map to indices
/// [0..q-1, q, q+1]; the measured subset is {0', 1'}.
struct FamilyCircuit {
  int photons = 0;
  int q = 0;
  double eta = 0.0;
  Interferometer interferometer;
  OutputSubset subset;
};

/// q x q matrix U_jk = w^(jk)/sqrt(q), w = exp(2 i pi / q).
Interferometer dft_unitary(int q);

Interferometer beam_splitter_unitary(int m, const BeamSplitterSpec& spec);

/// eta <= 0 selects the default 2/n, which maximizes the absolute bunching
/// probability of the family.
FamilyCircuit family_circuit(int n, double eta = 0.0);

/// Bunching instance for the family circuit under a given Gram matrix.
BunchingInstance family_instance(const FamilyCircuit& circuit, GramMatrix gram);

/// The 7x7 counterexample Gram matrix A (unit diagonal, rank 2) together with
/// its 2x7 factor M, A = M^dagger M. perm(A . A^T)/perm(A) = 1237/1152.
std::pair<GramMatrix, ComplexMatrix> drury_matrices();

struct EmbeddedFactor {
  Interferometer interferometer;
  OutputSubset subset;
  double alpha = 0.0;
};

/// Scales an r x n factor M so its rows fit inside a unitary, places
/// sqrt(alpha) M on the first r rows (dilating with extra columns when the
/// rows are not orthonormal after scaling) and completes the remaining rows.
/// The resulting h_matrix over inputs 0..n-1 equals alpha M^dagger M.
EmbeddedFactor embed_factor_into_unitary(const ComplexMatrix& factor,
                                         std::uint64_t completion_seed = 0x5eedULL);

/// Haar-distributed unitary: QR of an i.i.d. complex Gaussian matrix with the
/// R-diagonal phases absorbed. Deterministic per stream state.
Interferometer haar_random_unitary(int m, std::mt19937_64& rng);

/// Gram matrix of n vectors drawn uniformly on the complex unit sphere in
/// dimension r.
GramMatrix random_rank_r_gram(int n, int r, std::mt19937_64& rng);

}  // namespace bunching
