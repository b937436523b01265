// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>

#include "bunching/matrix.hpp"

namespace bunching {

/// n unit-norm internal wavefunctions of dimension r, stored as the columns of
/// an r x n matrix. Column j is the internal state of the photon entering
/// input mode j.
struct InternalStateSet {
  ComplexMatrix vectors;

  int count() const { return static_cast<int>(vectors.cols()); }
  int dim() const { return static_cast<int>(vectors.rows()); }
  ComplexVector state(int j) const { return vectors.col(j); }
};

/// Distinguishability matrix: Hermitian, unit diagonal, positive semidefinite.
struct GramMatrix {
  ComplexMatrix matrix;

  int size() const { return static_cast<int>(matrix.rows()); }
};

constexpr double kGramHermitianTol = 1e-10;
constexpr double kGramDiagonalTol = 1e-10;
constexpr double kGramPsdTol = 1e-9;
constexpr double kStateNormTol = 1e-10;

void validate_states(const InternalStateSet& states);
void validate_gram(const GramMatrix& gram);

/// Wraps a raw matrix after checking the GramMatrix invariants.
GramMatrix make_gram(ComplexMatrix s);

/// S = E, all photons indistinguishable.
GramMatrix gram_indistinguishable(int n);
/// S = 1, all photons fully distinguishable.
GramMatrix gram_distinguishable(int n);

/// S_ij = <phi_i|phi_j>, conjugate-linear in the first argument.
GramMatrix gram_from_states(const InternalStateSet& states);

/// Factor of S whose columns reproduce it: eigendecomposition with clipping of
/// slightly negative eigenvalues, keeping the numerical rank at threshold 1e-9.
InternalStateSet states_from_gram(const GramMatrix& gram);

/// q polarization states (1, w^j)/sqrt(2), w = exp(2 i pi / q), equally spaced
/// on the Bloch-sphere equator.
InternalStateSet star_states(int q);

/// The n-photon input family: q = n-2 star states on the interferometer's
/// Fourier inputs, a vertical state on mode 0' and a horizontal state on
/// mode 1', in the canonical ordering [0..q-1, 0', 1'].
InternalStateSet violation_family_states(int n);

/// Two-parameter interpolation S(x,y) = (1-x-y) S_star + x E + y 1 on the
/// simplex x,y >= 0, x+y <= 1.
GramMatrix interpolated_gram(double x, double y, int n = 7);

/// Adds an independent Gaussian perturbation of standard deviation epsilon to
/// the real and imaginary part of every component, then renormalizes each
/// state to unit norm.
InternalStateSet perturb_states(const InternalStateSet& states, double epsilon,
                                std::mt19937_64& rng);

/// d(S) = perm(S)/n!, the weight of the permutation-symmetric component. Lies
/// in [1/n!, 1]; equals 1 iff the photons are fully indistinguishable.
double symmetric_component(const GramMatrix& gram);

}  // namespace bunching
