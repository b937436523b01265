// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "bunching/distinguishability.hpp"
#include "bunching/matrix.hpp"

namespace bunching {

constexpr double kUnitaryTol = 1e-9;
constexpr double kImagResidueTol = 1e-8;

/// m-mode linear interferometer. Rows are indexed by output modes, columns by
/// input modes; probabilities follow the perm(H . S^T) pairing below, which
/// corresponds to the transition amplitude conj(u(k, j)) from input j to
/// output k.
struct Interferometer {
  ComplexMatrix u;

  int modes() const { return static_cast<int>(u.rows()); }
};

void validate_interferometer(const Interferometer& interferometer);
Interferometer make_interferometer(ComplexMatrix u);

/// Strictly increasing, non-empty list of output modes.
struct OutputSubset {
  std::vector<int> modes;

  int size() const { return static_cast<int>(modes.size()); }
};

void validate_subset(const OutputSubset& subset, int mode_count);

/// Output occupation vector s together with its mode-assignment list d
/// (output mode of each photon, nondecreasing).
struct OutcomeSpec {
  std::vector<int> occupation;
  std::vector<int> assignment;

  int photons() const { return static_cast<int>(assignment.size()); }
};

OutcomeSpec outcome_from_occupation(std::vector<int> occupation);

/// All occupation vectors of n photons over m modes, in lexicographic order.
std::vector<OutcomeSpec> enumerate_outcomes(int m, int n);

/// One fully specified bunching experiment: photons occupy input modes
/// 0..n-1, and we ask for all of them in the output subset.
struct BunchingInstance {
  Interferometer interferometer;
  OutputSubset subset;
  GramMatrix gram;

  int photons() const { return gram.size(); }
};

BunchingInstance make_instance(Interferometer interferometer, OutputSubset subset,
                               GramMatrix gram);
BunchingInstance make_instance(Interferometer interferometer, OutputSubset subset,
                               const InternalStateSet& states);

/// H_ab = sum_{l in K} conj(u(l, a)) u(l, b), over the n input columns.
/// Hermitian and positive semidefinite; equals the identity when K covers all
/// modes.
ComplexMatrix h_matrix(const BunchingInstance& instance);

/// Probability that all photons land in the subset: perm(H . S^T) with
/// entries H_ab S_ba. Real within kImagResidueTol, else a consistency error.
double bunching_probability(const BunchingInstance& instance);

/// Factored fast path for |K| = 1: product of |u(k, j)|^2 times perm(S).
double single_mode_bunching(const BunchingInstance& instance);

/// Fermionic counterpart det(H . S^T); minimized by indistinguishable
/// fermions, det(H . S^T) >= det(H).
double fermionic_bunching_probability(const BunchingInstance& instance);

/// Probability of one output configuration for partially distinguishable
/// photons. Reduction to n! permanents of n x n matrices; n <= 9.
double event_probability(const BunchingInstance& instance, const OutcomeSpec& outcome);

/// Direct double-permutation sum, O((n!)^2 n); reference path for n <= 5.
double event_probability_naive(const BunchingInstance& instance, const OutcomeSpec& outcome);

/// For |K| = {k1, k2}: probabilities of the outcomes (j, n-j), conditioned on
/// bunching. Sums to 1 whenever the bunching probability is nonzero.
std::vector<std::pair<int, double>> conditional_bunched_distribution(
    const BunchingInstance& instance);

/// Independent oracle: expands the full output Fock state over joint
/// (spatial mode x internal basis) occupations. Limited to n <= 5, m <= 7.
double fock_oracle_event_probability(const Interferometer& interferometer,
                                     const InternalStateSet& states, const OutcomeSpec& outcome);

/// First-order estimate perm(A) + delta * sum_ij Delta_ij perm(A(i,j)) of
/// perm(A + delta Delta).
Complex first_order_perturbation_predictor(const ComplexMatrix& a, const ComplexMatrix& delta_dir,
                                           double delta);

/// Central-difference derivative of perm(A . (E + d S(x))^T) at d = 0, where
/// S(x)_ij = i (x_j - x_i) is the anti-Hermitian-imaginary direction generated
/// by per-photon phase-like perturbations around the indistinguishable point.
/// Vanishes to first order for PSD A with unit diagonal.
double stability_direction_check(const ComplexMatrix& a, const std::vector<double>& x);

}  // namespace bunching
