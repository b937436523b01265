// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bunching/circuits.hpp"

namespace bunching {

/// One row of a scan or Monte-Carlo output.
struct ExperimentRecord {
  std::string experiment;
  std::map<std::string, std::string> parameters;
  std::map<std::string, double> values;
};

/// Lower bound n/8 + (n-2)^2 / (32 (n-1)) on the bunching violation ratio of
/// the circuit family, valid for n >= 4.
double ratio_bound(int n);

struct ViolationRatio {
  double ratio = 0.0;
  double p_star = 0.0;
  double p_bos = 0.0;
};

/// R_n = P_n(star) / P_n(indistinguishable) for the n-mode family circuit.
/// eta <= 0 selects the default 2/n; R_n itself does not depend on eta.
ViolationRatio violation_ratio(int n, double eta = 0.0);

struct RatioResult {
  int n = 0;
  double eta = 0.0;
  double p_bos = 0.0;
  double p_star = 0.0;
  double ratio = 0.0;
  double bound = 0.0;
};

/// Per-n ratios over [n_min, n_max] with the analytic bound attached. Throws
/// if any ratio falls below its bound. eta <= 0 selects 2/n per n.
std::vector<RatioResult> ratio_scan(int n_min, int n_max, double eta = 0.0);

/// Closed form 2 (q+1)! / q^q * eta^2 (1-eta)^q for the indistinguishable
/// bunching probability of the family, q = n-2.
double closed_form_bos_probability(int n, double eta);

/// Lower bound eta^2 (1-eta)^q / (4 q^q) * ((q+2)! + q^2 q!/4) on the star
/// bunching probability.
double pd_lower_bound_probability(int n, double eta);

enum class InputKind { star, bos, dist };

InputKind parse_input_kind(const std::string& name);
std::string input_kind_name(InputKind kind);

struct DistributionRow {
  int j = 0;
  double conditional_p = 0.0;
  double absolute_p = 0.0;
};

struct DistributionResult {
  std::vector<DistributionRow> rows;
  double bunching_probability = 0.0;
};

/// Photon-number distribution over the family's two bunching modes,
/// conditioned on the bunching event.
DistributionResult distribution_experiment(int n, InputKind which);

enum class PerturbationTarget { states, unitary };

PerturbationTarget parse_perturbation_target(const std::string& name);
std::string perturbation_target_name(PerturbationTarget target);

struct PerturbationPoint {
  double epsilon = 0.0;
  double mean_ratio = 0.0;
  double std_ratio = 0.0;
  double frac_violating = 0.0;
  std::uint64_t samples = 0;
};

/// Monte-Carlo perturbation of the n=7 family. The states path perturbs the
/// internal wavefunctions (Gaussian noise of std epsilon on each quadrature,
/// then renormalization); the unitary path adds the same noise to the columns
/// of U and Gram-orthonormalizes them in order. Sample substreams are derived
/// from (seed, epsilon index, sample index), so records are bit-reproducible
/// for any worker count.
std::vector<PerturbationPoint> perturbation_sweep(PerturbationTarget target,
                                                  const std::vector<double>& epsilons,
                                                  std::uint64_t samples, std::uint64_t seed,
                                                  int threads = 0);

struct SearchSummary {
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;
  double max_ratio = 0.0;
  std::uint64_t seed = 0;
  bool planted = false;
  bool planted_detected = false;
};

/// Random search for violations of perm(H . S^T) <= perm(H): Haar unitaries,
/// rank-r Gram matrices, subset = first `subset_size` output modes
/// (defaults to r). The maximum ratio is recorded even when no violation is
/// found. With plant_drury the embedded counterexample is evaluated once on
/// top of the random samples and must be flagged.
SearchSummary counterexample_search(int n, int r, std::uint64_t samples, std::uint64_t seed,
                                    bool plant_drury = false, int subset_size = 0,
                                    int threads = 0);

struct TernaryPoint {
  double x = 0.0;
  double y = 0.0;
  double ratio = 0.0;
  double log10_ratio = 0.0;
};

/// Ratio P_7(S(x,y)) / P_7(E) over the simplex grid with the given step.
/// Checks the anchor points: ratio > 1 at (0,0) and ratio = 1 at (1,0).
std::vector<TernaryPoint> ternary_scan(double grid_step);

/// |dP/d delta| / perm(H) for random first-order directions around S = E on
/// the n-mode family; all values should sit below 1e-7.
std::vector<double> stability_trials(int n, int trials, std::uint64_t seed);

}  // namespace bunching
