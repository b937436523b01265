// SPDX-License-Identifier: Apache-2.0
#include "bunching/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "bunching/kahan.hpp"
#include "bunching/parallel.hpp"
#include "bunching/permanent.hpp"
#include "bunching/rng.hpp"

namespace bunching {

namespace {

constexpr std::uint64_t kMonteCarloChunk = 4096;

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

double pow_int(double base, int exponent) {
  double out = 1.0;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

struct ChunkMoments {
  KahanSum sum;
  KahanSum sum_sq;
  std::uint64_t violations = 0;
  std::uint64_t count = 0;
};

// Columns are orthonormalized in order; a second pass keeps the result
// unitary to machine precision after large perturbations.
void gram_orthonormalize_columns(ComplexMatrix& u, std::mt19937_64& rng) {
  const Eigen::Index m = u.cols();
  for (Eigen::Index j = 0; j < m; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) {
        u.col(j) -= u.col(i).dot(u.col(j)) * u.col(i);
      }
    }
    double norm = u.col(j).norm();
    while (norm < 1e-12) {
      for (Eigen::Index i = 0; i < u.rows(); ++i) u(i, j) = complex_gaussian(rng);
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index i = 0; i < j; ++i) {
          u.col(j) -= u.col(i).dot(u.col(j)) * u.col(i);
        }
      }
      norm = u.col(j).norm();
    }
    u.col(j) /= norm;
  }
}

}  // namespace

double ratio_bound(int n) {
  if (n < 4) throw std::invalid_argument("ratio_bound: defined for n >= 4");
  const double delta = static_cast<double>(n - 2);
  return n / 8.0 + delta * delta / (32.0 * (n - 1));
}

ViolationRatio violation_ratio(int n, double eta) {
  const FamilyCircuit circuit = family_circuit(n, eta);
  const GramMatrix star = gram_from_states(violation_family_states(n));
  const double p_star = bunching_probability(family_instance(circuit, star));
  const double p_bos = bunching_probability(family_instance(circuit, gram_indistinguishable(n)));
  return ViolationRatio{p_star / p_bos, p_star, p_bos};
}

std::vector<RatioResult> ratio_scan(int n_min, int n_max, double eta) {
  if (n_min < 4 || n_min > n_max || n_max > 30) {
    throw std::invalid_argument("ratio_scan: need 4 <= n_min <= n_max <= 30");
  }
  std::vector<RatioResult> results;
  results.reserve(static_cast<std::size_t>(n_max - n_min) + 1);
  for (int n = n_min; n <= n_max; ++n) {
    const double eta_n = eta > 0.0 ? eta : 2.0 / n;
    const ViolationRatio vr = violation_ratio(n, eta_n);
    const double bound = ratio_bound(n);
    if (vr.ratio + 1e-12 < bound) {
      throw std::runtime_error("ratio_scan: ratio " + std::to_string(vr.ratio) + " at n = " +
                               std::to_string(n) + " fell below its bound " +
                               std::to_string(bound));
    }
    results.push_back(RatioResult{n, eta_n, vr.p_bos, vr.p_star, vr.ratio, bound});
  }
  return results;
}

double closed_form_bos_probability(int n, double eta) {
  if (n < 4) throw std::invalid_argument("closed_form_bos_probability: need n >= 4");
  const int q = n - 2;
  return 2.0 * factorial(q + 1) / pow_int(q, q) * eta * eta * pow_int(1.0 - eta, q);
}

double pd_lower_bound_probability(int n, double eta) {
  if (n < 4) throw std::invalid_argument("pd_lower_bound_probability: need n >= 4");
  const int q = n - 2;
  const double prefactor = eta * eta * pow_int(1.0 - eta, q) / (4.0 * pow_int(q, q));
  return prefactor * (factorial(q + 2) + q * q * factorial(q) / 4.0);
}

InputKind parse_input_kind(const std::string& name) {
  if (name == "star") return InputKind::star;
  if (name == "bos") return InputKind::bos;
  if (name == "dist") return InputKind::dist;
  throw std::invalid_argument("unknown input kind: " + name);
}

std::string input_kind_name(InputKind kind) {
  switch (kind) {
    case InputKind::star: return "star";
    case InputKind::bos: return "bos";
    case InputKind::dist: return "dist";
  }
  return "?";
}

DistributionResult distribution_experiment(int n, InputKind which) {
  if (n > 9) throw std::invalid_argument("distribution_experiment: n > 9");
  const FamilyCircuit circuit = family_circuit(n);
  GramMatrix gram = which == InputKind::star ? gram_from_states(violation_family_states(n))
                    : which == InputKind::bos ? gram_indistinguishable(n)
                                              : gram_distinguishable(n);
  const BunchingInstance instance = family_instance(circuit, std::move(gram));
  const double total = bunching_probability(instance);
  DistributionResult result;
  result.bunching_probability = total;
  for (const auto& [j, conditional] : conditional_bunched_distribution(instance)) {
    result.rows.push_back(DistributionRow{j, conditional, conditional * total});
  }
  return result;
}

PerturbationTarget parse_perturbation_target(const std::string& name) {
  if (name == "states") return PerturbationTarget::states;
  if (name == "unitary") return PerturbationTarget::unitary;
  throw std::invalid_argument("unknown perturbation target: " + name);
}

std::string perturbation_target_name(PerturbationTarget target) {
  return target == PerturbationTarget::states ? "states" : "unitary";
}

std::vector<PerturbationPoint> perturbation_sweep(PerturbationTarget target,
                                                  const std::vector<double>& epsilons,
                                                  std::uint64_t samples, std::uint64_t seed,
                                                  int threads) {
  if (samples < 1) throw std::invalid_argument("perturbation_sweep: need samples >= 1");
  const int n = 7;
  const FamilyCircuit circuit = family_circuit(n);
  const InternalStateSet base_states = violation_family_states(n);
  const GramMatrix star = gram_from_states(base_states);
  const GramMatrix bos = gram_indistinguishable(n);
  const double p_bos_fixed = bunching_probability(family_instance(circuit, bos));

  auto states_sample = [&](double epsilon, std::mt19937_64& rng) {
    const InternalStateSet perturbed = perturb_states(base_states, epsilon, rng);
    const double p = bunching_probability(
        make_instance(circuit.interferometer, circuit.subset, gram_from_states(perturbed)));
    return p / p_bos_fixed;
  };

  auto unitary_sample = [&](double epsilon, std::mt19937_64& rng) {
    ComplexMatrix u = circuit.interferometer.u;
    if (epsilon > 0.0) {
      for (Eigen::Index j = 0; j < u.cols(); ++j) {
        for (Eigen::Index i = 0; i < u.rows(); ++i) {
          u(i, j) += complex_gaussian(rng, epsilon);
        }
      }
    }
    gram_orthonormalize_columns(u, rng);
    const Interferometer perturbed = make_interferometer(std::move(u));
    const double p_star = bunching_probability(make_instance(perturbed, circuit.subset, star));
    const double p_bos = bunching_probability(make_instance(perturbed, circuit.subset, bos));
    return p_star / p_bos;
  };

  std::vector<PerturbationPoint> points;
  points.reserve(epsilons.size());
  for (std::size_t e = 0; e < epsilons.size(); ++e) {
    const double epsilon = epsilons[e];
    if (epsilon < 0.0) throw std::invalid_argument("perturbation_sweep: epsilon must be >= 0");

    const std::uint64_t chunks = (samples + kMonteCarloChunk - 1) / kMonteCarloChunk;
    std::vector<ChunkMoments> partial(static_cast<std::size_t>(chunks));
    parallel_for_index(
        static_cast<std::size_t>(chunks),
        [&](std::size_t c) {
          const std::uint64_t begin = static_cast<std::uint64_t>(c) * kMonteCarloChunk;
          const std::uint64_t end = std::min<std::uint64_t>(begin + kMonteCarloChunk, samples);
          ChunkMoments moments;
          for (std::uint64_t i = begin; i < end; ++i) {
            std::mt19937_64 rng =
                substream(seed, static_cast<std::uint64_t>(e) * samples + i);
            const double ratio = target == PerturbationTarget::states
                                     ? states_sample(epsilon, rng)
                                     : unitary_sample(epsilon, rng);
            moments.sum.add(ratio);
            moments.sum_sq.add(ratio * ratio);
            if (ratio > 1.0) ++moments.violations;
            ++moments.count;
          }
          partial[c] = moments;
        },
        threads);

    KahanSum sum;
    KahanSum sum_sq;
    std::uint64_t violations = 0;
    for (const ChunkMoments& moments : partial) {
      sum.add(moments.sum.sum);
      sum_sq.add(moments.sum_sq.sum);
      violations += moments.violations;
    }
    const double mean = sum.sum / static_cast<double>(samples);
    const double variance = std::max(0.0, sum_sq.sum / static_cast<double>(samples) - mean * mean);
    points.push_back(PerturbationPoint{epsilon, mean, std::sqrt(variance),
                                       static_cast<double>(violations) /
                                           static_cast<double>(samples),
                                       samples});
  }
  return points;
}

SearchSummary counterexample_search(int n, int r, std::uint64_t samples, std::uint64_t seed,
                                    bool plant_drury, int subset_size, int threads) {
  if (n < 1 || n > 10) throw std::invalid_argument("counterexample_search: need 1 <= n <= 10");
  if (r < 1 || r > n) throw std::invalid_argument("counterexample_search: need 1 <= r <= n");
  if (subset_size <= 0) subset_size = r;
  if (subset_size > n) throw std::invalid_argument("counterexample_search: subset too large");

  std::vector<int> subset_modes(static_cast<std::size_t>(subset_size));
  for (int i = 0; i < subset_size; ++i) subset_modes[static_cast<std::size_t>(i)] = i;
  const OutputSubset subset{subset_modes};
  constexpr double kViolationMargin = 1e-10;

  struct ChunkResult {
    std::uint64_t violations = 0;
    double max_ratio = 0.0;
  };
  const std::uint64_t chunks = (samples + kMonteCarloChunk - 1) / kMonteCarloChunk;
  std::vector<ChunkResult> partial(static_cast<std::size_t>(chunks));
  parallel_for_index(
      static_cast<std::size_t>(chunks),
      [&](std::size_t c) {
        const std::uint64_t begin = static_cast<std::uint64_t>(c) * kMonteCarloChunk;
        const std::uint64_t end = std::min<std::uint64_t>(begin + kMonteCarloChunk, samples);
        ChunkResult result;
        for (std::uint64_t i = begin; i < end; ++i) {
          std::mt19937_64 rng = substream(seed, i);
          const Interferometer u = haar_random_unitary(n, rng);
          const GramMatrix s = random_rank_r_gram(n, r, rng);
          const BunchingInstance instance = make_instance(u, subset, s);
          const double p_s = bunching_probability(instance);
          const double p_e =
              bunching_probability(make_instance(u, subset, gram_indistinguishable(n)));
          if (p_e <= 0.0) continue;
          const double ratio = p_s / p_e;
          result.max_ratio = std::max(result.max_ratio, ratio);
          if (ratio > 1.0 + kViolationMargin) ++result.violations;
        }
        partial[c] = result;
      },
      threads);

  SearchSummary summary;
  summary.samples = samples;
  summary.seed = seed;
  summary.planted = plant_drury;
  for (const ChunkResult& result : partial) {
    summary.violations += result.violations;
    summary.max_ratio = std::max(summary.max_ratio, result.max_ratio);
  }

  if (plant_drury) {
    const auto [a, m] = drury_matrices();
    const EmbeddedFactor embedded = embed_factor_into_unitary(m);
    const double p_s =
        bunching_probability(make_instance(embedded.interferometer, embedded.subset, a));
    const double p_e = bunching_probability(
        make_instance(embedded.interferometer, embedded.subset, gram_indistinguishable(a.size())));
    const double ratio = p_s / p_e;
    summary.max_ratio = std::max(summary.max_ratio, ratio);
    if (ratio > 1.0 + kViolationMargin) {
      ++summary.violations;
      summary.planted_detected = true;
    }
  }
  return summary;
}

std::vector<TernaryPoint> ternary_scan(double grid_step) {
  if (!(grid_step > 0.0) || grid_step > 0.5) {
    throw std::invalid_argument("ternary_scan: grid step must lie in (0, 0.5]");
  }
  const int n = 7;
  const FamilyCircuit circuit = family_circuit(n);
  const GramMatrix star = gram_from_states(violation_family_states(n));
  const ComplexMatrix ones = all_ones(n);
  const ComplexMatrix identity = ComplexMatrix::Identity(n, n);
  const double p_bos = bunching_probability(family_instance(circuit, gram_indistinguishable(n)));

  std::vector<TernaryPoint> points;
  const int steps = static_cast<int>(std::floor(1.0 / grid_step + 1e-9));
  for (int i = 0; i <= steps; ++i) {
    const double x = i * grid_step;
    for (int j = 0; i * grid_step + j * grid_step <= 1.0 + 1e-12 && j <= steps; ++j) {
      const double y = j * grid_step;
      ComplexMatrix s = (1.0 - x - y) * star.matrix + x * ones + y * identity;
      const double p = bunching_probability(
          make_instance(circuit.interferometer, circuit.subset, make_gram(std::move(s))));
      const double ratio = p / p_bos;
      points.push_back(TernaryPoint{x, y, ratio, std::log10(ratio)});
    }
  }

  for (const TernaryPoint& point : points) {
    if (point.x == 0.0 && point.y == 0.0 && !(point.ratio > 1.0)) {
      throw std::runtime_error("ternary_scan: expected a violation at (0, 0)");
    }
    if (point.x == 1.0 && point.y == 0.0 && std::abs(point.ratio - 1.0) > 1e-12) {
      throw std::runtime_error("ternary_scan: ratio at (1, 0) must be 1");
    }
  }
  return points;
}

std::vector<double> stability_trials(int n, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("stability_trials: need trials >= 1");
  const FamilyCircuit circuit = family_circuit(n);
  const ComplexMatrix h =
      h_matrix(family_instance(circuit, gram_indistinguishable(n)));
  const double perm_h = permanent_ryser(h).real();

  std::vector<double> norms(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng = substream(seed, static_cast<std::uint64_t>(t));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (double& xi : x) xi = gauss(rng);
    norms[static_cast<std::size_t>(t)] = std::abs(stability_direction_check(h, x)) / perm_h;
  }
  return norms;
}

}  // namespace bunching
