// SPDX-License-Identifier: Apache-2.0
#include "bunching/interferometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "bunching/permanent.hpp"

namespace bunching {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

double occupation_mu(const std::vector<int>& occupation) {
  double mu = 1.0;
  for (int s : occupation) mu *= factorial(s);
  return mu;
}

double real_probability(const Complex& value, const char* what) {
  if (std::abs(value.imag()) > kImagResidueTol) {
    throw std::runtime_error(std::string(what) + ": imaginary residue " +
                             std::to_string(value.imag()) + " exceeds tolerance");
  }
  return std::max(0.0, value.real());
}

void check_outcome(const BunchingInstance& instance, const OutcomeSpec& outcome) {
  const int m = instance.interferometer.modes();
  if (static_cast<int>(outcome.occupation.size()) != m) {
    throw std::invalid_argument("event_probability: occupation length differs from mode count");
  }
  const int total = std::accumulate(outcome.occupation.begin(), outcome.occupation.end(), 0);
  if (total != instance.photons()) {
    throw std::invalid_argument("event_probability: occupation sums to " + std::to_string(total) +
                                ", expected " + std::to_string(instance.photons()));
  }
}

}  // namespace

void validate_interferometer(const Interferometer& interferometer) {
  require_square(interferometer.u, "Interferometer");
  if (interferometer.modes() < 1) throw std::invalid_argument("Interferometer: empty matrix");
  if (!is_finite(interferometer.u)) {
    throw std::invalid_argument("Interferometer: non-finite entries");
  }
  if (!is_unitary(interferometer.u, kUnitaryTol)) {
    throw std::invalid_argument("Interferometer: matrix is not unitary within tolerance");
  }
}

Interferometer make_interferometer(ComplexMatrix u) {
  Interferometer interferometer{std::move(u)};
  validate_interferometer(interferometer);
  return interferometer;
}

void validate_subset(const OutputSubset& subset, int mode_count) {
  if (subset.modes.empty()) throw std::invalid_argument("OutputSubset: empty subset");
  for (std::size_t i = 0; i < subset.modes.size(); ++i) {
    const int mode = subset.modes[i];
    if (mode < 0 || mode >= mode_count) {
      throw std::invalid_argument("OutputSubset: mode " + std::to_string(mode) +
                                  " out of range for " + std::to_string(mode_count) + " modes");
    }
    if (i > 0 && subset.modes[i - 1] >= mode) {
      throw std::invalid_argument("OutputSubset: modes must be strictly increasing");
    }
  }
}

OutcomeSpec outcome_from_occupation(std::vector<int> occupation) {
  std::vector<int> assignment;
  for (std::size_t mode = 0; mode < occupation.size(); ++mode) {
    if (occupation[mode] < 0) throw std::invalid_argument("OutcomeSpec: negative occupation");
    assignment.insert(assignment.end(), static_cast<std::size_t>(occupation[mode]),
                      static_cast<int>(mode));
  }
  return OutcomeSpec{std::move(occupation), std::move(assignment)};
}

std::vector<OutcomeSpec> enumerate_outcomes(int m, int n) {
  std::vector<OutcomeSpec> outcomes;
  std::vector<int> occupation(static_cast<std::size_t>(m), 0);
  // Recursively distribute n photons over modes [mode, m).
  auto recurse = [&](auto&& self, int mode, int remaining) -> void {
    if (mode == m - 1) {
      occupation[static_cast<std::size_t>(mode)] = remaining;
      outcomes.push_back(outcome_from_occupation(occupation));
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      occupation[static_cast<std::size_t>(mode)] = k;
      self(self, mode + 1, remaining - k);
    }
    occupation[static_cast<std::size_t>(mode)] = 0;
  };
  if (m >= 1) recurse(recurse, 0, n);
  return outcomes;
}

BunchingInstance make_instance(Interferometer interferometer, OutputSubset subset,
                               GramMatrix gram) {
  validate_interferometer(interferometer);
  validate_subset(subset, interferometer.modes());
  validate_gram(gram);
  if (gram.size() > interferometer.modes()) {
    throw std::invalid_argument("BunchingInstance: more photons than modes");
  }
  return BunchingInstance{std::move(interferometer), std::move(subset), std::move(gram)};
}

BunchingInstance make_instance(Interferometer interferometer, OutputSubset subset,
                               const InternalStateSet& states) {
  return make_instance(std::move(interferometer), std::move(subset), gram_from_states(states));
}

ComplexMatrix h_matrix(const BunchingInstance& instance) {
  const int n = instance.photons();
  ComplexMatrix rows(instance.subset.size(), n);
  for (int l = 0; l < instance.subset.size(); ++l) {
    rows.row(l) = instance.interferometer.u.row(instance.subset.modes[static_cast<std::size_t>(l)])
                      .leftCols(n);
  }
  return rows.adjoint() * rows;
}

double bunching_probability(const BunchingInstance& instance) {
  const ComplexMatrix h = h_matrix(instance);
  const ComplexMatrix product = hadamard_product(h, instance.gram.matrix.transpose());
  return real_probability(permanent_ryser(product), "bunching_probability");
}

double single_mode_bunching(const BunchingInstance& instance) {
  if (instance.subset.size() != 1) {
    throw std::invalid_argument("single_mode_bunching: subset must contain exactly one mode");
  }
  const int k = instance.subset.modes[0];
  double prefactor = 1.0;
  for (int j = 0; j < instance.photons(); ++j) {
    prefactor *= std::norm(instance.interferometer.u(k, j));
  }
  const Complex perm = permanent_ryser(instance.gram.matrix);
  return real_probability(prefactor * perm, "single_mode_bunching");
}

double fermionic_bunching_probability(const BunchingInstance& instance) {
  const ComplexMatrix h = h_matrix(instance);
  const ComplexMatrix product = hadamard_product(h, instance.gram.matrix.transpose());
  return real_probability(determinant(product), "fermionic_bunching_probability");
}

double event_probability(const BunchingInstance& instance, const OutcomeSpec& outcome) {
  check_outcome(instance, outcome);
  const int n = instance.photons();
  if (n > 9) {
    throw std::invalid_argument("event_probability: n > 9 exceeds the n! reduction cap");
  }
  const ComplexMatrix& u = instance.interferometer.u;
  const ComplexMatrix& s = instance.gram.matrix;
  const std::vector<int>& d = outcome.assignment;

  // Fixing the second permutation rho, the sum over the first collapses to the
  // permanent of V with V(j, k) = conj(u(d_j, k)) S(rho_j, k).
  std::vector<int> rho(static_cast<std::size_t>(n));
  std::iota(rho.begin(), rho.end(), 0);
  Complex total(0.0, 0.0);
  ComplexMatrix v(n, n);
  do {
    Complex prefactor(1.0, 0.0);
    for (int j = 0; j < n; ++j) {
      prefactor *= u(d[static_cast<std::size_t>(j)], rho[static_cast<std::size_t>(j)]);
    }
    for (int j = 0; j < n; ++j) {
      const int dj = d[static_cast<std::size_t>(j)];
      const int rj = rho[static_cast<std::size_t>(j)];
      for (int k = 0; k < n; ++k) {
        v(j, k) = std::conj(u(dj, k)) * s(rj, k);
      }
    }
    total += prefactor * permanent_ryser(v);
  } while (std::next_permutation(rho.begin(), rho.end()));

  return real_probability(total / occupation_mu(outcome.occupation), "event_probability");
}

double event_probability_naive(const BunchingInstance& instance, const OutcomeSpec& outcome) {
  check_outcome(instance, outcome);
  const int n = instance.photons();
  if (n > 5) {
    throw std::invalid_argument("event_probability_naive: n > 5 exceeds the (n!)^2 cap");
  }
  const ComplexMatrix& u = instance.interferometer.u;
  const ComplexMatrix& s = instance.gram.matrix;
  const std::vector<int>& d = outcome.assignment;

  std::vector<int> sigma(static_cast<std::size_t>(n));
  std::iota(sigma.begin(), sigma.end(), 0);
  Complex total(0.0, 0.0);
  do {
    std::vector<int> rho(static_cast<std::size_t>(n));
    std::iota(rho.begin(), rho.end(), 0);
    do {
      Complex term(1.0, 0.0);
      for (int j = 0; j < n; ++j) {
        const int dj = d[static_cast<std::size_t>(j)];
        const int sj = sigma[static_cast<std::size_t>(j)];
        const int rj = rho[static_cast<std::size_t>(j)];
        term *= std::conj(u(dj, sj)) * u(dj, rj) * s(rj, sj);
      }
      total += term;
    } while (std::next_permutation(rho.begin(), rho.end()));
  } while (std::next_permutation(sigma.begin(), sigma.end()));

  return real_probability(total / occupation_mu(outcome.occupation), "event_probability_naive");
}

std::vector<std::pair<int, double>> conditional_bunched_distribution(
    const BunchingInstance& instance) {
  if (instance.subset.size() != 2) {
    throw std::invalid_argument("conditional_bunched_distribution: subset must have two modes");
  }
  const int n = instance.photons();
  if (n > 9) {
    throw std::invalid_argument("conditional_bunched_distribution: n > 9");
  }
  const double total = bunching_probability(instance);
  if (total <= 1e-12) {
    throw std::domain_error("conditional_bunched_distribution: bunching probability is zero");
  }
  const int m = instance.interferometer.modes();
  std::vector<std::pair<int, double>> rows;
  rows.reserve(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    std::vector<int> occupation(static_cast<std::size_t>(m), 0);
    occupation[static_cast<std::size_t>(instance.subset.modes[0])] = j;
    occupation[static_cast<std::size_t>(instance.subset.modes[1])] = n - j;
    const double p = event_probability(instance, outcome_from_occupation(std::move(occupation)));
    rows.emplace_back(j, p / total);
  }
  return rows;
}

double fock_oracle_event_probability(const Interferometer& interferometer,
                                     const InternalStateSet& states, const OutcomeSpec& outcome) {
  validate_interferometer(interferometer);
  validate_states(states);
  const int m = interferometer.modes();
  const int n = states.count();
  const int r = states.dim();
  if (n > 5 || m > 7) {
    throw std::invalid_argument("fock_oracle_event_probability: limited to n <= 5, m <= 7");
  }
  if (static_cast<int>(outcome.occupation.size()) != m ||
      std::accumulate(outcome.occupation.begin(), outcome.occupation.end(), 0) != n) {
    throw std::invalid_argument("fock_oracle_event_probability: bad outcome");
  }

  // Joint output vector of photon a over (mode k, internal basis index b),
  // flattened as k * r + b. Amplitude convention: amp(a -> k) = conj(u(k, a)).
  const int joint_dim = m * r;
  ComplexMatrix chi(joint_dim, n);
  for (int a = 0; a < n; ++a) {
    for (int k = 0; k < m; ++k) {
      const Complex amp = std::conj(interferometer.u(k, a));
      for (int b = 0; b < r; ++b) {
        chi(k * r + b, a) = amp * states.vectors(b, a);
      }
    }
  }

  // Sum |perm|^2 / mult! over all joint-state multisets whose spatial
  // projection matches the requested occupation.
  double probability = 0.0;
  std::vector<int> tuple(static_cast<std::size_t>(n), 0);
  ComplexMatrix x(n, n);
  auto recurse = [&](auto&& self, int slot, int min_index) -> void {
    if (slot == n) {
      std::vector<int> spatial(static_cast<std::size_t>(m), 0);
      for (int t : tuple) ++spatial[static_cast<std::size_t>(t / r)];
      if (spatial != outcome.occupation) return;

      double mult_factor = 1.0;
      int run = 1;
      for (int i = 1; i < n; ++i) {
        if (tuple[static_cast<std::size_t>(i)] == tuple[static_cast<std::size_t>(i - 1)]) {
          ++run;
          mult_factor *= run;
        } else {
          run = 1;
        }
      }
      for (int a = 0; a < n; ++a) {
        for (int i = 0; i < n; ++i) {
          x(a, i) = chi(tuple[static_cast<std::size_t>(i)], a);
        }
      }
      probability += std::norm(permanent_ryser(x)) / mult_factor;
      return;
    }
    for (int j = min_index; j < joint_dim; ++j) {
      tuple[static_cast<std::size_t>(slot)] = j;
      self(self, slot + 1, j);
    }
  };
  recurse(recurse, 0, 0);
  return probability;
}

Complex first_order_perturbation_predictor(const ComplexMatrix& a, const ComplexMatrix& delta_dir,
                                           double delta) {
  require_square(a, "first_order_perturbation_predictor");
  require_same_shape(a, delta_dir, "first_order_perturbation_predictor");
  Complex estimate = permanent_ryser(a);
  if (delta == 0.0) return estimate;
  const Eigen::Index n = a.rows();
  Complex correction(0.0, 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (delta_dir(i, j) == Complex(0.0, 0.0)) continue;
      correction += delta_dir(i, j) * permanent_ryser(minor_matrix(a, i, j));
    }
  }
  return estimate + delta * correction;
}

double stability_direction_check(const ComplexMatrix& a, const std::vector<double>& x) {
  require_square(a, "stability_direction_check");
  const Eigen::Index n = a.rows();
  if (static_cast<Eigen::Index>(x.size()) != n) {
    throw std::invalid_argument("stability_direction_check: direction length mismatch");
  }

  ComplexMatrix direction(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      direction(i, j) = Complex(0.0, x[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(i)]);
    }
  }

  auto value_at = [&](double delta) {
    ComplexMatrix s = all_ones(n) + delta * direction;
    const Complex perm = permanent_ryser(hadamard_product(a, s.transpose()));
    return perm.real();
  };
  const double step = 1e-5;
  return (value_at(step) - value_at(-step)) / (2.0 * step);
}

}  // namespace bunching
