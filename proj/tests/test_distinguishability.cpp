// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "bunching/circuits.hpp"
#include "bunching/distinguishability.hpp"
#include "bunching/permanent.hpp"
#include "bunching/rng.hpp"

using namespace bunching;

namespace {

InternalStateSet random_states(int n, int r, std::mt19937_64& rng) {
  ComplexMatrix vectors(r, n);
  for (int j = 0; j < n; ++j) vectors.col(j) = random_unit_vector(rng, r);
  return InternalStateSet{std::move(vectors)};
}

constexpr double kFactorial7 = 5040.0;

}  // namespace

TEST_CASE("identical states give the all-ones Gram matrix") {
  ComplexMatrix vectors(3, 5);
  std::mt19937_64 rng = substream(1);
  const ComplexVector v = random_unit_vector(rng, 3);
  for (int j = 0; j < 5; ++j) vectors.col(j) = v;
  const GramMatrix gram = gram_from_states(InternalStateSet{std::move(vectors)});
  CHECK((gram.matrix - all_ones(5)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("orthogonal states give the identity Gram matrix") {
  const GramMatrix gram = gram_from_states(InternalStateSet{ComplexMatrix::Identity(4, 4)});
  CHECK((gram.matrix - ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("columns of the counterexample factor have perm(S) = 45") {
  const auto [a, m] = drury_matrices();
  const GramMatrix gram = gram_from_states(InternalStateSet{m});
  CHECK((gram.matrix - a.matrix).cwiseAbs().maxCoeff() < 1e-12);
  const double perm = permanent_ryser(gram.matrix).real();
  CHECK(perm == doctest::Approx(45.0).epsilon(1e-10));
  CHECK(symmetric_component(gram) == doctest::Approx(45.0 / kFactorial7).epsilon(1e-10));
}

TEST_CASE("non-normalized states are rejected") {
  ComplexMatrix vectors = ComplexMatrix::Identity(2, 2);
  vectors(0, 0) = Complex(2.0, 0.0);
  CHECK_THROWS_AS(gram_from_states(InternalStateSet{vectors}), std::invalid_argument);
}

TEST_CASE("states_from_gram on the identity yields an orthonormal basis") {
  const InternalStateSet states = states_from_gram(gram_distinguishable(3));
  CHECK(states.count() == 3);
  CHECK(states.dim() == 3);
  const GramMatrix round = gram_from_states(states);
  CHECK((round.matrix - ComplexMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("states_from_gram on the all-ones matrix is rank one") {
  const InternalStateSet states = states_from_gram(gram_indistinguishable(4));
  CHECK(states.dim() == 1);
  for (int j = 0; j < 4; ++j) {
    CHECK(std::abs(states.vectors(0, j) - states.vectors(0, 0)) < 1e-10);
  }
}

TEST_CASE("states_from_gram recovers the rank-2 counterexample matrix") {
  const auto [a, m] = drury_matrices();
  const InternalStateSet states = states_from_gram(a);
  CHECK(states.dim() == 2);
  const GramMatrix round = gram_from_states(states);
  CHECK((round.matrix - a.matrix).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("gram/states round trip on random low-rank matrices") {
  std::mt19937_64 rng = substream(2);
  for (int n = 2; n <= 6; ++n) {
    for (int r = 1; r <= std::min(n, 3); ++r) {
      const GramMatrix gram = gram_from_states(random_states(n, r, rng));
      const GramMatrix round = gram_from_states(states_from_gram(gram));
      CHECK((round.matrix - gram.matrix).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("non-PSD matrices are rejected") {
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  bad(0, 1) = Complex(2.0, 0.0);
  bad(1, 0) = Complex(2.0, 0.0);
  CHECK_THROWS_AS(make_gram(bad), std::invalid_argument);
}

TEST_CASE("star states") {
  const InternalStateSet one = star_states(1);
  CHECK(one.count() == 1);
  CHECK(std::abs(one.vectors(0, 0) - Complex(1.0 / std::sqrt(2.0), 0.0)) < 1e-15);
  CHECK(std::abs(one.vectors(1, 0) - Complex(1.0 / std::sqrt(2.0), 0.0)) < 1e-15);

  const int q = 5;
  const GramMatrix gram = gram_from_states(star_states(q));
  for (int i = 0; i < q; ++i) {
    for (int j = 0; j < q; ++j) {
      const double angle = 2.0 * std::numbers::pi * (((j - i) % q + q) % q) / q;
      const Complex expected = 0.5 * (Complex(1.0, 0.0) + Complex(std::cos(angle), std::sin(angle)));
      CHECK(std::abs(gram.matrix(i, j) - expected) < 1e-12);
    }
  }

  CHECK_THROWS_AS(star_states(0), std::invalid_argument);
}

TEST_CASE("violation family at n = 4") {
  const InternalStateSet states = violation_family_states(4);
  REQUIRE(states.count() == 4);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(states.vectors(0, 0) - Complex(inv_sqrt2, 0)) < 1e-12);
  CHECK(std::abs(states.vectors(1, 0) - Complex(inv_sqrt2, 0)) < 1e-12);
  CHECK(std::abs(states.vectors(0, 1) - Complex(inv_sqrt2, 0)) < 1e-12);
  CHECK(std::abs(states.vectors(1, 1) + Complex(inv_sqrt2, 0)) < 1e-12);
  // vertical on mode 0', horizontal on mode 1'
  CHECK(std::abs(states.vectors(0, 2)) < 1e-15);
  CHECK(std::abs(states.vectors(1, 2) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(states.vectors(0, 3) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(states.vectors(1, 3)) < 1e-15);

  CHECK_THROWS_AS(violation_family_states(3), std::invalid_argument);
}

TEST_CASE("family Gram equals the counterexample matrix up to relabeling") {
  const auto [a, m] = drury_matrices();
  const GramMatrix star = gram_from_states(violation_family_states(7));
  // Circuit ordering [star_0..star_4, V, H] maps to counterexample columns
  // [2..6, 1, 0].
  const int perm[7] = {2, 3, 4, 5, 6, 1, 0};
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 7; ++j) {
      CHECK(std::abs(star.matrix(i, j) - a.matrix(perm[i], perm[j])) < 1e-12);
    }
  }
  CHECK(symmetric_component(star) == doctest::Approx(45.0 / kFactorial7).epsilon(1e-10));
}

TEST_CASE("interpolated Gram matrix endpoints") {
  CHECK((interpolated_gram(1.0, 0.0).matrix - all_ones(7)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((interpolated_gram(0.0, 1.0).matrix - ComplexMatrix::Identity(7, 7))
            .cwiseAbs()
            .maxCoeff() < 1e-15);
  const GramMatrix star = gram_from_states(violation_family_states(7));
  CHECK((interpolated_gram(0.0, 0.0).matrix - star.matrix).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(interpolated_gram(0.8, 0.4), std::invalid_argument);
  CHECK_THROWS_AS(interpolated_gram(-0.1, 0.2), std::invalid_argument);
}

TEST_CASE("interpolated Gram matrices are valid across a simplex grid") {
  for (double x = 0.0; x <= 1.0 + 1e-12; x += 0.05) {
    for (double y = 0.0; x + y <= 1.0 + 1e-12; y += 0.05) {
      CHECK_NOTHROW(validate_gram(interpolated_gram(x, y)));
    }
  }
}

TEST_CASE("zero perturbation returns identical states") {
  std::mt19937_64 rng = substream(3);
  const InternalStateSet base = violation_family_states(7);
  const InternalStateSet out = perturb_states(base, 0.0, rng);
  CHECK((out.vectors - base.vectors).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("perturbed states stay unit-norm and are deterministic per stream") {
  const InternalStateSet base = violation_family_states(7);
  std::mt19937_64 rng_a = substream(4);
  std::mt19937_64 rng_b = substream(4);
  const InternalStateSet out_a = perturb_states(base, 0.1, rng_a);
  const InternalStateSet out_b = perturb_states(base, 0.1, rng_b);
  CHECK((out_a.vectors - out_b.vectors).cwiseAbs().maxCoeff() == 0.0);
  CHECK_NOTHROW(validate_states(out_a));
}

TEST_CASE("relative component change at epsilon = 0.135 is near 13 percent") {
  const InternalStateSet base = violation_family_states(7);
  double total = 0.0;
  int count = 0;
  for (int rep = 0; rep < 2000; ++rep) {
    std::mt19937_64 rng = substream(5, rep);
    const InternalStateSet out = perturb_states(base, 0.135, rng);
    for (int j = 0; j < base.count(); ++j) {
      for (int i = 0; i < base.dim(); ++i) {
        const double magnitude = std::abs(base.vectors(i, j));
        if (magnitude < 0.5) continue;  // skip exact-zero components of V and H
        total += std::abs(out.vectors(i, j) - base.vectors(i, j)) / magnitude;
        ++count;
      }
    }
  }
  const double mean_change = total / count;
  CHECK(mean_change > 0.08);
  CHECK(mean_change < 0.20);
}

TEST_CASE("symmetric component endpoints") {
  CHECK(symmetric_component(gram_distinguishable(7)) ==
        doctest::Approx(1.0 / kFactorial7).epsilon(1e-12));
  CHECK(symmetric_component(gram_indistinguishable(7)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("perm(S) is real and lies in [1, n!] for random Gram matrices") {
  std::mt19937_64 rng = substream(6);
  for (int n = 2; n <= 6; ++n) {
    double factorial = 1.0;
    for (int k = 2; k <= n; ++k) factorial *= k;
    for (int rep = 0; rep < 10; ++rep) {
      const int r = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
      const GramMatrix gram = gram_from_states(random_states(n, r, rng));
      const Complex perm = permanent_ryser(gram.matrix);
      CHECK(std::abs(perm.imag()) < 1e-10 * std::max(1.0, perm.real()));
      CHECK(perm.real() >= 1.0 - 1e-9);
      CHECK(perm.real() <= factorial * (1.0 + 1e-12));
    }
  }
}
