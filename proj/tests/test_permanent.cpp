// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "bunching/kahan.hpp"
#include "bunching/matrix.hpp"
#include "bunching/permanent.hpp"
#include "bunching/rng.hpp"

using namespace bunching;

namespace {

ComplexMatrix random_complex(int n, std::mt19937_64& rng) {
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = complex_gaussian(rng);
  }
  return m;
}

ComplexMatrix random_psd(int n, std::mt19937_64& rng) {
  const ComplexMatrix g = random_complex(n, rng);
  return g.adjoint() * g;
}

double rel_error(const Complex& a, const Complex& b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

TEST_CASE("permanent of the empty matrix is 1") {
  CHECK(permanent_ryser(ComplexMatrix(0, 0)) == Complex(1.0, 0.0));
  CHECK(permanent_naive(ComplexMatrix(0, 0)) == Complex(1.0, 0.0));
  CHECK(permanent_glynn(ComplexMatrix(0, 0)) == Complex(1.0, 0.0));
}

TEST_CASE("permanent of the all-ones matrix is n!") {
  CHECK(permanent_ryser(all_ones(2)).real() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(permanent_ryser(all_ones(7)).real() == doctest::Approx(5040.0).epsilon(1e-12));
  CHECK(permanent_naive(all_ones(4)).real() == doctest::Approx(24.0).epsilon(1e-12));
}

TEST_CASE("naive permanent on pinned matrices") {
  CHECK(permanent_naive(ComplexMatrix::Identity(3, 3)) == Complex(1.0, 0.0));

  ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
  diag(0, 0) = Complex(2.5, -1.0);
  diag(1, 1) = Complex(0.5, 3.0);
  const Complex expected = diag(0, 0) * diag(1, 1);
  CHECK(std::abs(permanent_naive(diag) - expected) < 1e-12);
}

TEST_CASE("ryser matches the naive oracle on random complex matrices") {
  std::mt19937_64 rng = substream(42);
  for (int n = 1; n <= 8; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      const ComplexMatrix m = random_complex(n, rng);
      CHECK(rel_error(permanent_ryser(m), permanent_naive(m)) < 1e-10);
    }
  }
}

TEST_CASE("glynn matches ryser") {
  std::mt19937_64 rng = substream(43);
  for (int n = 1; n <= 9; ++n) {
    const ComplexMatrix m = random_complex(n, rng);
    CHECK(rel_error(permanent_glynn(m), permanent_ryser(m)) < 1e-10);
  }
}

TEST_CASE("ryser value does not depend on the worker count") {
  std::mt19937_64 rng = substream(44);
  const ComplexMatrix m = random_complex(22, rng);
  const Complex serial = permanent_ryser(m, 1);
  const Complex parallel = permanent_ryser(m, 4);
  CHECK(serial.real() == parallel.real());
  CHECK(serial.imag() == parallel.imag());
}

TEST_CASE("non-square inputs are rejected") {
  CHECK_THROWS_AS(permanent_ryser(ComplexMatrix::Zero(2, 3)), std::invalid_argument);
  CHECK_THROWS_AS(permanent_naive(ComplexMatrix::Zero(3, 2)), std::invalid_argument);
  CHECK_THROWS_AS(determinant(ComplexMatrix::Zero(1, 2)), std::invalid_argument);
}

TEST_CASE("naive permanent rejects n > 10") {
  CHECK_THROWS_AS(permanent_naive(ComplexMatrix::Zero(11, 11)), std::invalid_argument);
}

TEST_CASE("determinant basics") {
  CHECK(std::abs(determinant(ComplexMatrix::Identity(5, 5)) - Complex(1.0, 0.0)) < 1e-12);

  ComplexMatrix m(2, 2);
  m << Complex(1.0, 2.0), Complex(-0.5, 0.3), Complex(2.0, -1.0), Complex(0.25, 0.75);
  const Complex expected = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  CHECK(std::abs(determinant(m) - expected) < 1e-12);

  std::mt19937_64 rng = substream(45);
  ComplexMatrix singular = random_complex(4, rng);
  singular.row(2) = singular.row(0);
  CHECK(std::abs(determinant(singular)) < 1e-12);
}

TEST_CASE("determinant matches cofactor expansion") {
  std::mt19937_64 rng = substream(46);
  for (int rep = 0; rep < 5; ++rep) {
    const ComplexMatrix m = random_complex(4, rng);
    // Laplace expansion along the first row, fully independent of the LU path.
    Complex expected(0.0, 0.0);
    auto det3 = [](const ComplexMatrix& a) {
      return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
             a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
             a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    };
    double sign = 1.0;
    for (int j = 0; j < 4; ++j) {
      expected += sign * m(0, j) * det3(minor_matrix(m, 0, j));
      sign = -sign;
    }
    CHECK(rel_error(determinant(m), expected) < 1e-12);
  }
}

TEST_CASE("minor drops the requested row and column") {
  CHECK(minor_matrix(ComplexMatrix::Identity(3, 3), 0, 0) == ComplexMatrix::Identity(2, 2));

  ComplexMatrix m(2, 2);
  m << Complex(1, 0), Complex(2, 0), Complex(3, 0), Complex(4, 0);
  const ComplexMatrix cut = minor_matrix(m, 0, 1);
  REQUIRE(cut.rows() == 1);
  CHECK(cut(0, 0) == Complex(3, 0));

  CHECK_THROWS_AS(minor_matrix(m, 2, 0), std::out_of_range);
}

TEST_CASE("permanent satisfies the Laplace-style expansion") {
  std::mt19937_64 rng = substream(47);
  const ComplexMatrix m = random_complex(5, rng);
  Complex expansion(0.0, 0.0);
  for (int j = 0; j < 5; ++j) {
    expansion += m(0, j) * permanent_ryser(minor_matrix(m, 0, j));
  }
  CHECK(rel_error(expansion, permanent_ryser(m)) < 1e-10);
}

TEST_CASE("hadamard product") {
  std::mt19937_64 rng = substream(48);
  const ComplexMatrix a = random_complex(4, rng);

  CHECK((hadamard_product(a, all_ones(4)) - a).cwiseAbs().maxCoeff() < 1e-15);

  const ComplexMatrix masked = hadamard_product(a, ComplexMatrix::Identity(4, 4));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(masked(i, j) == (i == j ? a(i, j) : Complex(0.0, 0.0)));
    }
  }

  const ComplexMatrix b = random_complex(4, rng);
  const ComplexMatrix p = hadamard_product(a, b);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(std::abs(p(i, j) - a(i, j) * b(i, j)) < 1e-15);
    }
  }

  CHECK_THROWS_AS(hadamard_product(a, ComplexMatrix::Zero(3, 4)), std::invalid_argument);
}

TEST_CASE("permanents of PSD matrices are real and nonnegative") {
  std::mt19937_64 rng = substream(49);
  for (int n = 2; n <= 7; ++n) {
    for (int rep = 0; rep < 10; ++rep) {
      const Complex perm = permanent_ryser(random_psd(n, rng));
      CHECK(perm.real() >= -1e-10);
      CHECK(std::abs(perm.imag()) <= 1e-10 * std::max(1.0, perm.real()));
    }
  }
}

TEST_CASE("permanent is invariant under row permutations") {
  std::mt19937_64 rng = substream(50);
  const ComplexMatrix m = random_complex(6, rng);
  ComplexMatrix shuffled(6, 6);
  const int order[6] = {3, 0, 5, 1, 4, 2};
  for (int i = 0; i < 6; ++i) shuffled.row(i) = m.row(order[i]);
  CHECK(rel_error(permanent_ryser(m), permanent_ryser(shuffled)) < 1e-12);
}

TEST_CASE("permanent is linear in each row") {
  std::mt19937_64 rng = substream(51);
  ComplexMatrix m = random_complex(5, rng);
  const ComplexMatrix u = random_complex(5, rng);
  const Complex alpha(0.7, -0.3);
  const Complex beta(-1.2, 0.4);

  ComplexMatrix ma = m, mb = m, mc = m;
  ma.row(2) = alpha * m.row(2) + beta * u.row(2);
  mb.row(2) = m.row(2);
  mc.row(2) = u.row(2);
  const Complex combined = permanent_ryser(ma);
  const Complex split = alpha * permanent_ryser(mb) + beta * permanent_ryser(mc);
  CHECK(rel_error(combined, split) < 1e-10);
}

TEST_CASE("Oppenheim inequality for determinants of PSD matrices") {
  std::mt19937_64 rng = substream(52);
  for (int n = 2; n <= 6; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      const ComplexMatrix a = random_psd(n, rng);
      const ComplexMatrix b = random_psd(n, rng);
      const double lhs = determinant(hadamard_product(a, b)).real();
      const double rhs = determinant(a).real() * determinant(b).real();
      CHECK(lhs >= rhs - 1e-10 * std::max(1.0, std::abs(rhs)));
    }
  }
}
