#include "oracle.hpp"
#include "palab/error.hpp"
#include "palab/random.hpp"

#include <doctest.h>

#include <array>

using namespace palab;

TEST_CASE("trial streams are reproducible and distinct") {
  Rng a = trial_rng(7, 3), b = trial_rng(7, 3), c = trial_rng(7, 4), d = trial_rng(8, 3);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(x != d());
}

TEST_CASE("haar states and unitaries are normalized") {
  Rng rng(1);
  for (std::size_t d : {1, 2, 5, 16}) {
    CHECK(haar_state(d, rng).norm() == doctest::Approx(1.0));
    const Matrix u = haar_unitary(d, rng);
    CHECK(oracle::max_abs(u * u.adjoint() - Matrix::Identity(d, d)) < 1e-12);
  }
}

TEST_CASE("random_density has the requested rank and unit trace") {
  Rng rng(2);
  const Matrix rho = random_density(6, 2, rng);
  CHECK(rho.trace().real() == doctest::Approx(1.0));
  const auto es = eig_hermitian(rho);
  CHECK(es.values(1) > 1e-6);
  CHECK(std::abs(es.values(2)) < 1e-12);
  CHECK(oracle::min_eig(rho) > -1e-12);
  CHECK_THROWS_AS(random_density(3, 0, rng), ValidationError);
  CHECK_THROWS_AS(random_density(3, 4, rng), ValidationError);
}

TEST_CASE("random_hermitian has unit operator norm") {
  Rng rng(3);
  const Matrix h = random_hermitian(5, rng);
  CHECK(is_hermitian(h));
  CHECK(operator_norm(h) == doctest::Approx(1.0));
}

TEST_CASE("unitary_exp of Pauli Z") {
  const Matrix u = unitary_exp(oracle::pauli_z(), 0.3);
  CHECK(std::abs(u(0, 0) - std::polar(1.0, 0.3)) < 1e-12);
  CHECK(std::abs(u(1, 1) - std::polar(1.0, -0.3)) < 1e-12);
  CHECK(std::abs(u(0, 1)) < 1e-12);
}

TEST_CASE("sample_index follows the weights") {
  Rng rng(4);
  const std::array<double, 3> w{0.0, 3.0, 1.0};
  std::array<int, 3> counts{};
  for (int t = 0; t < 20000; ++t) ++counts[sample_index(w, rng)];
  CHECK(counts[0] == 0);
  CHECK(counts[1] / 20000.0 == doctest::Approx(0.75).epsilon(0.03));
  const std::array<double, 2> zero{0.0, 0.0};
  CHECK_THROWS_AS(sample_index(zero, rng), DegenerateError);
}
