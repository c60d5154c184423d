#include "oracle.hpp"
#include "palab/error.hpp"
#include "palab/infotheory.hpp"
#include "palab/samplers.hpp"
#include "palab/states.hpp"

#include <doctest.h>

#include <array>
#include <numbers>

using namespace palab;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// sqrt(Tr rho sigma + 2 sqrt(det rho det sigma)) for qubits
double qubit_fidelity(const Matrix& r, const Matrix& s) {
  const double det_r = (r(0, 0) * r(1, 1) - r(0, 1) * r(1, 0)).real();
  const double det_s = (s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0)).real();
  const double f2 = (r * s).trace().real() + 2.0 * std::sqrt(std::max(0.0, det_r * det_s));
  return std::sqrt(f2);
}

Ensemble two(const Matrix& a, const Matrix& b) { return {{0.5, 0.5}, {a, b}}; }

}  // namespace

TEST_CASE("entropy of simple states") {
  CHECK(von_neumann_entropy(oracle::proj(basis_vector(3, 1))) == doctest::Approx(0.0));
  CHECK(von_neumann_entropy(Matrix::Identity(2, 2) / 2.0) == doctest::Approx(1.0));
  CHECK(von_neumann_entropy(Matrix::Identity(8, 8) / 8.0) == doctest::Approx(3.0));
  const Matrix avg = 0.5 * (oracle::proj(basis_vector(2, 0)) + oracle::proj(x_basis_state(2, 0)));
  CHECK(von_neumann_entropy(avg) == doctest::Approx(oracle::qubit_entropy(avg)).epsilon(1e-12));
  CHECK(von_neumann_entropy(avg) == doctest::Approx(oracle::h2((1 + kInvSqrt2) / 2)).epsilon(1e-12));
}

TEST_CASE("entropy matches the closed form on random qubits") {
  Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    const Matrix r = oracle::random_state(2, rng);
    REQUIRE(std::abs(von_neumann_entropy(r) - oracle::qubit_entropy(r)) < 1e-12);
  }
}

TEST_CASE("Shannon and binary entropy") {
  const std::array<double, 4> p{0.25, 0.25, 0.5, 0.0};
  CHECK(shannon_entropy(p) == doctest::Approx(1.5));
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(0.11) == doctest::Approx(oracle::h2(0.11)));
}

TEST_CASE("Holevo quantity") {
  const Matrix z0 = oracle::proj(basis_vector(2, 0)), z1 = oracle::proj(basis_vector(2, 1));
  const Matrix plus = oracle::proj(x_basis_state(2, 0));
  CHECK(holevo_chi(two(z0, z0)) == doctest::Approx(0.0));
  CHECK(holevo_chi(two(z0, z1)) == doctest::Approx(1.0));
  CHECK(holevo_chi(two(z0, plus)) ==
        doctest::Approx(oracle::qubit_entropy(0.5 * (z0 + plus))).epsilon(1e-12));
}

TEST_CASE("Holevo quantity lies between zero and H(p)") {
  Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    std::uniform_real_distribution<double> u(0.05, 0.95);
    const double p = u(rng);
    Ensemble e{{p, 1 - p}, {oracle::random_state(3, rng), oracle::random_state(3, rng)}};
    const double chi = holevo_chi(e);
    REQUIRE(chi >= -1e-12);
    REQUIRE(chi <= oracle::h2(p) + 1e-12);
  }
}

TEST_CASE("ensemble validation") {
  Ensemble bad{{0.5, 0.4}, {Matrix::Identity(2, 2) / 2.0, Matrix::Identity(2, 2) / 2.0}};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  Ensemble mismatch{{0.5, 0.5}, {Matrix::Identity(2, 2) / 2.0, Matrix::Identity(3, 3) / 3.0}};
  CHECK_THROWS(mismatch.validate());
}

TEST_CASE("mutual information between key and Eve") {
  const Vector zero = basis_vector(2, 0), one = basis_vector(2, 1);
  CHECK(mutual_info_ke(attack_state(zero, zero)) == doctest::Approx(0.0));
  CHECK(mutual_info_ke(attack_state(zero, one)) == doctest::Approx(1.0));
  const double th = std::numbers::pi / 4;
  const Matrix avg = 0.5 * (oracle::proj(zero) + oracle::proj(oracle::ket({std::cos(th), std::sin(th)})));
  CHECK(mutual_info_ke(theta_attack(th)) == doctest::Approx(oracle::qubit_entropy(avg)).epsilon(1e-12));
}

TEST_CASE("mutual information rejects key coherences") {
  Matrix rho = Matrix::Zero(8, 8);
  rho(0, 0) = rho(6, 6) = rho(0, 6) = rho(6, 0) = 0.5;
  const auto s = MultipartiteState::mixed(rho, {{Role::A, 2}, {Role::B, 2}, {Role::E, 2}});
  CHECK_THROWS_AS(mutual_info_ke(s), ValidationError);
}

TEST_CASE("key rates at the extremes") {
  const Vector zero = basis_vector(2, 0), one = basis_vector(2, 1);
  const auto secret = key_rates(purify_with_shield(attack_state(zero, zero)));
  CHECK(secret.pa == doctest::Approx(1.0));
  CHECK(secret.psd == doctest::Approx(1.0));
  const auto open = key_rates(purify_with_shield(attack_state(zero, one)));
  CHECK(std::abs(open.pa) < 1e-12);
  CHECK(std::abs(open.psd) < 1e-12);
}

TEST_CASE("key rates of the pi/4 attack") {
  const auto r = key_rates(purify_with_shield(theta_attack(std::numbers::pi / 4)));
  const double expected = 1.0 - oracle::h2((1 + kInvSqrt2) / 2);
  CHECK(std::abs(r.pa - expected) < 1e-9);
  CHECK(std::abs(r.psd - expected) < 1e-9);
  CHECK(expected == doctest::Approx(0.3991).epsilon(1e-3));
}

TEST_CASE("the two rates agree on random two-state attacks") {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const auto abe = random_two_state_attack(1 + t % 4, rng);
    const auto ks = measure_key(abe);
    const cplx overlap = (ks.eve_given_alice[0] * ks.eve_given_alice[1]).trace();
    const auto r = key_rates(purify_with_shield(abe));
    REQUIRE(std::abs(r.pa - r.psd) < 1e-9);
    REQUIRE(std::abs(r.pa - oracle::two_state_rate(std::sqrt(std::abs(overlap)))) < 1e-9);
  }
}

TEST_CASE("trace distance") {
  const Matrix z0 = oracle::proj(basis_vector(2, 0)), z1 = oracle::proj(basis_vector(2, 1));
  CHECK(trace_distance(z0, z0) == doctest::Approx(0.0));
  CHECK(trace_distance(z0, z1) == doctest::Approx(2.0));
  // attack(|0>,|1>) against the key with Eve's average marginal: four entries of 1/4
  const auto rho = attack_state(basis_vector(2, 0), basis_vector(2, 1));
  const auto kappa = perfect_key(Matrix::Identity(2, 2) / 2.0);
  CHECK(trace_distance(rho.density(), kappa.density()) == doctest::Approx(1.0));
  CHECK_THROWS_AS(trace_distance(z0, Matrix::Identity(3, 3)), DimensionError);
}

TEST_CASE("trace distance obeys the triangle inequality") {
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    const Matrix a = oracle::random_state(4, rng), b = oracle::random_state(4, rng),
                 c = oracle::random_state(4, rng);
    REQUIRE(trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-9);
  }
}

TEST_CASE("fidelity against the qubit closed form and the pure overlap") {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const Matrix a = oracle::random_state(2, rng), b = oracle::random_state(2, rng);
    REQUIRE(std::abs(fidelity(a, b) - qubit_fidelity(a, b)) < 1e-9);
    const Vector psi = haar_state(4, rng);
    const Matrix s = oracle::random_state(4, rng);
    const double overlap = std::sqrt((psi.adjoint() * s * psi)(0, 0).real());
    REQUIRE(std::abs(fidelity(psi, s) - overlap) < 1e-10);
    REQUIRE(std::abs(fidelity(oracle::proj(psi), s) - overlap) < 1e-8);
  }
}

TEST_CASE("Fuchs-van de Graaf bound") {
  CHECK(fvg_bound(1.0) == doctest::Approx(0.0));
  CHECK(fvg_bound(0.0) == doctest::Approx(2.0));
  Rng rng(6);
  for (int t = 0; t < 500; ++t) {
    const std::size_t d = 2 + t % 3;
    const Matrix a = oracle::random_state(d, rng), b = oracle::random_state(d, rng);
    REQUIRE(trace_distance(a, b) <= fvg_bound(fidelity(a, b)) + 1e-9);
  }
}

TEST_CASE("entropic uncertainty for qubit measurements in z and x") {
  Rng rng(7);
  const Matrix z = Matrix::Identity(2, 2);
  const Matrix x = oracle::hadamard();
  for (int t = 0; t < 1000; ++t) {
    const Matrix r = random_density(2, 1 + t % 2, rng);
    REQUIRE(measurement_entropy(r, z) + measurement_entropy(r, x) >= 1.0 - 1e-9);
  }
  CHECK(measurement_entropy(oracle::proj(basis_vector(2, 0)), z) == doctest::Approx(0.0));
  CHECK(measurement_entropy(oracle::proj(basis_vector(2, 0)), x) == doctest::Approx(1.0));
}
