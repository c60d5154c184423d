#include "oracle.hpp"
#include "palab/coding.hpp"
#include "palab/error.hpp"
#include "palab/states.hpp"

#include <doctest.h>

#include <array>
#include <numbers>

using namespace palab;

namespace {

Ensemble letters(const Vector& a, const Vector& b, double p0 = 0.5) {
  return {{p0, 1 - p0}, {oracle::proj(a), oracle::proj(b)}};
}

Vector theta_ket(double th) { return oracle::ket({std::cos(th), std::sin(th)}); }

Matrix tensor_power(const Matrix& m, unsigned n) {
  Matrix out = Matrix::Identity(1, 1);
  for (unsigned i = 0; i < n; ++i) out = oracle::kron(out, m);
  return out;
}

double binom(unsigned n, unsigned k) {
  double c = 1.0;
  for (unsigned i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

CodingOptions plain() { return {false, false}; }

// Unitary from the Q factor of a Ginibre matrix.
Matrix random_unitary(std::size_t d, Rng& rng) {
  Eigen::HouseholderQR<Matrix> qr(oracle::ginibre(d, d, rng));
  return qr.householderQ();
}

}  // namespace

TEST_CASE("typical projector of the maximally mixed state is the identity") {
  for (unsigned n = 1; n <= 4; ++n) {
    const std::size_t d = std::size_t{1} << n;
    CHECK(oracle::max_abs(typical_projector(Matrix::Identity(2, 2) / 2.0, n, 0.01) -
                          Matrix::Identity(d, d)) < 1e-12);
  }
}

TEST_CASE("typical projector of a pure state is its tensor power") {
  Rng rng(1);
  const Matrix r = oracle::proj(haar_state(2, rng));
  CHECK(oracle::max_abs(typical_projector(r, 3, 0.1) - tensor_power(r, 3)) < 1e-10);
}

TEST_CASE("typical projector rank counts the typical eigen-strings") {
  const Matrix avg = 0.5 * (oracle::proj(basis_vector(2, 0)) + oracle::proj(theta_ket(std::numbers::pi / 4)));
  const auto [l1, l2] = oracle::eig2(avg);
  const double s = oracle::qubit_entropy(avg);
  for (unsigned n = 1; n <= 6; ++n)
    for (double delta : {0.05, 0.2, 0.5}) {
      double expected = 0.0;
      for (unsigned k = 0; k <= n; ++k) {
        const double surprisal = -double(n - k) * std::log2(l1) - double(k) * std::log2(l2);
        if (std::abs(surprisal - n * s) <= n * delta) expected += binom(n, k);
      }
      REQUIRE(typical_projector(avg, n, delta).trace().real() == doctest::Approx(expected));
    }
}

TEST_CASE("typical projector sandwiches the tensor power between the window edges") {
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    const Matrix r = oracle::random_state(2, rng);
    const double n = 2 + t % 3;
    const double delta = 0.1, s = oracle::qubit_entropy(r);
    const Matrix pi = typical_projector(r, unsigned(n), delta);
    const Matrix mid = pi * tensor_power(r, unsigned(n)) * pi;
    REQUIRE(oracle::min_eig(mid - std::exp2(-n * (s + delta)) * pi) > -1e-10);
    REQUIRE(oracle::min_eig(std::exp2(-n * (s - delta)) * pi - mid) > -1e-10);
    REQUIRE(oracle::max_abs(pi * pi - pi) < 1e-10);
  }
}

TEST_CASE("conditional typical projector of pure letters is the string state") {
  const auto e = letters(basis_vector(2, 0), theta_ket(0.4));
  for (std::uint64_t x = 0; x < 8; ++x)
    REQUIRE(oracle::max_abs(conditional_typical_projector(e, x, 3, 0.1) - string_state(e, x, 3)) < 1e-10);
}

TEST_CASE("string states follow the letter order") {
  const auto e = letters(basis_vector(2, 0), basis_vector(2, 1));
  const Matrix s = string_state(e, 0b10, 2);  // |10><10|
  CHECK(s(2, 2).real() == doctest::Approx(1.0));
  CHECK(s.trace().real() == doctest::Approx(1.0));
}

TEST_CASE("strong typicality") {
  const std::array<double, 2> fair{0.5, 0.5};
  int count = 0;
  for (std::uint64_t x = 0; x < 16; ++x) count += is_typical_string(x, 4, fair, 0.1);
  CHECK(count == 6);
  const std::array<double, 2> skew{0.75, 0.25};
  CHECK(is_typical_string(0b0100, 4, skew, 0.01));
  CHECK_FALSE(is_typical_string(0b0110, 4, skew, 0.2));
  const std::array<double, 2> certain{1.0, 0.0};
  CHECK(is_typical_string(0, 4, certain, 0.5));
  CHECK_FALSE(is_typical_string(1, 4, certain, 0.5));
}

TEST_CASE("operator inequality at the extremes") {
  const Matrix id = Matrix::Identity(3, 3), zero = Matrix::Zero(3, 3);
  CHECK(std::abs(hn_lemma_check(id, zero)) < 1e-12);
  CHECK(hn_lemma_check(zero, zero) == doctest::Approx(1.0));
  CHECK_THROWS_AS(hn_lemma_check(2.0 * id, zero), ValidationError);
  CHECK_THROWS_AS(hn_lemma_check(id, -id), ValidationError);
  CHECK_THROWS_AS(hn_lemma_check(id, Matrix::Zero(2, 2)), DimensionError);
}

TEST_CASE("operator inequality on random pairs") {
  Rng rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 500; ++t) {
    const std::size_t d = std::size_t{2} << (t % 4);
    const Matrix u = random_unitary(d, rng);
    RealVector ev(static_cast<Eigen::Index>(d));
    for (auto& v : ev) v = unit(rng);
    const Matrix s = u * ev.cast<cplx>().asDiagonal() * u.adjoint();
    const Matrix g = oracle::ginibre(d, d, rng);
    const Matrix tm = 0.3 * g * g.adjoint();
    const double got = hn_lemma_check(s, tm);
    REQUIRE(got >= -1e-9);
    // independent evaluation with a dense inverse square root (S + T is invertible here)
    Eigen::SelfAdjointEigenSolver<Matrix> es(s + tm);
    const Matrix r = es.operatorInverseSqrt();
    const Matrix id = Matrix::Identity(d, d);
    const Matrix diff = 2.0 * (id - s) + 4.0 * tm - (id - r * s * r);
    Eigen::SelfAdjointEigenSolver<Matrix> ed(0.5 * (diff + diff.adjoint()));
    REQUIRE(std::abs(got - ed.eigenvalues().minCoeff()) < 1e-8);
  }
}

TEST_CASE("orthogonal letters decode without error") {
  CodingInstance inst{letters(basis_vector(2, 0), basis_vector(2, 1)), 3, 2, 0.1, 0.1};
  Rng rng(4);
  for (int t = 0; t < 5; ++t)
    CHECK(coding_error_exact(inst, random_linear_hash(1, 3, rng), plain()) < 1e-12);
}

TEST_CASE("an injective hash leaves nothing to decode") {
  Rng rng(5);
  CodingInstance inst{letters(basis_vector(2, 0), theta_ket(0.3), 0.4), 3, 8, 0.1, 0.1};
  CHECK(coding_error_exact(inst, BinaryMatrix::identity(3), plain()) < 1e-12);
  CHECK(coding_error_exact(inst, random_full_rank_hash(3, 3, rng), plain()) < 1e-12);
}

TEST_CASE("a single letter without hash is the two-state discrimination problem") {
  for (double th : {0.2, 0.7, 1.2}) {
    CodingInstance inst{letters(basis_vector(2, 0), theta_ket(th)), 1, 1, 0.1, 0.1};
    const double c = std::cos(th);
    const double helstrom_error = 0.5 * (1 - std::sqrt(1 - c * c));
    REQUIRE(coding_error_exact(inst, BinaryMatrix(0, 1), plain()) == doctest::Approx(helstrom_error));
  }
}

TEST_CASE("family average is the mean over every hash") {
  CodingInstance inst{letters(basis_vector(2, 0), theta_ket(0.5)), 3, 2, 0.2, 0.1};
  double sum = 0.0;
  for (std::uint64_t r = 0; r < 8; ++r) {
    BinaryMatrix f(1, 3);
    f.set_row(0, r);
    sum += coding_error_exact(inst, f);
  }
  CHECK(coding_error_family_average(inst) == doctest::Approx(sum / 8));
}

TEST_CASE("hash-averaged error stays below the bound") {
  Rng rng(6);
  for (int t = 0; t < 5; ++t) {
    const double th = 0.3 + 0.2 * t;
    const auto e = letters(basis_vector(2, 0), theta_ket(th));
    for (unsigned n = 2; n <= 3; ++n) {
      const double h = shannon_entropy(e.probabilities), chi = holevo_chi(e);
      CodingInstance inst{e, n, choose_output_size(h, chi, 0.1, n), 0.1, 0.05};
      REQUIRE(coding_error_family_average(inst) <= coding_error_bound(inst) + 1e-12);
      REQUIRE(coding_error_exact(inst, random_linear_hash(std::countr_zero(inst.output_size), n, rng)) <= 1.0);
    }
  }
}

TEST_CASE("bound formula") {
  CodingInstance inst{letters(basis_vector(2, 0), basis_vector(2, 1)), 4, 4, 0.1, 0.01};
  CHECK(coding_error_bound(inst) == doctest::Approx(0.08 + std::exp2(4 * 0.3)));
}

TEST_CASE("output size choice") {
  CHECK(choose_output_size(1.0, 1.0, 0.0, 5) == 1);
  const double chi = 1.0 - (1.0 - oracle::h2((1 + 1 / std::sqrt(2.0)) / 2));
  CHECK(choose_output_size(1.0, chi, 0.05, 4) == 8);
  CHECK_THROWS_AS(choose_output_size(0.5, 0.7, 0.1, 3), ValidationError);
}

TEST_CASE("instance validation") {
  CodingInstance inst{letters(basis_vector(2, 0), basis_vector(2, 1)), 13, 2, 0.1, 0.1};
  CHECK_THROWS_AS(inst.validate(), ResourceError);
  inst.n = 3;
  inst.delta = 0.0;
  CHECK_THROWS_AS(inst.validate(), ValidationError);
  inst.delta = 0.1;
  CHECK_NOTHROW(inst.validate());
  CHECK_THROWS_AS(coding_error_exact(inst, BinaryMatrix(1, 2)), DimensionError);
}
