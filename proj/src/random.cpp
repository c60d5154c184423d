#include "palab/random.hpp"

#include "palab/error.hpp"

#include <cmath>
#include <numeric>

namespace palab {

Rng trial_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x9e3779b9u};
  return Rng(seq);
}

namespace {

Matrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) {
      const double re = g(rng);
      const double im = g(rng);
      m(i, j) = cplx(re, im);
    }
  return m;
}

}  // namespace

Vector haar_state(std::size_t dim, Rng& rng) {
  Vector v = ginibre(dim, 1, rng).col(0);
  return v / v.norm();
}

Matrix haar_unitary(std::size_t dim, Rng& rng) {
  const Matrix z = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (std::size_t i = 0; i < dim; ++i) {
    const double a = std::abs(r(i, i));
    if (a > 0.0) q.col(i) *= r(i, i) / a;
  }
  return q;
}

Matrix random_hermitian(std::size_t dim, Rng& rng) {
  const Matrix z = ginibre(dim, dim, rng);
  Matrix h = 0.5 * (z + z.adjoint());
  const double n = operator_norm(h);
  return n > 0.0 ? Matrix(h / n) : h;
}

Matrix random_density(std::size_t dim, std::size_t rank, Rng& rng) {
  if (rank == 0 || rank > dim) throw ValidationError("density rank must be in [1, dim]");
  const Matrix z = ginibre(dim, rank, rng);
  Matrix rho = z * z.adjoint();
  return rho / rho.trace().real();
}

Matrix unitary_exp(const Matrix& hermitian, double t) {
  const auto es = eig_hermitian(hermitian);
  Vector phases(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i)
    phases(i) = std::polar(1.0, t * es.values(i));
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

std::size_t sample_index(std::span<const double> weights, Rng& rng) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw DegenerateError("cannot sample from an all-zero distribution");
  std::uniform_real_distribution<double> u(0.0, total);
  const double r = u(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (r < acc && weights[i] > 0.0) return i;
  }
  // r landed on the rounding tail: return the last positive weight
  for (std::size_t i = weights.size(); i-- > 0;)
    if (weights[i] > 0.0) return i;
  return 0;
}

}  // namespace palab
