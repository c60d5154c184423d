#pragma once

// Seeded samplers for states, unitaries and test operators. Every sampler
// takes the generator explicitly; callers own seeding.

#include "palab/qmatrix.hpp"

#include <cstdint>
#include <random>
#include <span>

namespace palab {

using Rng = std::mt19937_64;

/// Independent stream for trial `index` of an experiment seeded with `seed`.
Rng trial_rng(std::uint64_t seed, std::uint64_t index);

Vector haar_state(std::size_t dim, Rng& rng);
Matrix haar_unitary(std::size_t dim, Rng& rng);

/// Hermitian with Gaussian entries, scaled to unit operator norm.
Matrix random_hermitian(std::size_t dim, Rng& rng);

/// Density operator of the given rank (Ginibre construction).
Matrix random_density(std::size_t dim, std::size_t rank, Rng& rng);

/// exp(i t H) for Hermitian H.
Matrix unitary_exp(const Matrix& hermitian, double t);

/// Index drawn with probability proportional to weights[i].
std::size_t sample_index(std::span<const double> weights, Rng& rng);

}  // namespace palab
