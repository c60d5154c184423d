#pragma once

// Random instances for fuzz suites: twisting data, the four checker
// families and two-pure-state attacks.

#include "palab/random.hpp"
#include "palab/states.hpp"

#include <string_view>

namespace palab {

/// Haar V^0, V^1 on S and a Haar xi on S E.
TwistingData random_twisting(std::size_t ds, std::size_t de, Rng& rng);

enum class CheckerFamily { private_state, perturbed, haar, key_correlated };

std::string_view to_string(CheckerFamily f);

/// Family for trial i in round-robin order.
CheckerFamily checker_family(std::size_t trial);

/// exp(i strength H) on A (x) E with H a random Hermitian of unit norm.
MultipartiteState perturb(const MultipartiteState& gamma, double strength, Rng& rng);

/// Pure (A, B, S, E) state with qubit keys. key_correlated draws independent
/// Haar phi^k on S E behind perfectly correlated key registers.
MultipartiteState sample_checker_state(CheckerFamily f, std::size_t ds, std::size_t de, Rng& rng);

/// attack_state with independent Haar Eve states of dimension de.
MultipartiteState random_two_state_attack(std::size_t de, Rng& rng);

}  // namespace palab
