#include "palab/samplers.hpp"

#include "palab/error.hpp"

#include <cmath>

namespace palab {

TwistingData random_twisting(std::size_t ds, std::size_t de, Rng& rng) {
  std::vector<Matrix> vks{haar_unitary(ds, rng), haar_unitary(ds, rng)};
  return TwistingData{std::move(vks),
                      MultipartiteState::pure(haar_state(ds * de, rng), {{Role::S, ds}, {Role::E, de}})};
}

std::string_view to_string(CheckerFamily f) {
  switch (f) {
    case CheckerFamily::private_state: return "private";
    case CheckerFamily::perturbed: return "perturbed";
    case CheckerFamily::haar: return "haar";
    case CheckerFamily::key_correlated: return "key_correlated";
  }
  return "unknown";
}

CheckerFamily checker_family(std::size_t trial) {
  static constexpr CheckerFamily order[] = {CheckerFamily::private_state, CheckerFamily::perturbed,
                                            CheckerFamily::haar, CheckerFamily::key_correlated};
  return order[trial % 4];
}

MultipartiteState perturb(const MultipartiteState& gamma, double strength, Rng& rng) {
  const std::size_t a = gamma.require_axis(Role::A), e = gamma.require_axis(Role::E);
  const std::size_t dim = gamma.dim(Role::A) * gamma.dim(Role::E);
  const Matrix u = unitary_exp(random_hermitian(dim, rng), strength);
  const std::size_t axes[] = {a, e};
  Vector v = apply_on_axes(gamma.amplitudes(), gamma.dims(), axes, u);
  v /= v.norm();
  return MultipartiteState::pure(std::move(v), gamma.subsystems());
}

MultipartiteState sample_checker_state(CheckerFamily f, std::size_t ds, std::size_t de, Rng& rng) {
  const std::vector<Subsystem> parts{{Role::A, 2}, {Role::B, 2}, {Role::S, ds}, {Role::E, de}};
  switch (f) {
    case CheckerFamily::private_state:
      return private_state(random_twisting(ds, de, rng));
    case CheckerFamily::perturbed:
      return perturb(private_state(random_twisting(ds, de, rng)), 0.1, rng);
    case CheckerFamily::haar:
      return MultipartiteState::pure(haar_state(4 * ds * de, rng), parts);
    case CheckerFamily::key_correlated: {
      Vector v = Vector::Zero(4 * ds * de);
      const std::size_t block = ds * de;
      v.segment(0, block) = haar_state(block, rng) / std::sqrt(2.0);
      v.segment(3 * block, block) = haar_state(block, rng) / std::sqrt(2.0);
      return MultipartiteState::pure(std::move(v), parts);
    }
  }
  throw ValidationError("unknown checker family");
}

MultipartiteState random_two_state_attack(std::size_t de, Rng& rng) {
  const Vector phi0 = haar_state(de, rng);
  const Vector phi1 = haar_state(de, rng);
  return attack_state(phi0, phi1);
}

}  // namespace palab
