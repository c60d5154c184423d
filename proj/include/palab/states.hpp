#pragma once

// Labeled multipartite states and the canonical constructors: perfect keys,
// private states, collective-attack states and their shield purifications.
//
// Subsystems are always ordered A, B, S, E (virtual splits A1, A2 and B1, B2
// take the place of their parent). Within a register of several qubits the
// leftmost qubit is the most significant bit of the basis label.

#include "palab/qmatrix.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace palab {

enum class Role : std::uint8_t { A, B, S, E, A1, A2, B1, B2 };

std::string_view to_string(Role r);
Role role_from_string(std::string_view s);

struct Subsystem {
  Role role;
  std::size_t dim;
  bool operator==(const Subsystem&) const = default;
};

/// Default cap on the number of stored amplitudes (vector length, or the
/// number of entries of a density operator).
inline constexpr std::size_t kDefaultDimensionCap = std::size_t{1} << 22;

class MultipartiteState {
 public:
  /// Throws ValidationError unless the vector has unit norm within `tol`.
  static MultipartiteState pure(Vector amplitudes, std::vector<Subsystem> parts,
                                double tol = 1e-10);
  /// Throws ValidationError unless rho is Hermitian, PSD and unit trace within `tol`.
  static MultipartiteState mixed(Matrix rho, std::vector<Subsystem> parts, double tol = 1e-10);

  bool is_pure() const noexcept { return pure_; }
  const Vector& amplitudes() const;
  Matrix density() const;
  const std::vector<Subsystem>& subsystems() const noexcept { return parts_; }
  Dims dims() const;
  std::size_t dimension() const;

  std::optional<std::size_t> axis(Role r) const;
  std::size_t require_axis(Role r) const;
  /// 1 when the role is absent.
  std::size_t dim(Role r) const;

  /// Marginal on the listed roles that are present, in state order.
  Matrix marginal(std::initializer_list<Role> keep) const;

 private:
  MultipartiteState() = default;
  bool pure_ = true;
  Vector vec_;
  Matrix rho_;
  std::vector<Subsystem> parts_;
};

/// V^k acting on S for key value k, together with the shield/Eve state xi.
struct TwistingData {
  std::vector<Matrix> vks;
  MultipartiteState xi;  // pure on (S, E)

  void validate() const;
};

/// kappa_ABE = (1/2) sum_k P^k (x) P^k (x) rho_E.
MultipartiteState perfect_key(const Matrix& rho_e);

/// d^{-1/2} sum_k |kk>_AB V^k_S |xi>_SE for d = vks.size().
MultipartiteState private_state(const TwistingData& t);

/// (1/2) sum_k P^{kk}_AB (x) |phi^k><phi^k|_E.
MultipartiteState attack_state(const Vector& phi0_e, const Vector& phi1_e);

/// attack_state(|0>, cos(theta)|0> + sin(theta)|1>).
MultipartiteState theta_attack(double theta);

/// Pure |psi>_ABSE whose S-marginal is the classical-quantum input state.
/// The shield records which key pair and which Eve eigenvector occurred, so
/// the S supports of different key values are orthogonal. Shield dimension is
/// max(dim E, total rank of Eve's conditional states).
MultipartiteState purify_with_shield(const MultipartiteState& psi_abe);

/// psi^{(x)n} regrouped so the copies of each role are adjacent; every role
/// becomes one register of dimension dim^n (copy 1 most significant).
MultipartiteState n_copies(const MultipartiteState& psi, unsigned n,
                           std::size_t cap = kDefaultDimensionCap);

/// Outcome-resolved states after Alice measures A in the x basis.
struct ConditionalFamily {
  std::vector<double> probabilities;
  std::vector<std::optional<Matrix>> states;  // normalized on (B, S); nullopt for p = 0
  Dims bs_dims;
};

ConditionalFamily conditional_bs_states(const MultipartiteState& gamma);

/// z-basis statistics of the key registers and Eve's view of them.
struct KeyStatistics {
  Eigen::MatrixXd joint;                // p_{j,k} for A = j, B = k
  std::vector<double> alice;            // p_j
  std::vector<Matrix> eve_given_alice;  // normalized; zero matrix when p_j = 0
  Matrix eve_marginal;
};

KeyStatistics measure_key(const MultipartiteState& state);

/// Apply an operator to the axes holding the listed roles (pure states only).
MultipartiteState apply_local(const MultipartiteState& state, std::initializer_list<Role> roles,
                              const Matrix& op);

}  // namespace palab
