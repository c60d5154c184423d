#pragma once

// Recognizing private states: Eve-marginal test, Bob+shield orthogonality
// test, twisting extraction, epsilon-privacy and the uncertainty diagnostic.

#include "palab/error.hpp"
#include "palab/qmatrix.hpp"
#include "palab/states.hpp"

#include <optional>
#include <span>

namespace palab {

struct PrivacyDiagnostics {
  double condition_a_deviation = 0.0;                // max |p_jk - delta_jk / d|
  std::optional<double> condition_b_deviation;       // max ||gamma_E^j - gamma_E^k||_1
  std::optional<double> condition_bprime_deviation;  // max ||sigma^j sigma^k||, j != k
  std::optional<bool> eve_marginal_verdict;          // key + identical Eve marginals
  std::optional<bool> orthogonality_verdict;         // key + orthogonal BS conditionals
};

/// Key correlation plus identical Eve conditionals. Pure (A, B, S, E) input.
PrivacyDiagnostics check_thm1(const MultipartiteState& gamma, double tol);

/// Key correlation plus pairwise orthogonal sigma^x_BS = d <x~|gamma_ABS|x~>.
PrivacyDiagnostics check_thm2(const MultipartiteState& gamma, double tol);

/// Both characterizations on one state.
PrivacyDiagnostics diagnose(const MultipartiteState& gamma, double tol);

class ExtractionError : public Error {
 public:
  ExtractionError(const std::string& what, PrivacyDiagnostics d)
      : Error(ErrorCode::extraction, what), diagnostics_(d) {}
  const PrivacyDiagnostics& diagnostics() const noexcept { return diagnostics_; }

 private:
  PrivacyDiagnostics diagnostics_;
};

/// Recovers V^k and xi with private_state(result) equal to gamma up to a
/// global phase, in the gauge V^0 = I.
TwistingData extract_twisting(const MultipartiteState& gamma, double tol = 1e-8);

/// (1/2)||rho_ABE - kappa(rho_E*)||_1 with rho_E* Eve's key-averaged
/// marginal. Any S register is traced out first.
double epsilon_privacy(const MultipartiteState& rho_abe);

/// Same quantity for a classical key with distribution p and Eve states
/// rho_k (normalized); the key is held identically by Alice and Bob.
double cq_epsilon_privacy(std::span<const double> p, std::span<const Matrix> eve_states);

struct UncertaintyReport {
  double h_z_given_e;   // H(Z_A | E)
  double h_x_given_bs;  // H(X_A | B S)
};

UncertaintyReport uncertainty_check(const MultipartiteState& gamma);

}  // namespace palab
