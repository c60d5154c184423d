#pragma once

// Entropies (in bits), the Holevo quantity, distance measures and the two
// secret-key-rate formulas.

#include "palab/qmatrix.hpp"
#include "palab/states.hpp"

#include <span>
#include <vector>

namespace palab {

/// Eigenvalues in [-1e-12, 0) are treated as zero before taking logs.
inline constexpr double kEntropyClamp = 1e-12;

struct Ensemble {
  std::vector<double> probabilities;
  std::vector<Matrix> states;

  void validate() const;
  Matrix average() const;
};

double von_neumann_entropy(const Matrix& rho);
double shannon_entropy(std::span<const double> p);
double binary_entropy(double p);

double holevo_chi(const Ensemble& e);

/// I(K:E) = S(rho_E) + H(K) - S(rho_KE) for a state classical on the key
/// registers; K is Alice's key. Throws ValidationError on key coherences.
double mutual_info_ke(const MultipartiteState& psi_abe);

struct KeyRates {
  double pa;   // log2(d) - I(K:E), from the key-measured ABE marginal
  double psd;  // chi of Bob+shield's conditional states for Alice's x outcome
};

KeyRates key_rates(const MultipartiteState& psi_abse);

/// Unnormalized trace distance ||a - b||_1 (orthogonal pure states give 2).
double trace_distance(const Matrix& a, const Matrix& b);

/// Uhlmann root fidelity Tr sqrt(sqrt(a) b sqrt(a)).
double fidelity(const Matrix& a, const Matrix& b);
/// sqrt(<psi|b|psi>); agrees with the general formula for pure a.
double fidelity(const Vector& psi, const Matrix& b);

/// Upper bound 2 sqrt(1 - f^2) on the trace distance of states with fidelity f.
double fvg_bound(double f);

/// Shannon entropy of the outcome distribution when measuring rho in the
/// orthonormal basis given by the columns of `basis`.
double measurement_entropy(const Matrix& rho, const Matrix& basis);

}  // namespace palab
