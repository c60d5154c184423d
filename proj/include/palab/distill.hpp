#pragma once

// Private-state distillation by hash announcement, pretty good measurement
// and untwisting, plus the classical privacy-amplification path it commutes
// with.
//
// Post-announcement states carry subsystems (A1, B1, B2, S, E). A1/B1 are
// the n-m virtual key qubits, B2 the m announced virtual qubits on Bob's
// side, which act as part of the shield from then on.

#include "palab/gf2.hpp"
#include "palab/infotheory.hpp"
#include "palab/qmatrix.hpp"
#include "palab/random.hpp"
#include "palab/states.hpp"

#include <cstdint>
#include <vector>

namespace palab {

/// Typicality off: the square-root measurement on the weighted states
/// themselves, L^y = p_y rho_y. On: L^y = Pi Pi^y Pi with spectral projectors
/// onto eigenvalues satisfying |-log2 lambda - S| <= n delta.
struct Typicality {
  bool enabled = false;
  double delta = 0.0;
  unsigned n = 1;

  static Typicality off() { return {}; }
  static Typicality on(double delta, unsigned n) { return {true, delta, n}; }
};

/// Projector onto eigenvectors of rho (trace normalized) inside the window.
Matrix window_projector(const Matrix& rho, const Typicality& typ);

struct Povm {
  std::vector<Matrix> elements;
  double completeness_deviation = 0.0;  // ||sum E - support projector of T||
};

/// E^y = T^{-1/2} L^y T^{-1/2}, T = sum L^y, pseudo-inverse on supp T.
/// Throws DegenerateError when T vanishes.
Povm pgm_from_operators(const std::vector<Matrix>& lambdas);

Povm pgm(const Ensemble& family, const Typicality& typ);

struct Announcement {
  MultipartiteState state;  // (A1, B1, B2, S, E), normalized
  std::uint64_t h = 0;
  double probability = 1.0;
};

/// Projects Psi (A, B, S, E with A, B of n qubits) on Alice's outcome h of
/// the X^{u_i} observables, sampled by the Born rule, and applies Z^h on B2.
Announcement announce_hash(const MultipartiteState& psi, const BinaryMatrix& u, Rng& rng);

/// Same, for a fixed outcome h (throws DegenerateError on a null branch).
Announcement announce_outcome(const MultipartiteState& psi, const BinaryMatrix& u, std::uint64_t h);

/// Bob's (B1, B2, S) states for each x outcome y of A1, with their priors.
Ensemble conditional_family(const MultipartiteState& psi_prime);

/// phi-bar^l on (B2, S, E), unnormalized as 2^{(n-m)/2} <l l|_{A1 B1} Psi'.
/// Throws ValidationError if the A1 and B1 z labels are not perfectly
/// correlated.
std::vector<Vector> phi_bar(const MultipartiteState& psi_prime);

/// Square Ybar^l on B2 S with L^y = Z^y (sum |l><l'| (x) Y^l Y^l'^dag) Z^y for
/// the measurement operators L^y of pgm(conditional_family(psi_prime), typ).
std::vector<Matrix> ybar_operators(const MultipartiteState& psi_prime, const Typicality& typ);

/// Ubar = sum_l P^l_{B1} (x) Vbar^l with Vbar^l the polar unitary of Ybar^l.
Matrix untwisting(const std::vector<Matrix>& ybars);

/// E^y = Ubar (P^{y~}_{B1} (x) I) Ubar^dag.
std::vector<Matrix> untwisted_pgm(const Matrix& ubar, std::size_t key_dim);

struct SuccessReport {
  double double_sum = 0.0;     // |sum_l Vbar^l^dag M^l|_F^2 / L^2
  double x_agreement = 0.0;    // Born probability that x outcomes on A1, B1 agree
  double fidelity_sq = 0.0;    // <Phi|Psi''_{A1 B1}|Phi>
  double trace_distance = 0.0; // ||Psi''_{A1 B1} - Phi||_1
};

/// Psi'' = Ubar^dag Psi' and the success measures above.
SuccessReport success_probability(const MultipartiteState& psi_prime, const Matrix& ubar);
MultipartiteState untwist(const MultipartiteState& psi_prime, const Matrix& ubar);

/// ceil(n (1 - chi) + margin), clamped to [0, n].
std::size_t announced_bits(double chi, std::size_t n, double margin);

struct DistillationOutcome {
  MultipartiteState post_state;  // Psi''
  double success_probability = 0.0;
  double fidelity_sq = 0.0;
  double trace_distance = 0.0;
  double privacy_epsilon = 0.0;  // sqrt(1 - P_s)
  BinaryMatrix hash;
  std::uint64_t announced = 0;
  std::size_t n = 0, m = 0;
  double rate_used = 0.0;  // (n - m) / n
};

/// n_copies -> random full-rank hash -> announce_hash -> ybar -> untwisting.
/// psi is a pure single-copy (A, B, S, E) state with qubit keys.
DistillationOutcome distill(const MultipartiteState& psi, std::size_t n, std::size_t m, Rng& rng,
                            const Typicality& typ = Typicality::off(),
                            std::size_t cap = kDefaultDimensionCap);

/// Same pipeline on an already built n-copy state.
DistillationOutcome distill_block(const MultipartiteState& big, std::size_t n, std::size_t m, Rng& rng,
                                  const Typicality& typ = Typicality::off());

/// Hashed keys from z measurements of all copies.
struct ClassicalPa {
  Eigen::MatrixXd joint;             // p(a, b) of Alice's and Bob's hashed keys
  std::vector<Matrix> eve_blocks;    // unnormalized Eve operator for (a, b), index a * L + b
  std::vector<double> key;           // Alice's marginal
  std::vector<Matrix> eve_given_key; // normalized; zero for p = 0
  double epsilon = 0.0;
};

/// psi is a single-copy state on (A, B, [S], E), pure or mixed; v holds the
/// key rows (typically null_space(u)).
ClassicalPa classical_pa(const MultipartiteState& psi, std::size_t n, const BinaryMatrix& v,
                         std::size_t cap = kDefaultDimensionCap);

struct EquivalenceReport {
  double key_deviation = 0.0;  // max |p_classical(a,b) - p_virtual(a,b)|
  double eve_deviation = 0.0;  // max trace norm between unnormalized Eve blocks
  double max_deviation = 0.0;
  bool passed = false;
};

/// Classical PA against the virtual path: relabel A, B, announce every h,
/// measure the A1 and B1 z labels, sum Eve's blocks over h.
EquivalenceReport equivalence_check(const MultipartiteState& psi, std::size_t n,
                                    const BinaryMatrix& u, double tol = 1e-9,
                                    std::size_t cap = kDefaultDimensionCap);

}  // namespace palab
