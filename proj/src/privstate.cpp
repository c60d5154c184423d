#include "palab/privstate.hpp"

#include "palab/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace palab {

namespace {

void require_pure_abse(const MultipartiteState& gamma) {
  if (!gamma.is_pure()) throw ValidationError("private-state checks need a pure state");
  const auto& parts = gamma.subsystems();
  if (parts.size() != 4 || parts[0].role != Role::A || parts[1].role != Role::B ||
      parts[2].role != Role::S || parts[3].role != Role::E)
    throw ValidationError("private-state checks need subsystems (A, B, S, E)");
  if (parts[0].dim != parts[1].dim) throw DimensionError("key registers differ in dimension");
}

double condition_a(const KeyStatistics& ks) {
  const auto d = static_cast<double>(ks.joint.rows());
  double dev = 0.0;
  for (Eigen::Index j = 0; j < ks.joint.rows(); ++j)
    for (Eigen::Index k = 0; k < ks.joint.cols(); ++k)
      dev = std::max(dev, std::abs(ks.joint(j, k) - (j == k ? 1.0 / d : 0.0)));
  return dev;
}

double condition_b(const KeyStatistics& ks) {
  double dev = 0.0;
  for (std::size_t j = 0; j < ks.alice.size(); ++j)
    for (std::size_t k = j + 1; k < ks.alice.size(); ++k) {
      if (ks.alice[j] <= 1e-14 || ks.alice[k] <= 1e-14) continue;
      dev = std::max(dev, trace_distance(ks.eve_given_alice[j], ks.eve_given_alice[k]));
    }
  return dev;
}

double condition_bprime(const MultipartiteState& gamma) {
  const auto fam = conditional_bs_states(gamma);
  const auto d = static_cast<double>(fam.probabilities.size());
  std::vector<Matrix> sigma;
  for (std::size_t x = 0; x < fam.states.size(); ++x)
    if (fam.states[x]) sigma.push_back(d * fam.probabilities[x] * *fam.states[x]);
  double dev = 0.0;
  for (std::size_t j = 0; j < sigma.size(); ++j)
    for (std::size_t k = 0; k < sigma.size(); ++k)
      if (j != k) dev = std::max(dev, operator_norm(sigma[j] * sigma[k]));
  return dev;
}

}  // namespace

PrivacyDiagnostics diagnose(const MultipartiteState& gamma, double tol) {
  require_pure_abse(gamma);
  const auto ks = measure_key(gamma);
  PrivacyDiagnostics d;
  d.condition_a_deviation = condition_a(ks);
  d.condition_b_deviation = condition_b(ks);
  d.condition_bprime_deviation = condition_bprime(gamma);
  const bool key_ok = d.condition_a_deviation <= tol;
  d.eve_marginal_verdict = key_ok && *d.condition_b_deviation <= tol;
  d.orthogonality_verdict = key_ok && *d.condition_bprime_deviation <= tol;
  return d;
}

PrivacyDiagnostics check_thm1(const MultipartiteState& gamma, double tol) {
  require_pure_abse(gamma);
  const auto ks = measure_key(gamma);
  PrivacyDiagnostics d;
  d.condition_a_deviation = condition_a(ks);
  d.condition_b_deviation = condition_b(ks);
  d.eve_marginal_verdict = d.condition_a_deviation <= tol && *d.condition_b_deviation <= tol;
  return d;
}

PrivacyDiagnostics check_thm2(const MultipartiteState& gamma, double tol) {
  require_pure_abse(gamma);
  const auto ks = measure_key(gamma);
  PrivacyDiagnostics d;
  d.condition_a_deviation = condition_a(ks);
  d.condition_bprime_deviation = condition_bprime(gamma);
  d.orthogonality_verdict =
      d.condition_a_deviation <= tol && *d.condition_bprime_deviation <= tol;
  return d;
}

TwistingData extract_twisting(const MultipartiteState& gamma, double tol) {
  const auto diag = check_thm1(gamma, tol);
  if (!*diag.eve_marginal_verdict)
    throw ExtractionError("state is not private within tolerance", diag);

  const std::size_t d = gamma.dim(Role::A);
  const std::size_t ds = gamma.dim(Role::S), de = gamma.dim(Role::E);
  const std::size_t block = ds * de;
  const Vector& amp = gamma.amplitudes();

  // phi^k_SE as a dS x dE coefficient matrix
  std::vector<Matrix> coeff(d);
  for (std::size_t k = 0; k < d; ++k) {
    const Vector phi = std::sqrt(static_cast<double>(d)) * amp.segment((k * d + k) * block, block);
    coeff[k].resize(ds, de);
    for (std::size_t s = 0; s < ds; ++s)
      for (std::size_t e = 0; e < de; ++e) coeff[k](s, e) = phi(s * de + e);
  }

  const Matrix gram = coeff[0].adjoint() * coeff[0];
  Matrix xi(ds, de);
  if (ds == de) {
    xi = sqrt_psd(gram);
  } else if (ds > de) {
    xi.setZero();
    xi.topRows(de) = sqrt_psd(gram);
  } else {
    // rank(gram) <= ds, so the top ds eigenpairs reproduce it exactly
    const auto es = eig_hermitian(gram);
    RealVector root = es.values.head(ds).cwiseMax(0.0).cwiseSqrt();
    xi = root.cast<cplx>().asDiagonal() * es.vectors.leftCols(ds).adjoint();
  }

  std::vector<Matrix> vks(d);
  for (std::size_t k = 0; k < d; ++k)
    vks[k] = (ds == de) ? polar_unitary(coeff[k]) : polar_unitary(coeff[k] * xi.adjoint());

  // Gauge V^k -> V^k W, xi -> W^dag xi leaves gamma unchanged; pick V^0 = I.
  const Matrix w = vks[0].adjoint();
  for (auto& v : vks) v = v * w;
  xi = w.adjoint() * xi;

  Vector xi_vec(block);
  for (std::size_t s = 0; s < ds; ++s)
    for (std::size_t e = 0; e < de; ++e) xi_vec(s * de + e) = xi(s, e);
  xi_vec /= xi_vec.norm();
  return TwistingData{std::move(vks),
                      MultipartiteState::pure(std::move(xi_vec), {{Role::S, ds}, {Role::E, de}}, 1e-9)};
}

double epsilon_privacy(const MultipartiteState& state) {
  const std::size_t da = state.dim(Role::A), db = state.dim(Role::B), de = state.dim(Role::E);
  (void)state.require_axis(Role::A);
  (void)state.require_axis(Role::B);
  if (da != db) throw DimensionError("key registers differ in dimension");
  const Matrix rho = state.marginal({Role::A, Role::B, Role::E});
  const std::size_t e_axis[] = {2};
  const Matrix rho_e = partial_trace(rho, Dims{da, db, de}, e_axis);
  Matrix key = Matrix::Zero(da * db, da * db);
  for (std::size_t k = 0; k < da; ++k) key(k * db + k, k * db + k) = 1.0 / static_cast<double>(da);
  return 0.5 * trace_distance(rho, kron(key, rho_e));
}

double cq_epsilon_privacy(std::span<const double> p, std::span<const Matrix> eve_states) {
  if (p.size() != eve_states.size() || p.empty())
    throw ValidationError("need one Eve state per key value");
  Matrix avg = Matrix::Zero(eve_states[0].rows(), eve_states[0].cols());
  for (std::size_t k = 0; k < p.size(); ++k) avg += p[k] * eve_states[k];
  const double uniform = 1.0 / static_cast<double>(p.size());
  double norm = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k)
    norm += trace_norm(p[k] * eve_states[k] - uniform * avg);
  return 0.5 * norm;
}

UncertaintyReport uncertainty_check(const MultipartiteState& gamma) {
  require_pure_abse(gamma);
  const auto ks = measure_key(gamma);
  Ensemble eve;
  for (std::size_t k = 0; k < ks.alice.size(); ++k)
    if (ks.alice[k] > 1e-14) {
      eve.probabilities.push_back(ks.alice[k]);
      eve.states.push_back(ks.eve_given_alice[k]);
    }
  const auto fam = conditional_bs_states(gamma);
  Ensemble bob;
  for (std::size_t x = 0; x < fam.states.size(); ++x)
    if (fam.states[x]) {
      bob.probabilities.push_back(fam.probabilities[x]);
      bob.states.push_back(*fam.states[x]);
    }
  for (Ensemble* e : {&eve, &bob}) {
    double t = 0.0;
    for (double p : e->probabilities) t += p;
    for (double& p : e->probabilities) p /= t;
  }
  return {shannon_entropy(eve.probabilities) - holevo_chi(eve),
          shannon_entropy(bob.probabilities) - holevo_chi(bob)};
}

}  // namespace palab
