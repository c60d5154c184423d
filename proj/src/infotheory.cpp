#include "palab/infotheory.hpp"

#include "palab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace palab {

void Ensemble::validate() const {
  if (probabilities.size() != states.size() || states.empty())
    throw ValidationError("ensemble needs one probability per state");
  double total = 0.0;
  for (double p : probabilities) {
    if (p < 0.0) throw ValidationError("negative ensemble probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw ValidationError("ensemble probabilities sum to " + std::to_string(total));
  for (const auto& s : states)
    if (s.rows() != states.front().rows() || s.cols() != s.rows())
      throw DimensionError("ensemble states differ in dimension");
}

Matrix Ensemble::average() const {
  Matrix avg = Matrix::Zero(states.front().rows(), states.front().cols());
  for (std::size_t i = 0; i < states.size(); ++i) avg += probabilities[i] * states[i];
  return avg;
}

double von_neumann_entropy(const Matrix& rho) {
  const auto es = eig_hermitian(rho);
  double h = 0.0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    double lam = es.values(i);
    if (lam < 0.0 && lam >= -kEntropyClamp) lam = 0.0;
    if (lam < 0.0) throw DomainError("entropy of an operator with eigenvalue " + std::to_string(lam));
    if (lam > 0.0) h -= lam * std::log2(lam);
  }
  return h;
}

double shannon_entropy(std::span<const double> p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log2(x);
  return h;
}

double binary_entropy(double p) {
  const double q[2] = {p, 1.0 - p};
  return shannon_entropy(q);
}

double holevo_chi(const Ensemble& e) {
  e.validate();
  double conditional = 0.0;
  for (std::size_t i = 0; i < e.states.size(); ++i)
    if (e.probabilities[i] > 0.0) conditional += e.probabilities[i] * von_neumann_entropy(e.states[i]);
  return von_neumann_entropy(e.average()) - conditional;
}

namespace {

void require_key_classical(const Matrix& rho, std::size_t pairs, std::size_t rest) {
  for (std::size_t p = 0; p < pairs; ++p)
    for (std::size_t q = 0; q < pairs; ++q)
      if (p != q && max_abs(rho.block(p * rest, q * rest, rest, rest)) > 1e-10)
        throw ValidationError("state is not classical on the key registers");
}

Matrix dephase_keys(const Matrix& rho, std::size_t pairs, std::size_t rest) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (std::size_t p = 0; p < pairs; ++p)
    out.block(p * rest, p * rest, rest, rest) = rho.block(p * rest, p * rest, rest, rest);
  return out;
}

std::vector<Subsystem> abe_parts(const MultipartiteState& s) {
  const auto& parts = s.subsystems();
  if (parts.size() != 3 || parts[0].role != Role::A || parts[1].role != Role::B ||
      parts[2].role != Role::E)
    throw ValidationError("expected a state on (A, B, E)");
  return parts;
}

}  // namespace

double mutual_info_ke(const MultipartiteState& psi_abe) {
  const auto parts = abe_parts(psi_abe);
  const std::size_t da = parts[0].dim, db = parts[1].dim, de = parts[2].dim;
  const Matrix rho = psi_abe.density();
  require_key_classical(rho, da * db, de);
  const Dims dims{da, db, de};
  const std::size_t ke[] = {0, 2};
  const std::size_t k[] = {0};
  const std::size_t e[] = {2};
  const Matrix rho_ke = partial_trace(rho, dims, ke);
  const Matrix rho_k = partial_trace(rho, dims, k);
  std::vector<double> pk(da);
  for (std::size_t j = 0; j < da; ++j) pk[j] = rho_k(j, j).real();
  return von_neumann_entropy(partial_trace(rho, dims, e)) + shannon_entropy(pk) -
         von_neumann_entropy(rho_ke);
}

KeyRates key_rates(const MultipartiteState& psi_abse) {
  if (!psi_abse.is_pure()) throw ValidationError("key rates need a pure purification");
  const std::size_t da = psi_abse.dim(Role::A), db = psi_abse.dim(Role::B),
                    de = psi_abse.dim(Role::E);
  (void)psi_abse.require_axis(Role::A);
  (void)psi_abse.require_axis(Role::B);
  Matrix abe = psi_abse.marginal({Role::A, Role::B, Role::E});
  abe = dephase_keys(abe, da * db, de);
  const auto measured =
      MultipartiteState::mixed(abe, {{Role::A, da}, {Role::B, db}, {Role::E, de}}, 1e-9);

  const auto fam = conditional_bs_states(psi_abse);
  Ensemble ens;
  for (std::size_t x = 0; x < fam.states.size(); ++x)
    if (fam.states[x]) {
      ens.probabilities.push_back(fam.probabilities[x]);
      ens.states.push_back(*fam.states[x]);
    }
  const double total = std::accumulate(ens.probabilities.begin(), ens.probabilities.end(), 0.0);
  for (auto& p : ens.probabilities) p /= total;

  return {std::log2(static_cast<double>(da)) - mutual_info_ke(measured), holevo_chi(ens)};
}

double trace_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("trace distance of operators with different shapes");
  return trace_norm(a - b);
}

double fidelity(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("fidelity of operators with different shapes");
  // rank-one arguments take the overlap form; the square root of a
  // projector carries eigenvalue noise of order 1e-8
  for (const auto* m : {&a, &b}) {
    const auto es = eig_hermitian(*m);
    if (es.values.size() > 1 && std::abs(es.values(1)) <= 1e-12 * std::abs(es.values(0))) {
      const Vector v = es.vectors.col(0);
      const Matrix& other = (m == &a) ? b : a;
      const double inner = (v.adjoint() * other * v)(0, 0).real();
      return std::sqrt(std::max(0.0, es.values(0) * inner));
    }
  }
  const Matrix sa = sqrt_psd(a);
  const Matrix inner = sa * b * sa;
  const auto es = eig_hermitian(0.5 * (inner + inner.adjoint()));
  double f = 0.0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i)
    if (es.values(i) > 0.0) f += std::sqrt(es.values(i));
  return f;
}

double fidelity(const Vector& psi, const Matrix& b) {
  if (psi.size() != b.rows()) throw DimensionError("fidelity of mismatched dimensions");
  return std::sqrt(std::max(0.0, psi.dot(b * psi).real()));
}

double fvg_bound(double f) {
  if (f < -1e-12 || f > 1.0 + 1e-12) throw DomainError("fidelity outside [0, 1]");
  return 2.0 * std::sqrt(std::max(0.0, 1.0 - f * f));
}

double measurement_entropy(const Matrix& rho, const Matrix& basis) {
  if (basis.rows() != rho.rows()) throw DimensionError("basis does not match the state");
  std::vector<double> p(basis.cols());
  for (Eigen::Index i = 0; i < basis.cols(); ++i)
    p[i] = std::max(0.0, basis.col(i).dot(rho * basis.col(i)).real());
  return shannon_entropy(p);
}

}  // namespace palab
