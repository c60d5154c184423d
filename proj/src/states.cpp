#include "palab/states.hpp"

#include "palab/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace palab {

std::string_view to_string(Role r) {
  switch (r) {
    case Role::A: return "A";
    case Role::B: return "B";
    case Role::S: return "S";
    case Role::E: return "E";
    case Role::A1: return "A1";
    case Role::A2: return "A2";
    case Role::B1: return "B1";
    case Role::B2: return "B2";
  }
  return "?";
}

Role role_from_string(std::string_view s) {
  for (Role r : {Role::A, Role::B, Role::S, Role::E, Role::A1, Role::A2, Role::B1, Role::B2})
    if (to_string(r) == s) return r;
  throw ValidationError("unknown subsystem label '" + std::string(s) + "'");
}

namespace {

void check_parts(const std::vector<Subsystem>& parts, std::size_t total) {
  std::size_t p = 1;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].dim == 0) throw DimensionError("subsystem of dimension zero");
    for (std::size_t j = 0; j < i; ++j)
      if (parts[j].role == parts[i].role)
        throw ValidationError("subsystem " + std::string(to_string(parts[i].role)) +
                              " listed twice");
    p *= parts[i].dim;
  }
  if (p != total)
    throw DimensionError("subsystem dimensions multiply to " + std::to_string(p) +
                         ", state has dimension " + std::to_string(total));
}

Dims dims_of(const std::vector<Subsystem>& parts) {
  Dims d;
  for (const auto& p : parts) d.push_back(p.dim);
  return d;
}

std::vector<Subsystem> without(const std::vector<Subsystem>& parts, std::size_t axis) {
  auto out = parts;
  out.erase(out.begin() + static_cast<std::ptrdiff_t>(axis));
  return out;
}

std::optional<std::size_t> find_role(const std::vector<Subsystem>& parts, Role r) {
  for (std::size_t i = 0; i < parts.size(); ++i)
    if (parts[i].role == r) return i;
  return std::nullopt;
}

}  // namespace

MultipartiteState MultipartiteState::pure(Vector amplitudes, std::vector<Subsystem> parts,
                                          double tol) {
  check_parts(parts, static_cast<std::size_t>(amplitudes.size()));
  const double n = amplitudes.norm();
  if (std::abs(n - 1.0) > tol)
    throw ValidationError("pure state has norm " + std::to_string(n));
  MultipartiteState s;
  s.pure_ = true;
  s.vec_ = std::move(amplitudes);
  s.parts_ = std::move(parts);
  return s;
}

MultipartiteState MultipartiteState::mixed(Matrix rho, std::vector<Subsystem> parts, double tol) {
  if (rho.rows() != rho.cols()) throw DimensionError("density operator must be square");
  check_parts(parts, static_cast<std::size_t>(rho.rows()));
  if (!is_hermitian(rho, tol)) throw ValidationError("density operator is not Hermitian");
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > tol) throw ValidationError("density operator has trace " + std::to_string(tr));
  const auto es = eig_hermitian(rho);
  if (es.values.minCoeff() < -tol)
    throw ValidationError("density operator has negative eigenvalue " +
                          std::to_string(es.values.minCoeff()));
  MultipartiteState s;
  s.pure_ = false;
  s.rho_ = 0.5 * (rho + rho.adjoint());
  s.parts_ = std::move(parts);
  return s;
}

const Vector& MultipartiteState::amplitudes() const {
  if (!pure_) throw ValidationError("state is mixed; no amplitude vector");
  return vec_;
}

Matrix MultipartiteState::density() const { return pure_ ? projector(vec_) : rho_; }

Dims MultipartiteState::dims() const { return dims_of(parts_); }

std::size_t MultipartiteState::dimension() const {
  return pure_ ? static_cast<std::size_t>(vec_.size()) : static_cast<std::size_t>(rho_.rows());
}

std::optional<std::size_t> MultipartiteState::axis(Role r) const { return find_role(parts_, r); }

std::size_t MultipartiteState::require_axis(Role r) const {
  auto a = axis(r);
  if (!a) throw ValidationError("state has no subsystem " + std::string(to_string(r)));
  return *a;
}

std::size_t MultipartiteState::dim(Role r) const {
  auto a = axis(r);
  return a ? parts_[*a].dim : 1;
}

Matrix MultipartiteState::marginal(std::initializer_list<Role> keep) const {
  std::vector<std::size_t> axes;
  for (std::size_t i = 0; i < parts_.size(); ++i)
    if (std::find(keep.begin(), keep.end(), parts_[i].role) != keep.end()) axes.push_back(i);
  const auto d = dims();
  return pure_ ? partial_trace_pure(vec_, d, axes) : partial_trace(rho_, d, axes);
}

void TwistingData::validate() const {
  if (vks.size() < 2) throw ValidationError("twisting needs at least two key values");
  if (!xi.is_pure()) throw ValidationError("xi must be a pure state");
  if (xi.subsystems().size() != 2 || xi.subsystems()[0].role != Role::S ||
      xi.subsystems()[1].role != Role::E)
    throw ValidationError("xi must live on (S, E)");
  const auto ds = static_cast<Eigen::Index>(xi.dim(Role::S));
  for (const auto& v : vks) {
    if (v.rows() != ds || v.cols() != ds)
      throw DimensionError("twisting unitary does not match the shield dimension");
    if (max_abs(v * v.adjoint() - Matrix::Identity(ds, ds)) > 1e-10)
      throw ValidationError("twisting operator is not unitary");
  }
}

MultipartiteState perfect_key(const Matrix& rho_e) {
  auto e = MultipartiteState::mixed(rho_e, {{Role::E, static_cast<std::size_t>(rho_e.rows())}});
  Matrix key = Matrix::Zero(4, 4);
  key(0, 0) = 0.5;
  key(3, 3) = 0.5;
  return MultipartiteState::mixed(kron(key, e.density()),
                                  {{Role::A, 2}, {Role::B, 2}, {Role::E, e.dimension()}});
}

MultipartiteState private_state(const TwistingData& t) {
  t.validate();
  const std::size_t d = t.vks.size();
  const std::size_t ds = t.xi.dim(Role::S), de = t.xi.dim(Role::E);
  const Matrix identity_e = Matrix::Identity(de, de);
  const Vector& xi = t.xi.amplitudes();
  const std::size_t block = ds * de;
  Vector out = Vector::Zero(d * d * block);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t k = 0; k < d; ++k)
    out.segment((k * d + k) * block, block) = amp * (kron(t.vks[k], identity_e) * xi);
  return MultipartiteState::pure(std::move(out),
                                 {{Role::A, d}, {Role::B, d}, {Role::S, ds}, {Role::E, de}});
}

MultipartiteState attack_state(const Vector& phi0_e, const Vector& phi1_e) {
  if (phi0_e.size() != phi1_e.size()) throw DimensionError("Eve states differ in dimension");
  for (const Vector* phi : {&phi0_e, &phi1_e})
    if (std::abs(phi->norm() - 1.0) > 1e-10) throw ValidationError("Eve state is not normalized");
  const auto de = static_cast<std::size_t>(phi0_e.size());
  Matrix rho = Matrix::Zero(4 * de, 4 * de);
  rho.block(0, 0, de, de) = 0.5 * projector(phi0_e);
  rho.block(3 * de, 3 * de, de, de) = 0.5 * projector(phi1_e);
  return MultipartiteState::mixed(std::move(rho), {{Role::A, 2}, {Role::B, 2}, {Role::E, de}});
}

MultipartiteState theta_attack(double theta) {
  Vector phi0 = Vector::Zero(2), phi1(2);
  phi0(0) = 1.0;
  phi1 << std::cos(theta), std::sin(theta);
  return attack_state(phi0, phi1);
}

MultipartiteState purify_with_shield(const MultipartiteState& psi_abe) {
  const auto& parts = psi_abe.subsystems();
  if (parts.size() != 3 || parts[0].role != Role::A || parts[1].role != Role::B ||
      parts[2].role != Role::E)
    throw ValidationError("shield purification expects a state on (A, B, E)");
  const Matrix rho = psi_abe.density();
  const std::size_t da = parts[0].dim, db = parts[1].dim, de = parts[2].dim;
  const std::size_t pairs = da * db;
  for (std::size_t p = 0; p < pairs; ++p)
    for (std::size_t q = 0; q < pairs; ++q) {
      if (p == q) continue;
      if (max_abs(rho.block(p * de, q * de, de, de)) > 1e-10)
        throw ValidationError("input is not classical on the key registers");
    }

  struct Component {
    std::size_t pair;
    double weight;
    Vector eve;
  };
  std::vector<Component> comps;
  for (std::size_t p = 0; p < pairs; ++p) {
    const Matrix block = rho.block(p * de, p * de, de, de);
    if (block.trace().real() <= 1e-14) continue;
    const auto es = eig_hermitian(block);
    for (Eigen::Index i = 0; i < es.values.size(); ++i)
      if (es.values(i) > 1e-13) comps.push_back({p, es.values(i), es.vectors.col(i)});
  }
  const std::size_t ds = std::max(de, comps.size());
  Vector out = Vector::Zero(pairs * ds * de);
  for (std::size_t s = 0; s < comps.size(); ++s)
    out.segment((comps[s].pair * ds + s) * de, de) = std::sqrt(comps[s].weight) * comps[s].eve;
  out /= out.norm();
  return MultipartiteState::pure(std::move(out),
                                 {{Role::A, da}, {Role::B, db}, {Role::S, ds}, {Role::E, de}});
}

MultipartiteState n_copies(const MultipartiteState& psi, unsigned n, std::size_t cap) {
  if (n == 0) throw ValidationError("need at least one copy");
  if (n == 1) return psi;
  const auto& parts = psi.subsystems();
  const std::size_t k = parts.size();
  const double single = static_cast<double>(psi.dimension());
  const double total = std::pow(single, n);
  const double stored = psi.is_pure() ? total : total * total;
  if (stored > static_cast<double>(cap))
    throw ResourceError("n-copy state would hold " + std::to_string(stored) +
                        " entries, cap is " + std::to_string(cap));

  Dims copy_dims;
  for (unsigned c = 0; c < n; ++c)
    for (const auto& p : parts) copy_dims.push_back(p.dim);
  std::vector<std::size_t> order;
  for (std::size_t r = 0; r < k; ++r)
    for (unsigned c = 0; c < n; ++c) order.push_back(c * k + r);

  std::vector<Subsystem> grouped;
  for (const auto& p : parts) {
    std::size_t d = 1;
    for (unsigned c = 0; c < n; ++c) d *= p.dim;
    grouped.push_back({p.role, d});
  }

  if (psi.is_pure()) {
    Vector v = psi.amplitudes();
    for (unsigned c = 1; c < n; ++c) v = kron(v, psi.amplitudes());
    v = permute_axes(v, copy_dims, order);
    return MultipartiteState::pure(std::move(v), std::move(grouped), 1e-9);
  }
  const Matrix rho1 = psi.density();
  Matrix rho = rho1;
  for (unsigned c = 1; c < n; ++c) rho = kron(rho, rho1);
  rho = permute_axes(rho, copy_dims, order);
  return MultipartiteState::mixed(std::move(rho), std::move(grouped), 1e-9);
}

ConditionalFamily conditional_bs_states(const MultipartiteState& gamma) {
  if (!gamma.is_pure()) throw ValidationError("conditional states need a pure input");
  const std::size_t axis_a = gamma.require_axis(Role::A);
  const auto dims = gamma.dims();
  const std::size_t da = dims[axis_a];
  const auto rest_parts = without(gamma.subsystems(), axis_a);
  const auto rest_dims = dims_of(rest_parts);
  std::vector<std::size_t> keep;
  ConditionalFamily fam;
  for (std::size_t i = 0; i < rest_parts.size(); ++i)
    if (rest_parts[i].role == Role::B || rest_parts[i].role == Role::S) {
      keep.push_back(i);
      fam.bs_dims.push_back(rest_parts[i].dim);
    }
  for (std::size_t x = 0; x < da; ++x) {
    Vector w = contract_axis(gamma.amplitudes(), dims, axis_a, x_basis_state(da, x));
    const double p = w.squaredNorm();
    fam.probabilities.push_back(p);
    if (p <= 1e-14) {
      fam.states.emplace_back(std::nullopt);
      continue;
    }
    fam.states.emplace_back(partial_trace_pure(w / std::sqrt(p), rest_dims, keep));
  }
  return fam;
}

KeyStatistics measure_key(const MultipartiteState& state) {
  const std::size_t axis_a = state.require_axis(Role::A);
  const std::size_t axis_b = state.require_axis(Role::B);
  if (axis_b < axis_a) throw ValidationError("key registers must be ordered A before B");
  const auto dims = state.dims();
  const std::size_t da = dims[axis_a], db = dims[axis_b];

  auto after_a = without(state.subsystems(), axis_a);
  const std::size_t axis_b2 = axis_b - 1;
  auto rest = without(after_a, axis_b2);
  const auto dims_a = dims_of(after_a);
  const auto rest_dims = dims_of(rest);
  const auto e_axis = find_role(rest, Role::E);
  const std::size_t de = e_axis ? rest[*e_axis].dim : 1;
  std::vector<std::size_t> keep_e;
  if (e_axis) keep_e.push_back(*e_axis);

  KeyStatistics ks;
  ks.joint = Eigen::MatrixXd::Zero(da, db);
  ks.eve_marginal = Matrix::Zero(de, de);
  for (std::size_t j = 0; j < da; ++j) {
    Matrix eve = Matrix::Zero(de, de);
    Vector wa;
    Matrix ra;
    if (state.is_pure())
      wa = contract_axis(state.amplitudes(), dims, axis_a, basis_vector(da, j));
    else
      ra = sandwich_axis(state.density(), dims, axis_a, basis_vector(da, j));
    for (std::size_t k = 0; k < db; ++k) {
      Matrix eve_jk;
      double p;
      if (state.is_pure()) {
        const Vector w = contract_axis(wa, dims_a, axis_b2, basis_vector(db, k));
        p = w.squaredNorm();
        eve_jk = keep_e.empty() ? Matrix::Constant(1, 1, p) : partial_trace_pure(w, rest_dims, keep_e);
      } else {
        const Matrix r = sandwich_axis(ra, dims_a, axis_b2, basis_vector(db, k));
        p = r.trace().real();
        eve_jk = keep_e.empty() ? Matrix::Constant(1, 1, p) : partial_trace(r, rest_dims, keep_e);
      }
      ks.joint(j, k) = p;
      eve += eve_jk;
    }
    const double pj = ks.joint.row(j).sum();
    ks.alice.push_back(pj);
    ks.eve_marginal += eve;
    ks.eve_given_alice.push_back(pj > 1e-14 ? Matrix(eve / pj) : Matrix::Zero(de, de));
  }
  return ks;
}

MultipartiteState apply_local(const MultipartiteState& state, std::initializer_list<Role> roles,
                              const Matrix& op) {
  std::vector<std::size_t> axes;
  for (Role r : roles) axes.push_back(state.require_axis(r));
  Vector v = apply_on_axes(state.amplitudes(), state.dims(), axes, op);
  return MultipartiteState::pure(std::move(v), state.subsystems(), 1e-9);
}

}  // namespace palab
