#include "palab/distill.hpp"

#include "palab/error.hpp"

#include <algorithm>
#include <cmath>

namespace palab {

namespace {

double spectrum_entropy(const RealVector& p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p(i) > kEntropyClamp) s -= p(i) * std::log2(p(i));
  return s;
}

bool in_window(double lambda, double entropy, const Typicality& typ) {
  return lambda > 0.0 &&
         std::abs(-std::log2(lambda) - entropy) <= static_cast<double>(typ.n) * typ.delta + 1e-12;
}

struct Layout {
  std::size_t key = 1;    // L = 2^{n-m}
  std::size_t b2 = 1;     // 2^m
  std::size_t rest = 1;   // S, E
  std::size_t e = 1;
};

Layout layout_of(const MultipartiteState& psi_prime) {
  const auto& parts = psi_prime.subsystems();
  if (parts.size() < 3 || parts[0].role != Role::A1 || parts[1].role != Role::B1 ||
      parts[2].role != Role::B2)
    throw ValidationError("expected a post-announcement state on (A1, B1, B2, ...)");
  if (psi_prime.axis(Role::E) && *psi_prime.axis(Role::E) != parts.size() - 1)
    throw ValidationError("Eve's register must come last");
  Layout l;
  l.key = parts[0].dim;
  if (parts[1].dim != l.key) throw DimensionError("A1 and B1 differ in dimension");
  l.b2 = parts[2].dim;
  for (std::size_t i = 3; i < parts.size(); ++i) l.rest *= parts[i].dim;
  l.e = psi_prime.dim(Role::E);
  return l;
}

void require_key_registers(const MultipartiteState& psi, std::size_t n) {
  const auto& parts = psi.subsystems();
  if (parts.size() < 2 || parts[0].role != Role::A || parts[1].role != Role::B)
    throw ValidationError("expected a state on (A, B, ...)");
  if (parts[0].dim != (std::size_t{1} << n) || parts[1].dim != parts[0].dim)
    throw DimensionError("key registers must hold n qubits each");
}

// Unnormalized <h~|_{A2} Z^h_{B2} |psi> for psi already relabeled.
Vector project_outcome(const Vector& amp, std::size_t n, std::size_t m, std::size_t rest,
                       std::uint64_t h) {
  const std::size_t big = std::size_t{1} << m, key = std::size_t{1} << (n - m);
  const std::size_t d = std::size_t{1} << n;
  const double scale = 1.0 / std::sqrt(static_cast<double>(big));
  Vector out = Vector::Zero(key * key * big * rest);
  for (std::size_t a1 = 0; a1 < key; ++a1)
    for (std::size_t a2 = 0; a2 < big; ++a2) {
      const double sa = parity(h & a2) ? -scale : scale;
      for (std::size_t b1 = 0; b1 < key; ++b1)
        for (std::size_t b2 = 0; b2 < big; ++b2) {
          const double s = parity(h & b2) ? -sa : sa;
          const std::size_t src = ((a1 * big + a2) * d + (b1 * big + b2)) * rest;
          const std::size_t dst = ((a1 * key + b1) * big + b2) * rest;
          out.segment(dst, rest) += s * amp.segment(src, rest);
        }
    }
  return out;
}

MultipartiteState relabel_keys(const MultipartiteState& psi, const BinaryMatrix& u) {
  const BinaryMatrix g = virtual_labels(u);
  return basis_change(g, basis_change(g, psi, Role::A), Role::B);
}

std::vector<Subsystem> announced_parts(const MultipartiteState& psi, std::size_t n, std::size_t m) {
  std::vector<Subsystem> parts{{Role::A1, std::size_t{1} << (n - m)},
                               {Role::B1, std::size_t{1} << (n - m)},
                               {Role::B2, std::size_t{1} << m}};
  for (std::size_t i = 2; i < psi.subsystems().size(); ++i) parts.push_back(psi.subsystems()[i]);
  return parts;
}

}  // namespace

Matrix window_projector(const Matrix& rho, const Typicality& typ) {
  if (!typ.enabled) return support_projector(rho);
  const double tr = rho.trace().real();
  if (tr <= 0.0) return Matrix::Zero(rho.rows(), rho.cols());
  const auto es = eig_hermitian(rho / tr);
  const double s = spectrum_entropy(es.values);
  Matrix p = Matrix::Zero(rho.rows(), rho.cols());
  for (Eigen::Index i = 0; i < es.values.size(); ++i)
    if (es.values(i) > 1e-14 && in_window(es.values(i), s, typ))
      p += es.vectors.col(i) * es.vectors.col(i).adjoint();
  return p;
}

Povm pgm_from_operators(const std::vector<Matrix>& lambdas) {
  if (lambdas.empty()) throw DegenerateError("empty measurement family");
  Matrix t = Matrix::Zero(lambdas[0].rows(), lambdas[0].cols());
  for (const auto& l : lambdas) t += l;
  if (max_abs(t) <= 1e-14) throw DegenerateError("all measurement operators vanish");
  const Matrix r = pinv_sqrt_psd(0.5 * (t + t.adjoint()));
  Povm out;
  Matrix sum = Matrix::Zero(t.rows(), t.cols());
  for (const auto& l : lambdas) {
    Matrix e = r * l * r;
    e = 0.5 * (e + e.adjoint());
    sum += e;
    out.elements.push_back(std::move(e));
  }
  out.completeness_deviation = operator_norm(sum - support_projector(t));
  return out;
}

Povm pgm(const Ensemble& family, const Typicality& typ) {
  if (family.states.empty()) throw DegenerateError("empty measurement family");
  const Eigen::Index d = family.states[0].rows();
  const Matrix pi = typ.enabled ? window_projector(family.average(), typ) : Matrix();
  std::vector<Matrix> lambdas;
  for (std::size_t y = 0; y < family.states.size(); ++y) {
    if (family.probabilities[y] <= 0.0)
      lambdas.push_back(Matrix::Zero(d, d));
    else if (typ.enabled)
      lambdas.push_back(pi * window_projector(family.states[y], typ) * pi);
    else
      lambdas.push_back(family.probabilities[y] * family.states[y]);
  }
  return pgm_from_operators(lambdas);
}

Announcement announce_outcome(const MultipartiteState& psi, const BinaryMatrix& u, std::uint64_t h) {
  const std::size_t n = u.cols(), m = u.rows();
  require_key_registers(psi, n);
  const auto relabeled = relabel_keys(psi, u);
  const std::size_t rest = psi.dimension() / (std::size_t{1} << (2 * n));
  Vector v = project_outcome(relabeled.amplitudes(), n, m, rest, h);
  const double p = v.squaredNorm();
  if (p <= 1e-300) throw DegenerateError("announced outcome has zero probability");
  v /= std::sqrt(p);
  return {MultipartiteState::pure(std::move(v), announced_parts(psi, n, m), 1e-9), h, p};
}

Announcement announce_hash(const MultipartiteState& psi, const BinaryMatrix& u, Rng& rng) {
  const std::size_t n = u.cols(), m = u.rows();
  require_key_registers(psi, n);
  const auto relabeled = relabel_keys(psi, u);
  const std::size_t rest = psi.dimension() / (std::size_t{1} << (2 * n));
  std::vector<Vector> branches;
  std::vector<double> probs;
  for (std::uint64_t h = 0; h < (std::uint64_t{1} << m); ++h) {
    branches.push_back(project_outcome(relabeled.amplitudes(), n, m, rest, h));
    probs.push_back(branches.back().squaredNorm());
  }
  const std::size_t h = sample_index(probs, rng);
  Vector v = std::move(branches[h]);
  v /= std::sqrt(probs[h]);
  return {MultipartiteState::pure(std::move(v), announced_parts(psi, n, m), 1e-9), h, probs[h]};
}

Ensemble conditional_family(const MultipartiteState& psi_prime) {
  const Layout l = layout_of(psi_prime);
  const Dims dims = psi_prime.dims();
  Dims rest_dims(dims.begin() + 1, dims.end());
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < rest_dims.size(); ++i)
    if (psi_prime.subsystems()[i + 1].role != Role::E) keep.push_back(i);
  Ensemble fam;
  for (std::size_t y = 0; y < l.key; ++y) {
    const Vector w = contract_axis(psi_prime.amplitudes(), dims, 0, x_basis_state(l.key, y));
    Matrix rho = partial_trace_pure(w, rest_dims, keep);
    const double p = rho.trace().real();
    fam.probabilities.push_back(p);
    if (p > 1e-14) rho /= p;
    fam.states.push_back(std::move(rho));
  }
  return fam;
}

std::vector<Vector> phi_bar(const MultipartiteState& psi_prime) {
  const Layout l = layout_of(psi_prime);
  const Vector& amp = psi_prime.amplitudes();
  const std::size_t block = l.b2 * l.rest;
  double off = 0.0;
  std::vector<Vector> out;
  for (std::size_t a = 0; a < l.key; ++a)
    for (std::size_t b = 0; b < l.key; ++b) {
      const auto seg = amp.segment((a * l.key + b) * block, block);
      if (a == b)
        out.push_back(std::sqrt(static_cast<double>(l.key)) * seg);
      else
        off += seg.squaredNorm();
    }
  if (off > 1e-18) throw ValidationError("A1 and B1 key labels are not perfectly correlated");
  return out;
}

std::vector<Matrix> ybar_operators(const MultipartiteState& psi_prime, const Typicality& typ) {
  const Layout l = layout_of(psi_prime);
  const auto phis = phi_bar(psi_prime);
  const std::size_t rows = l.b2 * l.rest / l.e;  // dim B2 S

  std::vector<Matrix> coeff;
  Matrix gram = Matrix::Zero(l.e, l.e);
  double total = 0.0;
  for (const auto& phi : phis) {
    Matrix c(rows, l.e);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t e = 0; e < l.e; ++e) c(r, e) = phi(r * l.e + e);
    gram += c.adjoint() * c;
    total += c.squaredNorm();
    coeff.push_back(std::move(c));
  }
  if (total <= 1e-300) throw DegenerateError("post-announcement state is empty");

  // Eigenbasis of the stacked coefficient matrix; its nonzero spectrum is
  // that of every conditional state.
  const auto es = eig_hermitian(gram);
  const double cut = kPinvRelThreshold * std::max(es.values.maxCoeff(), 0.0);
  const double s_cond = spectrum_entropy(es.values.cwiseMax(0.0) / total);
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    if (es.values(i) <= cut) continue;
    if (typ.enabled && !in_window(es.values(i) / total, s_cond, typ)) continue;
    kept.push_back(i);
  }
  if (kept.size() > rows)
    throw DimensionError("Eve's support exceeds Bob's shield; cannot embed the twisting");
  // Off: Ybar^l = M^l restricted to Eve's support, scaled for prior 1/L.
  // On: the window projector of the conditional state is K g K^dag with g the
  // inverse of K^dag K on the kept eigenvectors.
  const double prior_scale = 1.0 / std::sqrt(static_cast<double>(l.key) * total);
  Matrix f = Matrix::Zero(l.e, rows);
  for (std::size_t j = 0; j < kept.size(); ++j)
    f.col(j) = es.vectors.col(kept[j]) *
               (typ.enabled ? 1.0 / std::sqrt(es.values(kept[j])) : prior_scale);

  // typical projector of the key-averaged state, one block per l
  double s_avg = 0.0;
  if (typ.enabled)
    for (const auto& c : coeff)
      s_avg += spectrum_entropy(eig_hermitian(c * c.adjoint() / total).values.cwiseMax(0.0));

  std::vector<Matrix> out;
  for (const auto& c : coeff) {
    Matrix y = c * f;
    if (typ.enabled) {
      const auto eb = eig_hermitian(c * c.adjoint() / total);
      Matrix pi = Matrix::Zero(rows, rows);
      for (Eigen::Index i = 0; i < eb.values.size(); ++i)
        if (eb.values(i) > 1e-14 && in_window(eb.values(i), s_avg, typ))
          pi += eb.vectors.col(i) * eb.vectors.col(i).adjoint();
      y = pi * y;
    }
    out.push_back(std::move(y));
  }
  return out;
}

Matrix untwisting(const std::vector<Matrix>& ybars) {
  if (ybars.empty()) throw DegenerateError("no Ybar operators");
  const Eigen::Index d = ybars[0].rows();
  const auto key = static_cast<Eigen::Index>(ybars.size());
  Matrix u = Matrix::Zero(key * d, key * d);
  for (Eigen::Index l = 0; l < key; ++l) u.block(l * d, l * d, d, d) = polar_unitary(ybars[l]);
  return u;
}

std::vector<Matrix> untwisted_pgm(const Matrix& ubar, std::size_t key_dim) {
  const std::size_t d = static_cast<std::size_t>(ubar.rows()) / key_dim;
  std::vector<Matrix> out;
  for (std::size_t y = 0; y < key_dim; ++y) {
    const Matrix p = kron(projector(x_basis_state(key_dim, y)), Matrix::Identity(d, d));
    out.push_back(ubar * p * ubar.adjoint());
  }
  return out;
}

MultipartiteState untwist(const MultipartiteState& psi_prime, const Matrix& ubar) {
  const Layout l = layout_of(psi_prime);
  std::vector<std::size_t> axes{1, 2};
  if (auto s = psi_prime.axis(Role::S)) axes.push_back(*s);
  (void)l;
  Vector v = apply_on_axes(psi_prime.amplitudes(), psi_prime.dims(), axes, ubar.adjoint());
  return MultipartiteState::pure(std::move(v), psi_prime.subsystems(), 1e-9);
}

SuccessReport success_probability(const MultipartiteState& psi_prime, const Matrix& ubar) {
  const Layout l = layout_of(psi_prime);
  const auto phis = phi_bar(psi_prime);
  const std::size_t rows = l.b2 * l.rest / l.e;
  if (static_cast<std::size_t>(ubar.rows()) != l.key * rows)
    throw DimensionError("untwisting operator does not match Bob's registers");

  SuccessReport r;
  Matrix acc = Matrix::Zero(rows, l.e);
  for (std::size_t k = 0; k < l.key; ++k) {
    Matrix c(rows, l.e);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t e = 0; e < l.e; ++e) c(i, e) = phis[k](i * l.e + e);
    acc += ubar.block(k * rows, k * rows, rows, rows).adjoint() * c;
  }
  const double key = static_cast<double>(l.key);
  r.double_sum = acc.squaredNorm() / (key * key);

  const auto post = untwist(psi_prime, ubar);
  const std::size_t keep[] = {0, 1};
  const Matrix rho = partial_trace_pure(post.amplitudes(), post.dims(), keep);
  Vector phi = Vector::Zero(l.key * l.key);
  for (std::size_t k = 0; k < l.key; ++k) phi(k * l.key + k) = 1.0 / std::sqrt(key);
  r.fidelity_sq = phi.dot(rho * phi).real();
  for (std::size_t y = 0; y < l.key; ++y) {
    const Vector xy = kron(x_basis_state(l.key, y), x_basis_state(l.key, y));
    r.x_agreement += xy.dot(rho * xy).real();
  }
  r.trace_distance = trace_distance(rho, projector(phi));
  return r;
}

std::size_t announced_bits(double chi, std::size_t n, double margin) {
  const double raw = std::ceil(static_cast<double>(n) * (1.0 - chi) + margin - 1e-9);
  return static_cast<std::size_t>(std::clamp(raw, 0.0, static_cast<double>(n)));
}

DistillationOutcome distill(const MultipartiteState& psi, std::size_t n, std::size_t m, Rng& rng,
                            const Typicality& typ, std::size_t cap) {
  if (!psi.is_pure()) throw ValidationError("distillation needs a purified single-copy state");
  require_key_registers(psi, 1);
  if (n == 0 || n > 20) throw ValidationError("copy count outside 1..20");
  return distill_block(n_copies(psi, static_cast<unsigned>(n), cap), n, m, rng, typ);
}

DistillationOutcome distill_block(const MultipartiteState& big, std::size_t n, std::size_t m, Rng& rng,
                                  const Typicality& typ) {
  if (!big.is_pure()) throw ValidationError("distillation needs a pure n-copy state");
  require_key_registers(big, n);
  if (m > n) throw ValidationError("cannot announce more bits than copies");
  BinaryMatrix u = m > 0 ? random_full_rank_hash(m, n, rng) : BinaryMatrix(0, n);
  const auto ann = announce_hash(big, u, rng);
  const Matrix ubar = untwisting(ybar_operators(ann.state, typ));
  const auto sr = success_probability(ann.state, ubar);
  const double ps = std::clamp(sr.double_sum, 0.0, 1.0);
  return DistillationOutcome{untwist(ann.state, ubar),
                             ps,
                             sr.fidelity_sq,
                             sr.trace_distance,
                             std::sqrt(1.0 - ps),
                             std::move(u),
                             ann.h,
                             n,
                             m,
                             static_cast<double>(n - m) / static_cast<double>(n)};
}

namespace {

struct KeyedParts {
  std::size_t rest = 1;
  Dims rest_dims;
  std::vector<std::size_t> eve_keep;
};

KeyedParts keyed_parts(const MultipartiteState& s) {
  KeyedParts k;
  const auto& parts = s.subsystems();
  for (std::size_t i = 2; i < parts.size(); ++i) {
    k.rest *= parts[i].dim;
    k.rest_dims.push_back(parts[i].dim);
    if (parts[i].role == Role::E) k.eve_keep.push_back(i - 2);
  }
  return k;
}

Matrix eve_block(const MultipartiteState& s, const KeyedParts& kp, std::size_t flat) {
  const Vector seg = s.amplitudes().segment(flat * kp.rest, kp.rest);
  return partial_trace_pure(seg, kp.rest_dims, kp.eve_keep);
}

}  // namespace

ClassicalPa classical_pa(const MultipartiteState& psi, std::size_t n, const BinaryMatrix& v,
                         std::size_t cap) {
  require_key_registers(psi, 1);
  if (v.cols() != n) throw DimensionError("key map must act on n bits");
  const auto big = n_copies(psi, static_cast<unsigned>(n), cap);
  const auto kp = keyed_parts(big);
  const std::size_t d = std::size_t{1} << n;
  const std::size_t key = std::size_t{1} << v.rows();
  const std::size_t de = big.dim(Role::E);
  const Matrix rho_full = big.is_pure() ? Matrix() : big.density();

  ClassicalPa out;
  out.eve_blocks.assign(key * key, Matrix::Zero(de, de));
  for (std::size_t ka = 0; ka < d; ++ka)
    for (std::size_t kb = 0; kb < d; ++kb) {
      const std::size_t flat = ka * d + kb;
      Matrix w;
      if (big.is_pure()) {
        w = eve_block(big, kp, flat);
      } else {
        const Matrix block = rho_full.block(flat * kp.rest, flat * kp.rest, kp.rest, kp.rest);
        w = partial_trace(block, kp.rest_dims, kp.eve_keep);
      }
      out.eve_blocks[v.apply(ka) * key + v.apply(kb)] += w;
    }

  out.joint = Eigen::MatrixXd::Zero(key, key);
  Matrix rho_e = Matrix::Zero(de, de);
  for (std::size_t a = 0; a < key; ++a)
    for (std::size_t b = 0; b < key; ++b) {
      out.joint(a, b) = out.eve_blocks[a * key + b].trace().real();
      rho_e += out.eve_blocks[a * key + b];
    }
  out.key.assign(key, 0.0);
  for (std::size_t a = 0; a < key; ++a) {
    Matrix cond = Matrix::Zero(de, de);
    for (std::size_t b = 0; b < key; ++b) {
      out.key[a] += out.joint(a, b);
      cond += out.eve_blocks[a * key + b];
    }
    out.eve_given_key.push_back(out.key[a] > 1e-14 ? Matrix(cond / out.key[a]) : Matrix::Zero(de, de));
  }
  double norm = 0.0;
  const double uniform = 1.0 / static_cast<double>(key);
  for (std::size_t a = 0; a < key; ++a)
    for (std::size_t b = 0; b < key; ++b) {
      Matrix diff = out.eve_blocks[a * key + b];
      if (a == b) diff -= uniform * rho_e;
      norm += trace_norm(diff);
    }
  out.epsilon = 0.5 * norm;
  return out;
}

EquivalenceReport equivalence_check(const MultipartiteState& psi, std::size_t n,
                                    const BinaryMatrix& u, double tol, std::size_t cap) {
  const std::size_t m = u.rows();
  if (u.cols() != n) throw DimensionError("hash must act on n bits");
  const auto classical = classical_pa(psi, n, null_space(u), cap);

  const auto pure = psi.is_pure() ? psi : purify_with_shield(psi);
  const auto big = n_copies(pure, static_cast<unsigned>(n), cap);
  const auto relabeled = relabel_keys(big, u);
  const std::size_t rest = big.dimension() / (std::size_t{1} << (2 * n));
  const auto parts = announced_parts(big, n, m);
  const std::size_t key = std::size_t{1} << (n - m), b2 = std::size_t{1} << m;
  Dims tail{b2};
  std::vector<std::size_t> keep;
  for (std::size_t i = 3; i < parts.size(); ++i) {
    tail.push_back(parts[i].dim);
    if (parts[i].role == Role::E) keep.push_back(tail.size() - 1);
  }
  const std::size_t de = big.dim(Role::E);
  std::vector<Matrix> blocks(key * key, Matrix::Zero(de, de));
  for (std::uint64_t h = 0; h < b2; ++h) {
    const Vector v = project_outcome(relabeled.amplitudes(), n, m, rest, h);
    for (std::size_t f = 0; f < key * key; ++f)
      blocks[f] += partial_trace_pure(v.segment(f * b2 * rest, b2 * rest), tail, keep);
  }

  EquivalenceReport r;
  for (std::size_t a = 0; a < key; ++a)
    for (std::size_t b = 0; b < key; ++b) {
      const Matrix& cl = classical.eve_blocks[a * key + b];
      const Matrix& vi = blocks[a * key + b];
      r.key_deviation = std::max(r.key_deviation, std::abs(classical.joint(a, b) - vi.trace().real()));
      r.eve_deviation = std::max(r.eve_deviation, trace_norm(cl - vi));
    }
  r.max_deviation = std::max(r.key_deviation, r.eve_deviation);
  r.passed = r.max_deviation <= tol;
  return r;
}

}  // namespace palab
