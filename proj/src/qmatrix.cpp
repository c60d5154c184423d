#include "palab/qmatrix.hpp"

#include "palab/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

namespace palab {

namespace {

// First entry whose magnitude exceeds this (relative to the column norm) fixes
// the phase of a column.
constexpr double kPhaseAnchor = 1e-8;

cplx anchor_phase(const Eigen::Ref<const Vector>& col) {
  const double norm = col.norm();
  if (norm == 0.0) return {1.0, 0.0};
  for (Eigen::Index i = 0; i < col.size(); ++i) {
    const double a = std::abs(col(i));
    if (a > kPhaseAnchor * norm) return col(i) / a;
  }
  return {1.0, 0.0};
}

std::vector<std::size_t> row_major_strides(const Dims& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) s[i - 1] = s[i] * dims[i];
  return s;
}

void check_axis_order(const Dims& dims, std::span<const std::size_t> order) {
  if (order.size() != dims.size())
    throw DimensionError("axis order has " + std::to_string(order.size()) +
                         " entries for " + std::to_string(dims.size()) + " axes");
  std::vector<bool> seen(dims.size(), false);
  for (auto a : order) {
    if (a >= dims.size() || seen[a]) throw DimensionError("axis order is not a permutation");
    seen[a] = true;
  }
}

}  // namespace

std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

void ComplexMatrix::validate() const {
  if (dims.empty()) return;
  const auto p = product(dims);
  if (p != static_cast<std::size_t>(values.rows()))
    throw DimensionError("dims multiply to " + std::to_string(p) + " but matrix has " +
                         std::to_string(values.rows()) + " rows");
  if (values.rows() == values.cols()) return;
  if (values.cols() != 1)
    throw DimensionError("non-square matrix cannot carry operator dims");
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out{kron(a.values, b.values), {}};
  if (!a.dims.empty() || !b.dims.empty()) {
    out.dims = a.dims.empty() ? Dims{static_cast<std::size_t>(a.values.rows())} : a.dims;
    if (b.dims.empty())
      out.dims.push_back(static_cast<std::size_t>(b.values.rows()));
    else
      out.dims.insert(out.dims.end(), b.dims.begin(), b.dims.end());
  }
  return out;
}

std::vector<std::size_t> axis_permutation_map(const Dims& dims,
                                              std::span<const std::size_t> order) {
  check_axis_order(dims, order);
  const std::size_t k = dims.size();
  Dims new_dims(k);
  for (std::size_t i = 0; i < k; ++i) new_dims[i] = dims[order[i]];
  const auto new_strides = row_major_strides(new_dims);
  std::vector<std::size_t> stride_of_old(k);
  for (std::size_t i = 0; i < k; ++i) stride_of_old[order[i]] = new_strides[i];

  const std::size_t total = product(dims);
  std::vector<std::size_t> map(total);
  std::vector<std::size_t> digit(k, 0);
  std::size_t target = 0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    map[idx] = target;
    // increment the odometer, last axis fastest
    for (std::size_t ax = k; ax-- > 0;) {
      if (++digit[ax] < dims[ax]) {
        target += stride_of_old[ax];
        break;
      }
      target -= (dims[ax] - 1) * stride_of_old[ax];
      digit[ax] = 0;
    }
  }
  return map;
}

Vector permute_axes(const Vector& v, const Dims& dims, std::span<const std::size_t> order) {
  if (product(dims) != static_cast<std::size_t>(v.size()))
    throw DimensionError("vector length does not match dims");
  const auto map = axis_permutation_map(dims, order);
  Vector out(v.size());
  for (std::size_t i = 0; i < map.size(); ++i) out(map[i]) = v(i);
  return out;
}

Matrix permute_axes(const Matrix& m, const Dims& dims, std::span<const std::size_t> order) {
  if (product(dims) != static_cast<std::size_t>(m.rows()) || m.rows() != m.cols())
    throw DimensionError("operator shape does not match dims");
  const auto map = axis_permutation_map(dims, order);
  Matrix out(m.rows(), m.cols());
  for (std::size_t j = 0; j < map.size(); ++j)
    for (std::size_t i = 0; i < map.size(); ++i) out(map[i], map[j]) = m(i, j);
  return out;
}

namespace {

struct KeepSplit {
  std::vector<std::size_t> order;
  std::size_t kept = 1;
  std::size_t traced = 1;
};

KeepSplit split_axes(const Dims& dims, std::span<const std::size_t> keep) {
  std::vector<bool> is_kept(dims.size(), false);
  for (auto a : keep) {
    if (a >= dims.size()) throw DimensionError("kept axis out of range");
    if (is_kept[a]) throw DimensionError("kept axis listed twice");
    is_kept[a] = true;
  }
  KeepSplit s;
  for (std::size_t a = 0; a < dims.size(); ++a)
    if (is_kept[a]) {
      s.order.push_back(a);
      s.kept *= dims[a];
    }
  for (std::size_t a = 0; a < dims.size(); ++a)
    if (!is_kept[a]) {
      s.order.push_back(a);
      s.traced *= dims[a];
    }
  return s;
}

}  // namespace

Matrix partial_trace(const Matrix& m, const Dims& dims, std::span<const std::size_t> keep) {
  if (m.rows() != m.cols()) throw DimensionError("partial trace needs a square operator");
  if (product(dims) != static_cast<std::size_t>(m.rows()))
    throw DimensionError("dims multiply to " + std::to_string(product(dims)) +
                         " but operator has dimension " + std::to_string(m.rows()));
  const auto s = split_axes(dims, keep);
  const auto map = axis_permutation_map(dims, s.order);
  Matrix out = Matrix::Zero(s.kept, s.kept);
  const auto n = map.size();
  for (std::size_t j = 0; j < n; ++j) {
    const auto kj = map[j] / s.traced, tj = map[j] % s.traced;
    for (std::size_t i = 0; i < n; ++i) {
      if (map[i] % s.traced != tj) continue;
      out(map[i] / s.traced, kj) += m(i, j);
    }
  }
  return out;
}

Matrix partial_trace_pure(const Vector& v, const Dims& dims, std::span<const std::size_t> keep) {
  if (product(dims) != static_cast<std::size_t>(v.size()))
    throw DimensionError("vector length does not match dims");
  const auto s = split_axes(dims, keep);
  const auto map = axis_permutation_map(dims, s.order);
  Matrix psi(s.kept, s.traced);
  for (std::size_t i = 0; i < map.size(); ++i) psi(map[i] / s.traced, map[i] % s.traced) = v(i);
  return psi * psi.adjoint();
}

Vector contract_axis(const Vector& v, const Dims& dims, std::size_t axis, const Vector& bra) {
  if (axis >= dims.size()) throw DimensionError("axis out of range");
  if (product(dims) != static_cast<std::size_t>(v.size()))
    throw DimensionError("vector length does not match dims");
  const std::size_t d = dims[axis];
  if (static_cast<std::size_t>(bra.size()) != d) throw DimensionError("bra has wrong dimension");
  const std::size_t left = product(std::span(dims).first(axis));
  const std::size_t right = product(std::span(dims).subspan(axis + 1));
  Vector out = Vector::Zero(left * right);
  for (std::size_t l = 0; l < left; ++l)
    for (std::size_t i = 0; i < d; ++i) {
      const cplx c = std::conj(bra(i));
      if (c == cplx{}) continue;
      out.segment(l * right, right) += c * v.segment((l * d + i) * right, right);
    }
  return out;
}

Matrix sandwich_axis(const Matrix& m, const Dims& dims, std::size_t axis, const Vector& bra) {
  if (axis >= dims.size()) throw DimensionError("axis out of range");
  if (product(dims) != static_cast<std::size_t>(m.rows()) || m.rows() != m.cols())
    throw DimensionError("operator shape does not match dims");
  const std::size_t d = dims[axis];
  if (static_cast<std::size_t>(bra.size()) != d) throw DimensionError("bra has wrong dimension");
  const std::size_t left = product(std::span(dims).first(axis));
  const std::size_t right = product(std::span(dims).subspan(axis + 1));
  const std::size_t rest = left * right;
  // Build the isometry-like map (<bra| (x) I) explicitly; sizes here are small.
  Matrix contract = Matrix::Zero(rest, m.rows());
  for (std::size_t l = 0; l < left; ++l)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t r = 0; r < right; ++r)
        contract(l * right + r, (l * d + i) * right + r) = std::conj(bra(i));
  return contract * m * contract.adjoint();
}

Vector apply_on_axes(const Vector& v, const Dims& dims, std::span<const std::size_t> axes,
                     const Matrix& op) {
  std::vector<std::size_t> order(axes.begin(), axes.end());
  std::vector<bool> used(dims.size(), false);
  std::size_t block = 1;
  for (auto a : axes) {
    if (a >= dims.size() || used[a]) throw DimensionError("invalid axis list");
    used[a] = true;
    block *= dims[a];
  }
  if (static_cast<std::size_t>(op.rows()) != block || op.cols() != op.rows())
    throw DimensionError("operator does not match the selected axes");
  for (std::size_t a = 0; a < dims.size(); ++a)
    if (!used[a]) order.push_back(a);
  const Vector moved = permute_axes(v, dims, order);
  const std::size_t rest = static_cast<std::size_t>(v.size()) / block;
  // moved is row-major (block, rest); Eigen maps column-major, so view as (rest, block).
  Eigen::Map<const Matrix> as_mat(moved.data(), rest, block);
  Matrix applied = as_mat * op.transpose();
  Vector result = Eigen::Map<Vector>(applied.data(), applied.size());
  Dims moved_dims;
  for (auto a : order) moved_dims.push_back(dims[a]);
  std::vector<std::size_t> inverse(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) inverse[order[i]] = i;
  return permute_axes(result, moved_dims, inverse);
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, max_abs(m));
  return max_abs(m - m.adjoint()) <= tol * scale;
}

EigenSystem eig_hermitian(const Matrix& m) {
  if (!is_hermitian(m, 1e-10))
    throw ValidationError("matrix is not Hermitian within tolerance");
  const Matrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) throw DomainError("eigendecomposition did not converge");
  const auto n = sym.rows();
  EigenSystem out{RealVector(n), Matrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = solver.eigenvalues()(n - 1 - i);
    Vector col = solver.eigenvectors().col(n - 1 - i);
    out.vectors.col(i) = col * std::conj(anchor_phase(col));
  }
  return out;
}

Matrix func_hermitian(const Matrix& m, const std::function<double(double)>& f,
                      double pinv_threshold) {
  const auto es = eig_hermitian(m);
  const double top = es.values.size() ? es.values.cwiseAbs().maxCoeff() : 0.0;
  RealVector mapped(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    const double lam = es.values(i);
    if (pinv_threshold > 0.0 && lam <= pinv_threshold * top)
      mapped(i) = 0.0;
    else
      mapped(i) = f(lam);
  }
  return es.vectors * mapped.cast<cplx>().asDiagonal() * es.vectors.adjoint();
}

namespace {

void require_psd(const EigenSystem& es) {
  if (es.values.size() == 0) return;
  const double top = es.values.cwiseAbs().maxCoeff();
  if (es.values.minCoeff() < -1e-10 * std::max(1.0, top))
    throw DomainError("operator has a negative eigenvalue " + std::to_string(es.values.minCoeff()));
}

Matrix spectral_map(const EigenSystem& es, const std::function<double(double)>& f) {
  RealVector mapped = es.values.unaryExpr(f);
  return es.vectors * mapped.cast<cplx>().asDiagonal() * es.vectors.adjoint();
}

}  // namespace

Matrix sqrt_psd(const Matrix& m) {
  const auto es = eig_hermitian(m);
  require_psd(es);
  return spectral_map(es, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

Matrix pinv_sqrt_psd(const Matrix& m, double rel_threshold) {
  const auto es = eig_hermitian(m);
  require_psd(es);
  const double cut = rel_threshold * (es.values.size() ? es.values.maxCoeff() : 0.0);
  return spectral_map(es, [cut](double x) { return x > cut && x > 0.0 ? 1.0 / std::sqrt(x) : 0.0; });
}

Matrix pinv_psd(const Matrix& m, double rel_threshold) {
  const auto es = eig_hermitian(m);
  require_psd(es);
  const double cut = rel_threshold * (es.values.size() ? es.values.maxCoeff() : 0.0);
  return spectral_map(es, [cut](double x) { return x > cut && x > 0.0 ? 1.0 / x : 0.0; });
}

Matrix support_projector(const Matrix& m, double rel_threshold) {
  const auto es = eig_hermitian(m);
  const double cut = rel_threshold * (es.values.size() ? es.values.cwiseAbs().maxCoeff() : 0.0);
  return spectral_map(es, [cut](double x) { return x > cut && x > 0.0 ? 1.0 : 0.0; });
}

Svd svd(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> solver(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Svd out{solver.matrixU(), solver.singularValues(), solver.matrixV()};
  const double top = out.values.size() ? out.values(0) : 0.0;
  const Eigen::Index shared = out.values.size();
  for (Eigen::Index i = 0; i < shared; ++i) {
    if (out.values(i) > 1e-12 * std::max(top, 1e-300)) {
      // W diag X^dagger is invariant under a common phase on the pair.
      const cplx ph = std::conj(anchor_phase(out.left.col(i)));
      out.left.col(i) *= ph;
      out.right.col(i) *= ph;
    } else {
      out.left.col(i) *= std::conj(anchor_phase(out.left.col(i)));
      out.right.col(i) *= std::conj(anchor_phase(out.right.col(i)));
    }
  }
  for (Eigen::Index i = shared; i < out.left.cols(); ++i)
    out.left.col(i) *= std::conj(anchor_phase(out.left.col(i)));
  for (Eigen::Index i = shared; i < out.right.cols(); ++i)
    out.right.col(i) *= std::conj(anchor_phase(out.right.col(i)));
  return out;
}

Matrix polar_unitary(const Matrix& y) {
  if (y.rows() != y.cols()) throw DimensionError("polar decomposition needs a square matrix");
  const auto s = svd(y);
  return s.left * s.right.adjoint();
}

double trace_norm(const Matrix& m) {
  if (is_hermitian(m, 1e-12)) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().sum();
  }
  Eigen::JacobiSVD<Matrix> solver(m);
  return solver.singularValues().sum();
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (is_hermitian(m, 1e-12)) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::JacobiSVD<Matrix> solver(m);
  return solver.singularValues()(0);
}

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Matrix projector(const Vector& v) { return v * v.adjoint(); }

Vector basis_vector(std::size_t dim, std::size_t index) {
  if (index >= dim) throw DimensionError("basis index out of range");
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return v;
}

bool is_power_of_two(std::size_t d) { return d != 0 && (d & (d - 1)) == 0; }

unsigned log2_exact(std::size_t d) {
  if (!is_power_of_two(d)) throw DimensionError(std::to_string(d) + " is not a power of two");
  unsigned q = 0;
  while ((std::size_t{1} << q) < d) ++q;
  return q;
}

Vector x_basis_state(std::size_t dim, std::size_t x) {
  (void)log2_exact(dim);
  if (x >= dim) throw DimensionError("x-basis label out of range");
  const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  Vector v(dim);
  for (std::size_t k = 0; k < dim; ++k)
    v(k) = (std::popcount(static_cast<unsigned long long>(x & k)) & 1) ? -amp : amp;
  return v;
}

}  // namespace palab
