#pragma once

// Dense complex linear algebra on tensor-product spaces.
//
// Basis labels are row-major over the factor list: the first factor is the
// most significant digit, the last factor varies fastest. All functions are
// pure; none of them keep state between calls.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace palab {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<std::size_t>;

/// Relative eigenvalue cutoff used by pseudo-inverse style functions.
inline constexpr double kPinvRelThreshold = 1e-10;

std::size_t product(std::span<const std::size_t> dims);

/// Matrix with an optional tensor-factor structure.
struct ComplexMatrix {
  Matrix values;
  Dims dims;  // empty when the matrix carries no factor structure

  /// Throws DimensionError when dims does not multiply out to the row count.
  void validate() const;
};

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Maps each flat index of the `dims` layout to its flat index after the
/// axes are reordered so that new axis i is old axis order[i].
std::vector<std::size_t> axis_permutation_map(const Dims& dims,
                                              std::span<const std::size_t> order);

Vector permute_axes(const Vector& v, const Dims& dims, std::span<const std::size_t> order);
Matrix permute_axes(const Matrix& m, const Dims& dims, std::span<const std::size_t> order);

/// Marginal on the axes in `keep` (kept in ascending axis order).
Matrix partial_trace(const Matrix& m, const Dims& dims, std::span<const std::size_t> keep);

/// Same as partial_trace(|v><v|, ...) without forming the projector.
Matrix partial_trace_pure(const Vector& v, const Dims& dims, std::span<const std::size_t> keep);

/// <bra| applied on one axis of a vector; returns the vector on the other axes.
Vector contract_axis(const Vector& v, const Dims& dims, std::size_t axis, const Vector& bra);

/// (<bra| (x) I) m (|bra> (x) I) on one axis of an operator.
Matrix sandwich_axis(const Matrix& m, const Dims& dims, std::size_t axis, const Vector& bra);

/// Applies `op` to the listed axes (in the listed order) of a vector.
Vector apply_on_axes(const Vector& v, const Dims& dims, std::span<const std::size_t> axes,
                     const Matrix& op);

bool is_hermitian(const Matrix& m, double tol = 1e-10);

struct EigenSystem {
  RealVector values;  // descending
  Matrix vectors;     // columns; first large component of each made real-positive
};

/// Throws ValidationError for input that is not Hermitian within 1e-10
/// (relative to the largest entry).
EigenSystem eig_hermitian(const Matrix& m);

/// f applied to the spectrum. With pinv_threshold > 0, eigenvalues at or
/// below pinv_threshold * max|lambda| are sent to zero instead of through f.
Matrix func_hermitian(const Matrix& m, const std::function<double(double)>& f,
                      double pinv_threshold = 0.0);

/// Throws DomainError on eigenvalues below -1e-10 * max|lambda|.
Matrix sqrt_psd(const Matrix& m);
Matrix pinv_sqrt_psd(const Matrix& m, double rel_threshold = kPinvRelThreshold);
Matrix pinv_psd(const Matrix& m, double rel_threshold = kPinvRelThreshold);
Matrix support_projector(const Matrix& m, double rel_threshold = kPinvRelThreshold);

struct Svd {
  Matrix left;        // W
  RealVector values;  // descending
  Matrix right;       // X, with m = W diag(values) X^dagger
};

/// Full SVD with a canonical phase for every singular pair.
Svd svd(const Matrix& m);

/// Unitary V with y = sqrt(y y^dagger) V, via V = W X^dagger from svd().
Matrix polar_unitary(const Matrix& y);

double trace_norm(const Matrix& m);
double operator_norm(const Matrix& m);
double max_abs(const Matrix& m);

Matrix projector(const Vector& v);
Vector basis_vector(std::size_t dim, std::size_t index);

/// |x~> = H^{(x)q}|x> for dim = 2^q.
Vector x_basis_state(std::size_t dim, std::size_t x);

bool is_power_of_two(std::size_t d);
unsigned log2_exact(std::size_t d);

}  // namespace palab
