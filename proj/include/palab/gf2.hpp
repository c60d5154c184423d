#pragma once

// Linear algebra over GF(2): hash matrices, null spaces, basis completion,
// CSS-form Pauli operators and the virtual-subsystem relabeling.
//
// Bit convention: a label x on n qubits is an integer whose most significant
// bit is the leftmost qubit. Column j of a BinaryMatrix multiplies bit
// (cols - 1 - j) of x.

#include "palab/qmatrix.hpp"
#include "palab/random.hpp"
#include "palab/states.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace palab {

class BinaryMatrix {
 public:
  static constexpr std::size_t kMaxCols = 64;

  BinaryMatrix() = default;
  BinaryMatrix(std::size_t rows, std::size_t cols);
  static BinaryMatrix identity(std::size_t n);
  /// Each string is one row of '0'/'1' characters; all rows equal length.
  static BinaryMatrix from_strings(const std::vector<std::string>& rows, std::size_t cols = 0);

  std::size_t rows() const noexcept { return data_.size(); }
  std::size_t cols() const noexcept { return cols_; }
  bool get(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, bool value);
  std::uint64_t row(std::size_t i) const { return data_.at(i); }
  void set_row(std::size_t i, std::uint64_t bits);
  void append_row(std::uint64_t bits);

  /// Mx as a rows()-bit label.
  std::uint64_t apply(std::uint64_t x) const;
  BinaryMatrix operator*(const BinaryMatrix& other) const;
  BinaryMatrix transpose() const;
  std::vector<std::string> to_strings() const;

  bool operator==(const BinaryMatrix&) const = default;

 private:
  std::uint64_t mask() const noexcept;
  std::size_t cols_ = 0;
  std::vector<std::uint64_t> data_;
};

int parity(std::uint64_t x) noexcept;

/// Uniform over all m x n matrices (2-universal as a family).
BinaryMatrix random_linear_hash(std::size_t m, std::size_t n, Rng& rng);
/// Uniform over full-rank m x n matrices, by rejection.
BinaryMatrix random_full_rank_hash(std::size_t m, std::size_t n, Rng& rng);

std::size_t rank(const BinaryMatrix& m);
/// Reduced row echelon form with the first nonzero row as pivot.
BinaryMatrix rref(const BinaryMatrix& m, std::vector<std::size_t>* pivots = nullptr);

/// Basis of {x : Ux = 0}. Row j has a 1 at the j-th free column of rref(U)
/// and 0 at the other free columns.
BinaryMatrix null_space(const BinaryMatrix& u);

/// Invertible n x n matrix C with rows [e_f1 .. e_f(n-m); u_1 .. u_m], where
/// f_j are the free columns of rref(u). Row j < n-m is dual to null-space row
/// j. Throws RankError unless u has full row rank.
BinaryMatrix complete_basis(const BinaryMatrix& u);

/// Throws RankError for singular input.
BinaryMatrix inverse(const BinaryMatrix& g);

/// Label map G = complete_basis(u)^{-T}. Its first n-m rows are the
/// null-space rows v_j, and G u_i is the unit vector of virtual qubit n-m+i,
/// so relabeling |x> -> |Gx> sends X^{u_i} to X on that virtual qubit and
/// Z^{v_j} to Z on virtual qubit j.
BinaryMatrix virtual_labels(const BinaryMatrix& u);

enum class PauliKind { X, Z };

/// Tensor product of X or Z on the qubits where v has a 1; v is an n-bit label.
Matrix pauli_power(PauliKind kind, std::uint64_t v, std::size_t n);

/// Permutes the computational-basis labels of the register `which`
/// (n = g.cols() qubits) by x -> Gx.
MultipartiteState basis_change(const BinaryMatrix& g, const MultipartiteState& state, Role which);

}  // namespace palab
