#pragma once

// Classical-quantum source coding with 2-universal hash side information:
// Bob decodes the hashed letter string with a typicality-rejecting pretty
// good measurement. Binary alphabets only.

#include "palab/gf2.hpp"
#include "palab/infotheory.hpp"
#include "palab/qmatrix.hpp"

#include <cstdint>

namespace palab {

struct CodingInstance {
  Ensemble ensemble;  // two letters
  unsigned n = 1;
  std::size_t output_size = 1;  // |Y|
  double delta = 0.1;
  double epsilon = 0.1;

  void validate() const;
};

struct CodingOptions {
  bool reject_nontypical = true;    // E_x = 0 for strings outside the typical set
  bool typical_projectors = true;   // off: square-root measurement on p_x rho_x
};

/// Projector onto eigenvectors of rho^{(x)n} with eigenvalue in
/// [2^{-n(S+delta)}, 2^{-n(S-delta)}], built from the single-copy spectrum.
Matrix typical_projector(const Matrix& rho, unsigned n, double delta);

/// Window of width n delta around sum_j S(rho_{x_j}) in the spectrum of rho_x.
Matrix conditional_typical_projector(const Ensemble& letters, std::uint64_t x, unsigned n,
                                     double delta);

/// Strongly typical: |N(a)/n - p(a)| <= delta for every letter.
bool is_typical_string(std::uint64_t x, unsigned n, std::span<const double> p, double delta);

/// rho_{x_1} (x) ... (x) rho_{x_n}, first letter most significant.
Matrix string_state(const Ensemble& letters, std::uint64_t x, unsigned n);

/// min eig of [2(I - S) + 4T] - [I - (S+T)^{-1/2} S (S+T)^{-1/2}].
double hn_lemma_check(const Matrix& s, const Matrix& t);

/// Average decoding error for the hash f (rows = output bits, cols = n).
double coding_error_exact(const CodingInstance& inst, const BinaryMatrix& f,
                          const CodingOptions& opts = {});

/// Exact average over every hash matrix of the instance's shape (mn <= 16).
double coding_error_family_average(const CodingInstance& inst, const CodingOptions& opts = {});

/// 8 eps + 4 2^{n(H - chi + 3 delta)} / |Y|.
double coding_error_bound(const CodingInstance& inst);

/// 2^{ceil(n (H - chi + 4 delta))}; throws ValidationError if chi > H.
std::size_t choose_output_size(double h_p, double chi, double delta, unsigned n);

}  // namespace palab
