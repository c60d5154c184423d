#include "palab/coding.hpp"

#include "palab/error.hpp"

#include <bit>
#include <cmath>

namespace palab {

namespace {

constexpr unsigned kMaxBlock = 12;

double entropy_of(const RealVector& p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p(i) > kEntropyClamp) s -= p(i) * std::log2(p(i));
  return s;
}

// Projector sum over eigen-index strings accepted by `keep`, given per-position
// eigensystems.
template <typename Keep>
Matrix product_projector(const std::vector<const EigenSystem*>& sys, Keep keep) {
  const std::size_t d = static_cast<std::size_t>(sys[0]->values.size());
  const std::size_t n = sys.size();
  Matrix basis = Matrix::Identity(1, 1);
  for (const auto* s : sys) basis = kron(basis, s->vectors);
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= d;
  Matrix p = Matrix::Zero(total, total);
  std::vector<std::size_t> digits(n);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t r = idx;
    double log_lambda = 0.0;
    bool zero = false;
    for (std::size_t j = n; j-- > 0;) {
      digits[j] = r % d;
      r /= d;
      const double l = sys[j]->values(static_cast<Eigen::Index>(digits[j]));
      if (l <= kEntropyClamp) zero = true;
      else log_lambda += std::log2(l);
    }
    if (!zero && keep(-log_lambda)) p += basis.col(idx) * basis.col(idx).adjoint();
  }
  return p;
}

}  // namespace

void CodingInstance::validate() const {
  ensemble.validate();
  if (ensemble.states.size() != 2) throw ValidationError("coding supports binary alphabets only");
  if (n == 0 || n > kMaxBlock) throw ResourceError("block length outside 1..12");
  if (output_size == 0) throw ValidationError("|Y| must be at least 1");
  if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("epsilon must lie in (0, 1)");
}

Matrix typical_projector(const Matrix& rho, unsigned n, double delta) {
  if (n == 0 || n > kMaxBlock) throw ResourceError("block length outside 1..12");
  const auto es = eig_hermitian(rho);
  const double s = entropy_of(es.values.cwiseMax(0.0));
  const double width = static_cast<double>(n) * delta + 1e-12;
  const double centre = static_cast<double>(n) * s;
  std::vector<const EigenSystem*> sys(n, &es);
  return product_projector(sys, [&](double surprisal) { return std::abs(surprisal - centre) <= width; });
}

Matrix conditional_typical_projector(const Ensemble& letters, std::uint64_t x, unsigned n,
                                     double delta) {
  if (n == 0 || n > kMaxBlock) throw ResourceError("block length outside 1..12");
  std::vector<EigenSystem> es;
  std::vector<double> s;
  for (const auto& r : letters.states) {
    es.push_back(eig_hermitian(r));
    s.push_back(entropy_of(es.back().values.cwiseMax(0.0)));
  }
  std::vector<const EigenSystem*> sys;
  double centre = 0.0;
  for (unsigned j = 0; j < n; ++j) {
    const std::size_t letter = (x >> (n - 1 - j)) & 1U;
    sys.push_back(&es[letter]);
    centre += s[letter];
  }
  const double width = static_cast<double>(n) * delta + 1e-12;
  return product_projector(sys, [&](double surprisal) { return std::abs(surprisal - centre) <= width; });
}

bool is_typical_string(std::uint64_t x, unsigned n, std::span<const double> p, double delta) {
  if (p.size() != 2) throw ValidationError("binary alphabets only");
  const double ones = std::popcount(x & ((std::uint64_t{1} << n) - 1));
  const double freq[2] = {1.0 - ones / n, ones / n};
  for (int a = 0; a < 2; ++a) {
    if (p[a] == 0.0 && freq[a] > 0.0) return false;
    if (std::abs(freq[a] - p[a]) > delta + 1e-12) return false;
  }
  return true;
}

Matrix string_state(const Ensemble& letters, std::uint64_t x, unsigned n) {
  Matrix out = Matrix::Identity(1, 1);
  for (unsigned j = 0; j < n; ++j) out = kron(out, letters.states[(x >> (n - 1 - j)) & 1U]);
  return out;
}

double hn_lemma_check(const Matrix& s, const Matrix& t) {
  if (s.rows() != s.cols() || t.rows() != s.rows() || t.cols() != s.cols())
    throw DimensionError("S and T must be square and of equal size");
  const auto es = eig_hermitian(s);
  if (es.values.minCoeff() < -1e-10 || es.values.maxCoeff() > 1.0 + 1e-10)
    throw ValidationError("S must satisfy 0 <= S <= I");
  if (eig_hermitian(t).values.minCoeff() < -1e-10) throw ValidationError("T must be positive");
  const Matrix id = Matrix::Identity(s.rows(), s.cols());
  const Matrix r = pinv_sqrt_psd(s + t);
  const Matrix lhs = id - r * s * r;
  const Matrix rhs = 2.0 * (id - s) + 4.0 * t;
  const Matrix diff = rhs - lhs;
  return eig_hermitian(0.5 * (diff + diff.adjoint())).values.minCoeff();
}

double coding_error_exact(const CodingInstance& inst, const BinaryMatrix& f, const CodingOptions& opts) {
  inst.validate();
  if (f.cols() != inst.n) throw DimensionError("hash must act on n letters");
  const unsigned n = inst.n;
  const std::size_t strings = std::size_t{1} << n;
  const auto& p = inst.ensemble.probabilities;

  const Matrix rho_n = typical_projector(inst.ensemble.average(), n, inst.delta);
  std::vector<Matrix> states(strings), lambdas(strings);
  std::vector<double> px(strings);
  for (std::uint64_t x = 0; x < strings; ++x) {
    states[x] = string_state(inst.ensemble, x, n);
    const int ones = std::popcount(x);
    px[x] = std::pow(p[1], ones) * std::pow(p[0], static_cast<int>(n) - ones);
    if (opts.reject_nontypical && !is_typical_string(x, n, p, inst.delta)) {
      lambdas[x] = Matrix::Zero(states[x].rows(), states[x].cols());
      continue;
    }
    if (opts.typical_projectors)
      lambdas[x] = rho_n * conditional_typical_projector(inst.ensemble, x, n, inst.delta) * rho_n;
    else
      lambdas[x] = px[x] * states[x];
  }

  double success = 0.0;
  const std::size_t cosets = std::size_t{1} << f.rows();
  std::vector<std::vector<std::uint64_t>> members(cosets);
  for (std::uint64_t x = 0; x < strings; ++x) members[f.apply(x)].push_back(x);
  for (const auto& coset : members) {
    if (coset.empty()) continue;
    Matrix t = Matrix::Zero(states[0].rows(), states[0].cols());
    for (auto x : coset) t += lambdas[x];
    if (max_abs(t) <= 1e-14) continue;
    const Matrix r = pinv_sqrt_psd(0.5 * (t + t.adjoint()));
    for (auto x : coset) {
      if (px[x] == 0.0) continue;
      const Matrix e = r * lambdas[x] * r;
      success += px[x] * (states[x] * e).trace().real();
    }
  }
  return std::max(0.0, 1.0 - success);
}

double coding_error_family_average(const CodingInstance& inst, const CodingOptions& opts) {
  const std::size_t bits = static_cast<std::size_t>(std::countr_zero(inst.output_size));
  if ((std::size_t{1} << bits) != inst.output_size) throw ValidationError("|Y| must be a power of two");
  if (bits * inst.n > 16) throw ResourceError("hash family too large to enumerate");
  const std::uint64_t count = std::uint64_t{1} << (bits * inst.n);
  double total = 0.0;
  for (std::uint64_t code = 0; code < count; ++code) {
    BinaryMatrix f(bits, inst.n);
    for (std::size_t i = 0; i < bits; ++i) f.set_row(i, code >> (i * inst.n));
    total += coding_error_exact(inst, f, opts);
  }
  return total / static_cast<double>(count);
}

double coding_error_bound(const CodingInstance& inst) {
  inst.validate();
  const double h = shannon_entropy(inst.ensemble.probabilities);
  const double chi = holevo_chi(inst.ensemble);
  return 8.0 * inst.epsilon +
         4.0 * std::exp2(inst.n * (h - chi + 3.0 * inst.delta)) / static_cast<double>(inst.output_size);
}

std::size_t choose_output_size(double h_p, double chi, double delta, unsigned n) {
  if (chi > h_p + 1e-12) throw ValidationError("Holevo quantity exceeds the source entropy");
  const double bits = std::ceil(static_cast<double>(n) * (h_p - chi + 4.0 * delta) - 1e-9);
  if (bits > 62) throw ResourceError("output alphabet too large");
  return std::size_t{1} << static_cast<unsigned>(std::max(0.0, bits));
}

}  // namespace palab
