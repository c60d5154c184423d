#include "palab/gf2.hpp"

#include "palab/error.hpp"

#include <bit>
#include <utility>

namespace palab {

BinaryMatrix::BinaryMatrix(std::size_t rows, std::size_t cols) : cols_(cols), data_(rows, 0) {
  if (cols > kMaxCols) throw DimensionError("binary matrices hold at most 64 columns");
}

BinaryMatrix BinaryMatrix::identity(std::size_t n) {
  BinaryMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

BinaryMatrix BinaryMatrix::from_strings(const std::vector<std::string>& rows, std::size_t cols) {
  if (!rows.empty()) cols = rows.front().size();
  BinaryMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw ValidationError("bitstring rows differ in length");
    for (std::size_t j = 0; j < cols; ++j) {
      const char c = rows[i][j];
      if (c != '0' && c != '1') throw ValidationError("bitstring holds a character other than 0/1");
      m.set(i, j, c == '1');
    }
  }
  return m;
}

std::uint64_t BinaryMatrix::mask() const noexcept {
  return cols_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << cols_) - 1;
}

bool BinaryMatrix::get(std::size_t i, std::size_t j) const {
  if (j >= cols_) throw DimensionError("column out of range");
  return (data_.at(i) >> (cols_ - 1 - j)) & 1U;
}

void BinaryMatrix::set(std::size_t i, std::size_t j, bool value) {
  if (j >= cols_) throw DimensionError("column out of range");
  const std::uint64_t bit = std::uint64_t{1} << (cols_ - 1 - j);
  if (value)
    data_.at(i) |= bit;
  else
    data_.at(i) &= ~bit;
}

void BinaryMatrix::set_row(std::size_t i, std::uint64_t bits) { data_.at(i) = bits & mask(); }

void BinaryMatrix::append_row(std::uint64_t bits) { data_.push_back(bits & mask()); }

std::uint64_t BinaryMatrix::apply(std::uint64_t x) const {
  std::uint64_t out = 0;
  for (std::uint64_t r : data_) out = (out << 1) | static_cast<std::uint64_t>(parity(r & x));
  return out;
}

BinaryMatrix BinaryMatrix::operator*(const BinaryMatrix& other) const {
  if (cols_ != other.rows()) throw DimensionError("binary matrix product shape mismatch");
  const BinaryMatrix t = other.transpose();
  BinaryMatrix out(rows(), other.cols());
  for (std::size_t i = 0; i < rows(); ++i) out.set_row(i, t.apply(data_[i]));
  return out;
}

BinaryMatrix BinaryMatrix::transpose() const {
  BinaryMatrix t(cols_, rows());
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (get(i, j)) t.set(j, i, true);
  return t;
}

std::vector<std::string> BinaryMatrix::to_strings() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < rows(); ++i) {
    std::string s(cols_, '0');
    for (std::size_t j = 0; j < cols_; ++j)
      if (get(i, j)) s[j] = '1';
    out.push_back(std::move(s));
  }
  return out;
}

int parity(std::uint64_t x) noexcept { return std::popcount(x) & 1; }

BinaryMatrix random_linear_hash(std::size_t m, std::size_t n, Rng& rng) {
  BinaryMatrix h(m, n);
  for (std::size_t i = 0; i < m; ++i) h.set_row(i, rng());
  return h;
}

BinaryMatrix random_full_rank_hash(std::size_t m, std::size_t n, Rng& rng) {
  if (m > n) throw RankError("cannot have more independent rows than columns");
  for (;;) {
    auto h = random_linear_hash(m, n, rng);
    if (rank(h) == m) return h;
  }
}

BinaryMatrix rref(const BinaryMatrix& m, std::vector<std::size_t>* pivots) {
  BinaryMatrix r = m;
  std::vector<std::size_t> piv;
  std::size_t lead = 0;
  for (std::size_t c = 0; c < r.cols() && lead < r.rows(); ++c) {
    std::size_t p = lead;
    while (p < r.rows() && !r.get(p, c)) ++p;
    if (p == r.rows()) continue;
    if (p != lead) {
      const auto a = r.row(p), b = r.row(lead);
      r.set_row(p, b);
      r.set_row(lead, a);
    }
    for (std::size_t i = 0; i < r.rows(); ++i)
      if (i != lead && r.get(i, c)) r.set_row(i, r.row(i) ^ r.row(lead));
    piv.push_back(c);
    ++lead;
  }
  if (pivots) *pivots = std::move(piv);
  return r;
}

std::size_t rank(const BinaryMatrix& m) {
  std::vector<std::size_t> piv;
  rref(m, &piv);
  return piv.size();
}

namespace {

std::vector<std::size_t> free_columns(const std::vector<std::size_t>& pivots, std::size_t n) {
  std::vector<std::size_t> out;
  std::size_t k = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (k < pivots.size() && pivots[k] == c)
      ++k;
    else
      out.push_back(c);
  }
  return out;
}

}  // namespace

BinaryMatrix null_space(const BinaryMatrix& u) {
  std::vector<std::size_t> piv;
  const auto r = rref(u, &piv);
  const std::size_t n = u.cols();
  BinaryMatrix v(0, n);
  for (std::size_t f : free_columns(piv, n)) {
    BinaryMatrix row(1, n);
    row.set(0, f, true);
    for (std::size_t i = 0; i < piv.size(); ++i)
      if (r.get(i, f)) row.set(0, piv[i], true);
    v.append_row(row.row(0));
  }
  return v;
}

BinaryMatrix complete_basis(const BinaryMatrix& u) {
  std::vector<std::size_t> piv;
  rref(u, &piv);
  if (piv.size() != u.rows()) throw RankError("hash rows are linearly dependent");
  const std::size_t n = u.cols();
  BinaryMatrix c(0, n);
  for (std::size_t f : free_columns(piv, n)) c.append_row(std::uint64_t{1} << (n - 1 - f));
  for (std::size_t i = 0; i < u.rows(); ++i) c.append_row(u.row(i));
  return c;
}

BinaryMatrix inverse(const BinaryMatrix& g) {
  const std::size_t n = g.rows();
  if (g.cols() != n) throw DimensionError("only square binary matrices are invertible");
  BinaryMatrix a = g, inv = BinaryMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && !a.get(p, c)) ++p;
    if (p == n) throw RankError("binary matrix is singular");
    if (p != c) {
      for (BinaryMatrix* m : {&a, &inv}) {
        const auto x = m->row(p), y = m->row(c);
        m->set_row(p, y);
        m->set_row(c, x);
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      if (i != c && a.get(i, c)) {
        a.set_row(i, a.row(i) ^ a.row(c));
        inv.set_row(i, inv.row(i) ^ inv.row(c));
      }
  }
  return inv;
}

BinaryMatrix virtual_labels(const BinaryMatrix& u) {
  return inverse(complete_basis(u)).transpose();
}

Matrix pauli_power(PauliKind kind, std::uint64_t v, std::size_t n) {
  if (n >= 32) throw ResourceError("Pauli operator too large");
  const std::size_t dim = std::size_t{1} << n;
  Matrix out = Matrix::Zero(dim, dim);
  for (std::size_t x = 0; x < dim; ++x) {
    if (kind == PauliKind::Z)
      out(x, x) = parity(v & x) ? -1.0 : 1.0;
    else
      out(x ^ v, x) = 1.0;
  }
  return out;
}

MultipartiteState basis_change(const BinaryMatrix& g, const MultipartiteState& state, Role which) {
  const std::size_t ax = state.require_axis(which);
  const Dims dims = state.dims();
  const std::size_t n = g.cols();
  if (g.rows() != n || dims[ax] != (std::size_t{1} << n))
    throw DimensionError("relabeling matrix does not match the register");
  std::size_t inner = 1;
  for (std::size_t i = ax + 1; i < dims.size(); ++i) inner *= dims[i];
  const std::size_t total = state.dimension();
  const std::size_t block = dims[ax] * inner;

  std::vector<std::size_t> label(dims[ax]);
  for (std::size_t x = 0; x < dims[ax]; ++x) label[x] = g.apply(x);
  std::vector<std::size_t> perm(total);
  for (std::size_t i = 0; i < total; ++i) {
    const std::size_t outer = i / block, x = (i % block) / inner, in = i % inner;
    perm[i] = outer * block + label[x] * inner + in;
  }
  std::vector<bool> hit(total, false);
  for (std::size_t p : perm) hit[p] = true;
  for (bool h : hit)
    if (!h) throw RankError("relabeling matrix is singular");

  if (state.is_pure()) {
    const Vector& a = state.amplitudes();
    Vector out(total);
    for (std::size_t i = 0; i < total; ++i) out(perm[i]) = a(i);
    return MultipartiteState::pure(std::move(out), state.subsystems(), 1e-9);
  }
  const Matrix rho = state.density();
  Matrix out(total, total);
  for (std::size_t i = 0; i < total; ++i)
    for (std::size_t j = 0; j < total; ++j) out(perm[i], perm[j]) = rho(i, j);
  return MultipartiteState::mixed(std::move(out), state.subsystems(), 1e-9);
}

}  // namespace palab
