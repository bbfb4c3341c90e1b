#include "ckforms/exactlin.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <utility>

namespace ckf {

// ---------------------------------------------------------------------------
// RationalMatrix

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

RationalMatrix::RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionMismatch("ragged initializer for RationalMatrix");
    for (const auto& v : r) data_.push_back(v);
  }
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::diagonal(std::span<const Rational> diag) {
  RationalMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

RationalMatrix RationalMatrix::from_rows(const std::vector<RationalVector>& rows, std::size_t cols) {
  RationalMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) m.set_row(r, rows[r]);
  return m;
}

RationalVector RationalMatrix::row(std::size_t r) const {
  return RationalVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                        data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

RationalVector RationalMatrix::col(std::size_t c) const {
  RationalVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

void RationalMatrix::set_row(std::size_t r, std::span<const Rational> v) {
  if (v.size() != cols_) throw DimensionMismatch("set_row: length mismatch");
  std::copy(v.begin(), v.end(), data_.begin() + static_cast<std::ptrdiff_t>(r * cols_));
}

void RationalMatrix::append_row(std::span<const Rational> v) {
  if (rows_ == 0 && cols_ == 0) cols_ = v.size();
  if (v.size() != cols_) throw DimensionMismatch("append_row: length mismatch");
  data_.insert(data_.end(), v.begin(), v.end());
  ++rows_;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool RationalMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r + 1; c < cols_; ++c)
      if ((*this)(r, c) != (*this)(c, r)) return false;
  return true;
}

bool RationalMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& v) { return sgn(v) == 0; });
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const {
  if (cols_ != o.rows_) throw DimensionMismatch("matrix product: inner dimension mismatch");
  RationalMatrix out(rows_, o.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(r, k);
      if (sgn(a) == 0) continue;
      for (std::size_t c = 0; c < o.cols_; ++c) {
        const Rational& b = o(k, c);
        if (sgn(b) != 0) out(r, c) += a * b;
      }
    }
  return out;
}

RationalMatrix RationalMatrix::operator+(const RationalMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix sum: shape mismatch");
  RationalMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += o.data_[i];
  return out;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix difference: shape mismatch");
  RationalMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= o.data_[i];
  return out;
}

RationalVector RationalMatrix::operator*(std::span<const Rational> v) const {
  if (v.size() != cols_) throw DimensionMismatch("matrix-vector product: length mismatch");
  RationalVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (sgn(v[c]) != 0 && sgn((*this)(r, c)) != 0) out[r] += (*this)(r, c) * v[c];
  return out;
}

std::string RationalMatrix::to_string() const {
  std::ostringstream os;
  for (std::size_t r = 0; r < rows_; ++r) {
    os << '[';
    for (std::size_t c = 0; c < cols_; ++c) os << (c ? " " : "") << (*this)(r, c).get_str();
    os << "]\n";
  }
  return os.str();
}

RationalMatrix stack(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.rows() == 0) return b;
  if (b.rows() == 0) return a;
  if (a.cols() != b.cols()) throw DimensionMismatch("stack: column mismatch");
  RationalMatrix out(a.rows() + b.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) out.set_row(r, a.row(r));
  for (std::size_t r = 0; r < b.rows(); ++r) out.set_row(a.rows() + r, b.row(r));
  return out;
}

// ---------------------------------------------------------------------------
// SparseMatrix

SparseMatrix::SparseMatrix(std::size_t n, std::vector<Entry> entries)
    : n_(n), entries_(std::move(entries)) {
  normalize();
}

void SparseMatrix::normalize() {
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<Entry> merged;
  merged.reserve(entries_.size());
  for (auto& e : entries_) {
    if (e.row >= n_ || e.col >= n_) throw DimensionMismatch("sparse entry outside matrix");
    if (!merged.empty() && merged.back().row == e.row && merged.back().col == e.col)
      merged.back().value += e.value;
    else
      merged.push_back(std::move(e));
  }
  std::erase_if(merged, [](const Entry& e) { return sgn(e.value) == 0; });
  entries_ = std::move(merged);
}

SparseMatrix SparseMatrix::unit(std::size_t n, std::size_t r, std::size_t c, const Rational& v) {
  return SparseMatrix(n, {Entry{static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c), v}});
}

SparseMatrix SparseMatrix::from_dense(const RationalMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("SparseMatrix::from_dense: not square");
  std::vector<Entry> e;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (sgn(m(r, c)) != 0)
        e.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c), m(r, c)});
  return SparseMatrix(m.rows(), std::move(e));
}

Rational SparseMatrix::at(std::size_t r, std::size_t c) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair{r, c},
                             [](const Entry& e, const std::pair<std::size_t, std::size_t>& k) {
                               return e.row != k.first ? e.row < k.first : e.col < k.second;
                             });
  if (it != entries_.end() && it->row == r && it->col == c) return it->value;
  return 0;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& o) const {
  if (n_ != o.n_) throw DimensionMismatch("sparse product: size mismatch");
  // Row starts of o for direct access.
  std::vector<std::size_t> start(n_ + 1, 0);
  for (const auto& e : o.entries_) ++start[e.row + 1];
  std::partial_sum(start.begin(), start.end(), start.begin());
  std::vector<Entry> out;
  out.reserve(entries_.size() * 2);
  for (const auto& a : entries_)
    for (std::size_t k = start[a.col]; k < start[a.col + 1]; ++k) {
      const auto& b = o.entries_[k];
      out.push_back({a.row, b.col, a.value * b.value});
    }
  return SparseMatrix(n_, std::move(out));
}

SparseMatrix SparseMatrix::operator+(const SparseMatrix& o) const {
  if (n_ != o.n_) throw DimensionMismatch("sparse sum: size mismatch");
  std::vector<Entry> out = entries_;
  out.insert(out.end(), o.entries_.begin(), o.entries_.end());
  return SparseMatrix(n_, std::move(out));
}

SparseMatrix SparseMatrix::operator-(const SparseMatrix& o) const { return *this + o.scaled(-1); }

SparseMatrix SparseMatrix::scaled(const Rational& s) const {
  if (sgn(s) == 0) return SparseMatrix(n_);
  SparseMatrix out = *this;
  for (auto& e : out.entries_) e.value *= s;
  return out;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<Entry> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back({e.col, e.row, e.value});
  return SparseMatrix(n_, std::move(out));
}

bool SparseMatrix::operator==(const SparseMatrix& o) const {
  if (n_ != o.n_ || entries_.size() != o.entries_.size()) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& a = entries_[i];
    const auto& b = o.entries_[i];
    if (a.row != b.row || a.col != b.col || a.value != b.value) return false;
  }
  return true;
}

SparseMatrix SparseMatrix::permuted(std::span<const std::size_t> perm, std::span<const int> sign,
                                    std::size_t new_size) const {
  if (perm.size() != n_ || sign.size() != n_) throw DimensionMismatch("permuted: map length mismatch");
  std::vector<Entry> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) {
    Rational v = e.value;
    if (sign[e.row] * sign[e.col] < 0) v = -v;
    out.push_back({static_cast<std::uint32_t>(perm[e.row]), static_cast<std::uint32_t>(perm[e.col]), v});
  }
  return SparseMatrix(new_size, std::move(out));
}

RationalMatrix SparseMatrix::to_dense() const {
  RationalMatrix m(n_, n_);
  for (const auto& e : entries_) m(e.row, e.col) = e.value;
  return m;
}

SparseMatrix commutator(const SparseMatrix& a, const SparseMatrix& b) { return a * b - b * a; }

SparseMatrix linear_combination(std::span<const SparseMatrix> basis, std::span<const Rational> coeffs) {
  if (basis.size() != coeffs.size()) throw DimensionMismatch("linear_combination: length mismatch");
  if (basis.empty()) return SparseMatrix();
  std::vector<SparseMatrix::Entry> out;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (sgn(coeffs[i]) == 0) continue;
    for (const auto& e : basis[i].entries()) out.push_back({e.row, e.col, e.value * coeffs[i]});
  }
  return SparseMatrix(basis.front().size(), std::move(out));
}

// ---------------------------------------------------------------------------
// Elimination

std::size_t rank(const RationalMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  // Scale each row to primitive integers.
  std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    mpz_class l = 1;
    for (std::size_t c = 0; c < cols; ++c)
      if (sgn(m(r, c)) != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).get_den_mpz_t());
    for (std::size_t c = 0; c < cols; ++c)
      if (sgn(m(r, c)) != 0) a[r][c] = m(r, c).get_num() * (l / m(r, c).get_den());
  }
  mpz_class prev = 1;
  std::size_t rk = 0;
  for (std::size_t c = 0; c < cols && rk < rows; ++c) {
    std::size_t piv = rows;
    // Prefer the pivot with the fewest bits to limit growth.
    for (std::size_t r = rk; r < rows; ++r)
      if (sgn(a[r][c]) != 0 &&
          (piv == rows || mpz_sizeinbase(a[r][c].get_mpz_t(), 2) < mpz_sizeinbase(a[piv][c].get_mpz_t(), 2)))
        piv = r;
    if (piv == rows) continue;
    std::swap(a[piv], a[rk]);
    const mpz_class p = a[rk][c];
    std::vector<std::size_t> nz;
    for (std::size_t j = c + 1; j < cols; ++j)
      if (sgn(a[rk][j]) != 0) nz.push_back(j);
    for (std::size_t r = rk + 1; r < rows; ++r) {
      const mpz_class f = a[r][c];
      const bool unit_prev = prev == 1;
      for (std::size_t j = c + 1; j < cols; ++j) {
        mpz_class& x = a[r][j];
        if (sgn(f) == 0 || sgn(a[rk][j]) == 0) {
          if (sgn(x) == 0) continue;
          x *= p;
        } else {
          x = p * x - f * a[rk][j];
        }
        if (!unit_prev) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), prev.get_mpz_t());
      }
      a[r][c] = 0;
    }
    prev = p;
    ++rk;
  }
  return rk;
}

RationalMatrix rref(const RationalMatrix& m, std::vector<std::size_t>* pivots) {
  RationalMatrix a = m;
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (sgn(a(i, c)) != 0) {
        p = i;
        break;
      }
    if (p == rows) continue;
    if (p != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(a(p, j), a(r, j));
    const Rational inv = 1 / a(r, c);
    std::vector<std::size_t> nz;
    for (std::size_t j = c; j < cols; ++j)
      if (sgn(a(r, j)) != 0) {
        a(r, j) *= inv;
        nz.push_back(j);
      }
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(a(i, c)) == 0) continue;
      const Rational f = a(i, c);
      for (std::size_t j : nz) a(i, j) -= f * a(r, j);
    }
    piv.push_back(c);
    ++r;
  }
  if (pivots) *pivots = std::move(piv);
  return a;
}

std::size_t rank_rational(const RationalMatrix& m) {
  std::vector<std::size_t> piv;
  rref(m, &piv);
  return piv.size();
}

RationalMatrix kernel(const RationalMatrix& m) {
  std::vector<std::size_t> piv;
  const RationalMatrix r = rref(m, &piv);
  const std::size_t cols = m.cols();
  std::vector<bool> is_pivot(cols, false);
  for (auto c : piv) is_pivot[c] = true;
  RationalMatrix out(0, cols);
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    RationalVector v(cols);
    v[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i)
      if (sgn(r(i, f)) != 0) v[piv[i]] = -r(i, f);
    out.append_row(v);
  }
  return out;
}

RationalMatrix inverse(const RationalMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("inverse: matrix not square");
  const std::size_t n = m.rows();
  RationalMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  std::vector<std::size_t> piv;
  const RationalMatrix r = rref(aug, &piv);
  if (piv.size() < n || piv[n - 1] >= n) throw std::domain_error("inverse: singular matrix");
  RationalMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = r(i, n + j);
  return out;
}

// ---------------------------------------------------------------------------
// Subspace

namespace {

// Reduce v against an echelon basis (rows normalized with unit pivots in `piv`).
RationalVector reduce(const RationalMatrix& echelon, const std::vector<std::size_t>& piv, RationalVector v) {
  for (std::size_t i = 0; i < piv.size(); ++i) {
    const Rational f = v[piv[i]];
    if (sgn(f) == 0) continue;
    for (std::size_t j = 0; j < v.size(); ++j)
      if (sgn(echelon(i, j)) != 0) v[j] -= f * echelon(i, j);
  }
  return v;
}

bool is_zero_vector(const RationalVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) == 0; });
}

}  // namespace

Subspace::Subspace(std::size_t ambient_dim)
    : ambient_dim_(ambient_dim), basis_(0, ambient_dim), echelon_(0, ambient_dim) {}

Subspace::Subspace(std::size_t ambient_dim, const RationalMatrix& spanning_rows)
    : ambient_dim_(ambient_dim), basis_(0, ambient_dim), echelon_(0, ambient_dim) {
  if (spanning_rows.rows() > 0 && spanning_rows.cols() != ambient_dim)
    throw DimensionMismatch("Subspace: vector length differs from ambient dimension");
  RationalMatrix& echelon = echelon_;
  std::vector<std::size_t>& piv = pivots_;
  for (std::size_t r = 0; r < spanning_rows.rows(); ++r) {
    RationalVector v = reduce(echelon, piv, spanning_rows.row(r));
    if (is_zero_vector(v)) continue;
    basis_.append_row(spanning_rows.row(r));
    std::size_t p = 0;
    while (sgn(v[p]) == 0) ++p;
    const Rational inv = 1 / v[p];
    for (auto& x : v) x *= inv;
    // Keep the echelon rows reduced against the new pivot as well.
    for (std::size_t i = 0; i < piv.size(); ++i) {
      const Rational f = echelon(i, p);
      if (sgn(f) == 0) continue;
      for (std::size_t j = 0; j < ambient_dim; ++j)
        if (sgn(v[j]) != 0) echelon(i, j) -= f * v[j];
    }
    echelon.append_row(v);
    piv.push_back(p);
  }
}

Subspace Subspace::full(std::size_t n) { return Subspace(n, RationalMatrix::identity(n)); }

bool Subspace::contains(std::span<const Rational> v) const {
  if (v.size() != ambient_dim_) throw DimensionMismatch("Subspace::contains: length mismatch");
  return is_zero_vector(reduce(echelon_, pivots_, RationalVector(v.begin(), v.end())));
}

bool Subspace::contains(const Subspace& o) const {
  if (o.ambient_dim_ != ambient_dim_) throw DimensionMismatch("Subspace::contains: ambient mismatch");
  for (std::size_t r = 0; r < o.dim(); ++r)
    if (!contains(o.basis_.row(r))) return false;
  return true;
}

bool Subspace::operator==(const Subspace& o) const {
  return ambient_dim_ == o.ambient_dim_ && dim() == o.dim() && contains(o);
}

RationalMatrix Subspace::canonical_basis() const {
  std::vector<std::size_t> order(pivots_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pivots_[a] < pivots_[b]; });
  RationalMatrix out(0, ambient_dim_);
  for (std::size_t i : order) out.append_row(echelon_.row(i));
  return out;
}

Subspace intersect(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionMismatch("intersect: ambient dimensions differ");
  const std::size_t n = a.ambient_dim();
  if (a.dim() == 0 || b.dim() == 0) return Subspace(n);
  // Left null space of [A; B]: x A + y B = 0, then x A spans the intersection.
  const RationalMatrix k = kernel(stack(a.basis(), b.basis()).transpose());
  RationalMatrix vecs(0, n);
  for (std::size_t r = 0; r < k.rows(); ++r) {
    RationalVector v(n);
    for (std::size_t i = 0; i < a.dim(); ++i) {
      if (sgn(k(r, i)) == 0) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (sgn(a.basis()(i, j)) != 0) v[j] += k(r, i) * a.basis()(i, j);
    }
    vecs.append_row(v);
  }
  return Subspace(n, vecs);
}

Subspace subspace_sum(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionMismatch("subspace_sum: ambient dimensions differ");
  return Subspace(a.ambient_dim(), stack(a.basis(), b.basis()));
}

// ---------------------------------------------------------------------------
// Forms

Signature signature(const RationalMatrix& form) {
  if (!form.is_symmetric()) throw std::invalid_argument("signature: form is not symmetric");
  RationalMatrix a = form;
  const std::size_t n = a.rows();
  Signature s;
  auto swap_index = [&](std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < n; ++k) std::swap(a(i, k), a(j, k));
    for (std::size_t k = 0; k < n; ++k) std::swap(a(k, i), a(k, j));
  };
  for (std::size_t k = 0; k < n; ++k) {
    if (sgn(a(k, k)) == 0) {
      std::size_t j = k + 1;
      while (j < n && sgn(a(j, j)) == 0) ++j;
      if (j < n) {
        swap_index(k, j);
      } else {
        j = k + 1;
        while (j < n && sgn(a(k, j)) == 0) ++j;
        if (j == n) {
          ++s.null;
          continue;
        }
        // e_k <- e_k + e_j makes the diagonal entry 2 a(k,j) + a(j,j) = 2 a(k,j) != 0.
        for (std::size_t c = 0; c < n; ++c) a(k, c) += a(j, c);
        for (std::size_t r = 0; r < n; ++r) a(r, k) += a(r, j);
      }
    }
    const Rational d = a(k, k);
    (sgn(d) > 0 ? s.positive : s.negative) += 1;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (sgn(a(i, k)) == 0) continue;
      const Rational f = a(i, k) / d;
      for (std::size_t c = k; c < n; ++c) a(i, c) -= f * a(k, c);
      for (std::size_t r = k; r < n; ++r) a(r, i) -= f * a(r, k);
    }
  }
  return s;
}

RationalMatrix restrict_form(const RationalMatrix& form, const RationalMatrix& rows) {
  return rows * form * rows.transpose();
}

std::string to_string(const Signature& s) {
  return "(" + std::to_string(s.positive) + "," + std::to_string(s.negative) + "," + std::to_string(s.null) + ")";
}

}  // namespace ckf
