#pragma once

// Exact rational linear algebra: dense matrices, sparse realization matrices,
// subspaces, rank/kernel/intersection and Sylvester signatures.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ckf {

using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

class DimensionMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Dense row-major matrix of exact rationals.
class RationalMatrix {
public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols);
  RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static RationalMatrix identity(std::size_t n);
  static RationalMatrix diagonal(std::span<const Rational> diag);
  static RationalMatrix from_rows(const std::vector<RationalVector>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  RationalVector row(std::size_t r) const;
  RationalVector col(std::size_t c) const;
  void set_row(std::size_t r, std::span<const Rational> v);
  void append_row(std::span<const Rational> v);

  RationalMatrix transpose() const;
  bool is_symmetric() const;
  bool is_zero() const;

  RationalMatrix operator*(const RationalMatrix& o) const;
  RationalMatrix operator+(const RationalMatrix& o) const;
  RationalMatrix operator-(const RationalMatrix& o) const;
  RationalVector operator*(std::span<const Rational> v) const;
  bool operator==(const RationalMatrix& o) const = default;

  std::string to_string() const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Vertical concatenation (rows of a, then rows of b).
RationalMatrix stack(const RationalMatrix& a, const RationalMatrix& b);

/// Square sparse matrix used for Lie algebra realizations. Entries are kept
/// sorted by (row, col) with no explicit zeros.
class SparseMatrix {
public:
  struct Entry {
    std::uint32_t row;
    std::uint32_t col;
    Rational value;
  };

  SparseMatrix() = default;
  explicit SparseMatrix(std::size_t n) : n_(n) {}
  SparseMatrix(std::size_t n, std::vector<Entry> entries);

  static SparseMatrix unit(std::size_t n, std::size_t r, std::size_t c, const Rational& v = 1);
  static SparseMatrix from_dense(const RationalMatrix& m);

  std::size_t size() const { return n_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t nonzeros() const { return entries_.size(); }
  bool is_zero() const { return entries_.empty(); }
  Rational at(std::size_t r, std::size_t c) const;

  SparseMatrix operator*(const SparseMatrix& o) const;
  SparseMatrix operator+(const SparseMatrix& o) const;
  SparseMatrix operator-(const SparseMatrix& o) const;
  SparseMatrix scaled(const Rational& s) const;
  SparseMatrix transpose() const;
  bool operator==(const SparseMatrix& o) const;

  /// Conjugation by a signed permutation: result(perm[r], perm[c]) = sign[r]*sign[c]*m(r,c).
  SparseMatrix permuted(std::span<const std::size_t> perm, std::span<const int> sign,
                        std::size_t new_size) const;

  RationalMatrix to_dense() const;

private:
  void normalize();
  std::size_t n_ = 0;
  std::vector<Entry> entries_;
};

SparseMatrix commutator(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix linear_combination(std::span<const SparseMatrix> basis, std::span<const Rational> coeffs);

/// Rank by fraction-free (Bareiss) elimination on integer-scaled rows.
std::size_t rank(const RationalMatrix& m);

/// Rank by rational Gauss-Jordan elimination; an independent route used for cross-checks.
std::size_t rank_rational(const RationalMatrix& m);

/// Reduced row echelon form; pivot columns are written to `pivots` when given.
RationalMatrix rref(const RationalMatrix& m, std::vector<std::size_t>* pivots = nullptr);

/// Basis (as rows) of the right null space {x : m x = 0}.
RationalMatrix kernel(const RationalMatrix& m);

/// Inverse of a square matrix; throws std::domain_error when singular.
RationalMatrix inverse(const RationalMatrix& m);

/// Linear subspace of Q^n, stored as an independent set of row vectors.
class Subspace {
public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient_dim);
  /// Span of the given rows (dependent rows are dropped, order of the surviving ones kept).
  Subspace(std::size_t ambient_dim, const RationalMatrix& spanning_rows);

  static Subspace zero(std::size_t n) { return Subspace(n); }
  static Subspace full(std::size_t n);

  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t dim() const { return basis_.rows(); }
  const RationalMatrix& basis() const { return basis_; }
  RationalVector vector(std::size_t i) const { return basis_.row(i); }

  bool contains(std::span<const Rational> v) const;
  bool contains(const Subspace& o) const;
  bool operator==(const Subspace& o) const;

  /// Canonical (reduced echelon) basis; equal subspaces have equal canonical bases.
  RationalMatrix canonical_basis() const;

private:
  std::size_t ambient_dim_ = 0;
  RationalMatrix basis_;
  RationalMatrix echelon_;
  std::vector<std::size_t> pivots_;
};

Subspace intersect(const Subspace& a, const Subspace& b);
Subspace subspace_sum(const Subspace& a, const Subspace& b);

struct Signature {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t null = 0;
  bool operator==(const Signature&) const = default;
};

/// Sylvester signature of a symmetric form by exact congruence diagonalization.
Signature signature(const RationalMatrix& form);

/// Gram matrix V F V^T of the form F restricted to span of rows of V.
RationalMatrix restrict_form(const RationalMatrix& form, const RationalMatrix& rows);

std::string to_string(const Signature& s);

}  // namespace ckf
