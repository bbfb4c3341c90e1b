#pragma once

// Lie algebras given by a basis of rational matrices (or by structure
// constants), with Killing form and Cartan involution in basis coordinates.

#include "ckforms/exactlin.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ckf {

using SparseVector = std::vector<std::pair<std::uint32_t, Rational>>;

RationalVector densify(const SparseVector& v, std::size_t dim);
SparseVector sparsify(std::span<const Rational> v);

/// Maximal split abelian subspace data attached by the real-form constructors.
struct SplitMetadata {
  RationalMatrix a_basis;                 // rows: coordinates of A_1..A_r
  std::vector<std::string> factor_types;  // restricted root type per simple ideal, e.g. "B2"
  std::vector<std::size_t> factor_ranks;
};

class LieAlgebra {
public:
  /// Builds the algebra spanned by the given matrices. The span must be closed
  /// under the commutator and under X -> X^T; the Cartan involution is
  /// X -> -X^T and the Killing form is computed from the structure constants.
  static LieAlgebra from_matrices(std::string name, std::vector<SparseMatrix> basis);

  /// Abstract algebra from structure constants: brackets[i * dim + j] = [e_i, e_j].
  static LieAlgebra from_structure_constants(std::string name, std::size_t dim,
                                             std::vector<SparseVector> brackets, RationalMatrix theta);

  /// g1 (+) g2 with block-diagonal realization; coordinates of g1 come first.
  static LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }

  bool has_realization() const { return !basis_.empty() || dim_ == 0; }
  std::size_t realization_size() const { return realization_size_; }
  const std::vector<SparseMatrix>& basis() const { return basis_; }

  const RationalMatrix& killing() const { return killing_; }
  const RationalMatrix& theta() const { return theta_; }

  /// Structure constants [e_i, e_j] as a sparse coordinate vector.
  const SparseVector& basis_bracket(std::size_t i, std::size_t j) const { return brackets_[i * dim_ + j]; }
  RationalVector bracket(std::span<const Rational> x, std::span<const Rational> y) const;

  /// Coordinates of a matrix in the realization basis, or nullopt if it is not in the span.
  std::optional<RationalVector> coordinates(const SparseMatrix& m) const;
  SparseMatrix element(std::span<const Rational> coords) const;

  /// Sizes of the simple (or at least direct-summand) factors, in coordinate order.
  const std::vector<std::size_t>& factor_dims() const { return factor_dims_; }
  const std::vector<std::string>& factor_names() const { return factor_names_; }

  const std::optional<SplitMetadata>& split() const { return split_; }
  void set_split(SplitMetadata s) { split_ = std::move(s); }

  /// Copy with one structure constant replaced; used for fault-injection tests.
  LieAlgebra with_bracket(std::size_t i, std::size_t j, SparseVector value) const;

private:
  void compute_killing();
  void build_coordinate_map();

  std::string name_;
  std::size_t dim_ = 0;
  std::size_t realization_size_ = 0;
  std::vector<SparseMatrix> basis_;
  std::vector<SparseVector> brackets_;
  RationalMatrix killing_;
  RationalMatrix theta_;
  std::vector<std::size_t> factor_dims_;
  std::vector<std::string> factor_names_;
  std::optional<SplitMetadata> split_;

  // Coordinate extraction: coords = pivot_inverse_ * (entries at pivot positions).
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pivot_positions_;
  RationalMatrix pivot_inverse_;
};

struct ValidationCheck {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool killing_degenerate = false;
  bool ok() const;
  const ValidationCheck* find(const std::string& name) const;
  std::string summary() const;
};

/// Checks closure, Jacobi on all basis triples, theta^2 = 1, theta an
/// automorphism, Killing theta-invariance and the definiteness of the Killing
/// form on the theta eigenspaces. Degenerate Killing forms are flagged and the
/// definiteness checks are skipped.
ValidationReport validate_structure(const LieAlgebra& g);

struct SubalgebraHandle {
  const LieAlgebra* parent = nullptr;
  Subspace space;
  std::size_t dim() const { return space.dim(); }
};

/// Smallest bracket-closed subspace containing the input.
SubalgebraHandle span_closure(const LieAlgebra& g, const Subspace& vectors);

bool is_bracket_closed(const LieAlgebra& g, const Subspace& s);

struct CompactnessCertificate {
  bool compact = false;
  Signature signature;
};

/// True iff the Killing form of g is negative definite on s.
CompactnessCertificate is_compactly_embedded(const LieAlgebra& g, const SubalgebraHandle& s);

/// +1 and -1 eigenspaces of theta.
Subspace compact_part(const LieAlgebra& g);
Subspace noncompact_part(const LieAlgebra& g);

}  // namespace ckf
