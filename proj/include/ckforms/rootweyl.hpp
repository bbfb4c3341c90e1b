#pragma once

// Restricted root data on the split subspace, little Weyl groups and the
// subspace-disjointness test for proper actions.

#include "ckforms/embeddings.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ckf {

class WeylCutoffExceeded : public std::runtime_error {
public:
  WeylCutoffExceeded(std::uint64_t order, std::uint64_t cutoff);
  std::uint64_t order() const { return order_; }

private:
  std::uint64_t order_;
};

struct RootFactor {
  std::string type;     // "A", "B", "C", "D", "BC" or "G"
  std::size_t rank = 0;
  std::size_t offset = 0;  // first coordinate of this factor in the split subspace
  std::string label() const { return type + std::to_string(rank); }
};

struct SplitData {
  const LieAlgebra* algebra = nullptr;
  Subspace a_basis;                  // inside the algebra's coordinates
  std::vector<RootFactor> factors;
  RationalMatrix chamber_walls;      // rows are covectors on the split subspace
  RationalMatrix killing;            // Killing form restricted to the split subspace
  std::size_t rank() const { return a_basis.dim(); }
  std::string root_type() const;     // e.g. "D4+B2"
};

/// Split data for a catalog algebra or a direct sum of catalog algebras.
SplitData split_data(const LieAlgebra& g);

/// Restricted roots computed from the realization (joint eigenspaces of
/// ad(a) on g), as functionals on the a-basis, with multiplicities.
struct ComputedRoot {
  RationalVector functional;
  std::size_t multiplicity = 0;
};
std::vector<ComputedRoot> computed_roots(const LieAlgebra& g);

/// Standard root system of the given classical type in e-coordinates.
std::vector<RationalVector> standard_roots(const std::string& type, std::size_t rank);

/// Finite reflection group acting on the split subspace, as a product of factors.
class WeylGroup {
public:
  explicit WeylGroup(const SplitData& sd);

  std::size_t rank() const { return rank_; }
  std::uint64_t order() const { return order_; }
  const std::vector<RationalMatrix>& generators() const { return generators_; }

  /// Element number `index` (0 <= index < order) as a matrix; element 0 is the identity.
  RationalMatrix element(std::uint64_t index) const;

  /// Applies element `index` to an integer vector; the result is scaled by scale().
  void apply(std::uint64_t index, const std::int64_t* in, std::int64_t* out) const;
  std::int64_t scale() const { return scale_; }

private:
  struct Factor {
    std::string type;
    std::size_t rank = 0;
    std::size_t offset = 0;
    std::uint64_t order = 0;
    std::vector<RationalMatrix> matrices;            // explicit elements (G2)
    std::vector<std::vector<std::int64_t>> scaled;   // matrices times scale_
  };
  void decode(std::uint64_t index, std::vector<std::uint64_t>& parts) const;

  std::size_t rank_ = 0;
  std::uint64_t order_ = 1;
  std::int64_t scale_ = 1;
  std::vector<Factor> factors_;
  std::vector<RationalMatrix> generators_;
};

/// Materializes all elements; refuses when the order exceeds the cutoff.
std::vector<RationalMatrix> weyl_elements(const SplitData& sd, std::uint64_t cutoff = 10'000'000);

struct DisjointnessResult {
  bool disjoint = true;
  std::optional<std::uint64_t> witness_index;
  std::optional<RationalMatrix> witness;   // w with w(V_h) meeting V_l
  std::optional<RationalVector> vector;    // nonzero vector in w(V_h) and V_l
  std::uint64_t group_order = 0;
};

/// True iff w(V_h) and V_l meet only in 0 for every w in W. Throws
/// WeylCutoffExceeded when |W| is larger than the cutoff.
DisjointnessResult weyl_disjoint(const Subspace& vh, const Subspace& vl, const WeylGroup& w,
                                 std::uint64_t cutoff = 10'000'000, unsigned threads = 1);

/// Maps a vector of the split subspace into the closed positive chamber.
RationalVector chamber_representative(const SplitData& sd, const RationalVector& x);

}  // namespace ckf
