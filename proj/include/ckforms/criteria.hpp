#pragma once

// Decision procedure for triples (g, h, l): g = h + l, compactness of h ∩ l,
// the Weyl disjointness oracle and the case label of the classification.

#include "ckforms/rootweyl.hpp"

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace ckf {

struct Triple {
  std::string name;
  AlgebraPtr g1;
  AlgebraPtr g2;  // null for a simple ambient
  ProductEmbedding h;
  ProductEmbedding l;

  const AlgebraPtr& ambient() const { return h.ambient(); }
  std::string ambient_label() const;
};

/// Checks that h and l live in the same ambient and derives the name when empty.
Triple make_triple(ProductEmbedding h, ProductEmbedding l, std::string name = "");

struct SumCheck {
  bool holds = false;
  std::size_t dim_g = 0, dim_h = 0, dim_l = 0, dim_intersection = 0;
  std::size_t rank = 0;  // rank of the concatenated bases
};

struct CompactCheck {
  bool compact = false;
  Signature signature;
  RationalMatrix basis;  // rows: basis of h ∩ l in ambient coordinates
  std::size_t dim() const { return basis.rows(); }
};

struct WeylCheck {
  bool proper = false;
  std::uint64_t group_order = 0;
  std::optional<std::uint64_t> witness_index;
  std::optional<RationalMatrix> witness;
  std::optional<RationalVector> vector;
};

enum class CaseLabel { Case1, Case2, Case3, Case4, Case5, SimpleDecomposition, Trivial, Reject };
std::string to_string(CaseLabel c);

struct Verdict {
  std::string triple;
  SumCheck sum;
  CompactCheck compact;
  std::optional<WeylCheck> weyl;
  std::string weyl_note;  // why the Weyl oracle was not run
  CaseLabel label = CaseLabel::Reject;
  std::string reason;     // failed conditions for Reject, first one first
  std::vector<std::string> failed;  // "sum", "compact_intersection", "case"
  std::vector<std::string> evidence;
  bool trivial = false;
  bool roles_swapped = false;
  bool factors_swapped = false;

  bool standard_form() const { return sum.holds && compact.compact; }
  nlohmann::ordered_json to_json() const;
};

SumCheck check_sum(const Triple& t);
CompactCheck check_compact_intersection(const Triple& t);
/// Weyl disjointness of the adapted split parts; nullopt when |W| exceeds the cutoff.
std::optional<WeylCheck> check_weyl(const Triple& t, std::uint64_t cutoff = 10'000'000, unsigned threads = 1);

struct ClassifyOptions {
  bool run_weyl = true;
  bool weyl_without_sum = true;  // also run the Weyl oracle when h + l != g
  std::uint64_t weyl_cutoff = 10'000'000;
  unsigned threads = 1;
};

Verdict classify_triple(const Triple& t, const ClassifyOptions& opts = {});

/// Subspace of g_i spanned by the projections of image(e) (i = 0 or 1).
Subspace projection(const ProductEmbedding& e, std::size_t i);

}  // namespace ckf
