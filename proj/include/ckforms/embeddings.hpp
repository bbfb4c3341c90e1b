#pragma once

// Catalog of subalgebra embeddings (block, complex structure, quaternionic,
// spin, g2 in so(3,4)) plus product and twisted-diagonal constructions.

#include "ckforms/liealg.hpp"
#include "ckforms/realforms.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ckf {

using AlgebraPtr = std::shared_ptr<const LieAlgebra>;

class NotInCatalog : public std::invalid_argument {
public:
  NotInCatalog(const std::string& what, std::vector<std::string> suggestions);
  const std::vector<std::string>& suggestions() const { return suggestions_; }

private:
  std::vector<std::string> suggestions_;
};

/// Shared, lazily built realization of a catalog algebra ("so(3,4)", "g2(2)").
AlgebraPtr catalog_algebra(const RealFormSpec& spec);
AlgebraPtr catalog_algebra(const std::string& name);
/// g1 (+) g2 of two catalog algebras; cached by name.
AlgebraPtr catalog_sum(const AlgebraPtr& g1, const AlgebraPtr& g2);
/// Zero-dimensional algebra.
AlgebraPtr zero_algebra();

struct Embedding {
  std::string key;
  std::string variant;
  AlgebraPtr source;
  AlgebraPtr target;
  RationalMatrix map;  // target.dim x source.dim; column i = image of source basis element i

  Subspace image() const;
  RationalVector apply(std::span<const Rational> x) const;
};

struct EmbeddingCertificate {
  bool injective = false;
  bool homomorphism = false;
  bool theta_compatible = false;
  bool adapted = false;
  std::size_t split_dim = 0;
  std::string detail;
  bool ok() const { return injective && homomorphism && theta_compatible && adapted; }
};

EmbeddingCertificate certify(const Embedding& e);

/// Builds an embedding from a map on realization matrices; throws if an image
/// leaves the target span.
Embedding embedding_from_matrices(std::string key, std::string variant, AlgebraPtr source, AlgebraPtr target,
                                  const std::function<SparseMatrix(const SparseMatrix&)>& f);

Embedding identity_embedding(const RealFormSpec& g);
Embedding block_embedding(const RealFormSpec& sub, const RealFormSpec& ambient);
Embedding complex_structure_embedding(const RealFormSpec& sub, const RealFormSpec& ambient);
Embedding quaternionic_embedding(const RealFormSpec& sub, const RealFormSpec& ambient);
Embedding g2_embedding();
/// Spin representation so(p,q) -> so(r,s) on R^(2^k).
Embedding spin_embedding(int p, int q);
/// Spinor target of spin_embedding(p, q).
RealFormSpec spin_target(int p, int q);

/// Positive and negative coordinate maps of the block embedding (before realification).
std::vector<std::size_t> block_index_map(const RealFormSpec& sub, const RealFormSpec& ambient);

/// image(e) intersected with the split subspace of the target, in coordinates
/// of the target's a_basis. Throws std::runtime_error when its dimension
/// differs from the real rank of the source.
Subspace adapted_split_part(const Embedding& e);

enum class ProductMode { Factor, Product, Diagonal };

/// Subalgebra of a simple ambient g1, or of g1 (+) g2.
struct ProductEmbedding {
  ProductMode mode = ProductMode::Factor;
  std::optional<Embedding> left;   // into g1
  std::optional<Embedding> right;  // into g2
  AlgebraPtr g1;
  AlgebraPtr g2;                   // null for a simple ambient
  Embedding combined;              // source -> ambient (g1 or g1 (+) g2)

  std::string label() const;
  const AlgebraPtr& ambient() const { return combined.target; }
  std::size_t dim() const { return combined.source->dim(); }
};

ProductEmbedding simple_embedding(const Embedding& e);
ProductEmbedding zero_embedding(const AlgebraPtr& g1, const AlgebraPtr& g2);
/// left (+) right inside g1 (+) g2; either part may be absent.
ProductEmbedding product_embedding(std::optional<Embedding> left, std::optional<Embedding> right,
                                   const AlgebraPtr& g1, const AlgebraPtr& g2);
/// Twisted diagonal {(iota(X), X)} of g2 inside g1 (+) g2.
ProductEmbedding diagonal_embedding(const Embedding& iota, const AlgebraPtr& g2);

/// Rule-based catalog addressed by keys "<ambient>:<sub>:<variant>".
class Catalog {
public:
  static const std::vector<std::string>& variants();

  /// Validated embedding; throws NotInCatalog for unknown or disabled pairs.
  const Embedding& lookup(const std::string& ambient, const std::string& sub, const std::string& variant);
  const Embedding& lookup(const std::string& key);
  /// First variant (in the order of variants()) realizing sub inside ambient, if any.
  std::optional<std::string> default_variant(const std::string& ambient, const std::string& sub);
  bool available(const std::string& ambient, const std::string& sub, const std::string& variant);

  void disable(const std::string& key);
  void enable_all();
  bool disabled(const std::string& key) const;

  static std::string make_key(const std::string& ambient, const std::string& sub, const std::string& variant);

private:
  std::optional<Embedding> build(const RealFormSpec& a, const RealFormSpec& s, const std::string& variant);
  std::vector<std::string> suggestions(const std::string& ambient, const std::string& sub);

  mutable std::recursive_mutex mu_;
  std::map<std::string, std::unique_ptr<Embedding>> cache_;
  std::set<std::string> failed_;
  std::set<std::string> disabled_;
};

Catalog& default_catalog();

}  // namespace ckf
