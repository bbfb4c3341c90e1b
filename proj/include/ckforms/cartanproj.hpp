#pragma once

// Floating-point Cartan projections for products of classical matrix groups
// and the gap experiment d(mu(l), mu(H)) >= 2 eps |mu(l)| - C.

#include "ckforms/rootweyl.hpp"

#include <boost/multiprecision/float128.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace ckf {

using Real = boost::multiprecision::float128;
using RealMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

namespace tolerance {
inline constexpr double form = 1e-9;
inline constexpr double recovery = 1e-9;
inline constexpr double union_consistency = 1e-6;
inline constexpr double chamber = 1e-9;
}  // namespace tolerance

class CartanError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct GroupFactor {
  RealFormSpec spec;
  RealMatrix matrix;
};

/// Element of a product of groups, one matrix per simple factor.
struct GroupElement {
  std::vector<GroupFactor> factors;

  std::string realization() const;
  GroupElement operator*(const GroupElement& o) const;
  /// Inverse through the invariant form: g^-1 = J g^T J.
  GroupElement inverse() const;
};

struct ChamberVector {
  std::vector<double> coordinates;
  bool chamber_normalized = false;
};

/// Invariant symmetric form of the realization (diagonal +-1).
RealMatrix invariant_form(const RealFormSpec& spec);
/// max |g^T J g - J| relative to max(1, |g|^2).
double form_defect(const GroupFactor& f);

/// Group G of a catalog algebra (simple or a sum of two), with its split data.
class ProductGroup {
public:
  explicit ProductGroup(AlgebraPtr g);

  const AlgebraPtr& algebra() const { return g_; }
  const SplitData& split() const { return sd_; }
  const std::vector<RealFormSpec>& factors() const { return specs_; }
  std::size_t rank() const { return sd_.rank(); }
  const Eigen::MatrixXd& killing() const { return killing_; }

  GroupElement identity() const;
  /// exp of an element of the Lie algebra given by coordinates; used for the compact part.
  GroupElement exp_compact(const std::vector<double>& coords) const;
  /// exp(sum t_k A_k) for a split vector t, by hyperbolic rotations.
  GroupElement exp_split(const std::vector<double>& t) const;
  /// Coordinates of a basis of the theta-fixed subalgebra.
  const RationalMatrix& compact_basis() const { return k_basis_; }

  ChamberVector cartan_projection(const GroupElement& g) const;
  double norm(const ChamberVector& v) const;
  double norm(const std::vector<double>& v) const;
  bool in_chamber(const ChamberVector& v) const;
  /// Block of split coordinates belonging to factor i.
  std::pair<std::size_t, std::size_t> split_range(std::size_t i) const;

private:
  AlgebraPtr g_;
  SplitData sd_;
  std::vector<RealFormSpec> specs_;
  std::vector<std::size_t> coord_offset_;                 // first algebra coordinate per factor
  struct SplitPair {
    std::size_t i = 0, j = 0;                            // symmetric entry (i, j) of the realization
    std::vector<std::pair<std::size_t, double>> terms;   // (split index, coefficient)
  };
  std::vector<std::vector<Eigen::MatrixXd>> basis_;       // per factor, double realization of each basis element
  std::vector<std::vector<SplitPair>> split_pairs_;       // per factor
  std::vector<std::size_t> split_offset_;
  Eigen::MatrixXd killing_;
  Eigen::MatrixXd walls_;
  RationalMatrix k_basis_;
};

/// mu of a single simple-group element, in chamber coordinates of its split subspace.
std::vector<double> factor_cartan_projection(const GroupFactor& f);

/// Point-to-union-of-subspaces distance in a Euclidean structure given by a Gram matrix.
class SubspaceUnion {
public:
  SubspaceUnion(std::vector<RationalMatrix> spans, const Eigen::MatrixXd& gram);
  std::size_t size() const { return projectors_.size(); }
  double distance(const std::vector<double>& x) const;

private:
  Eigen::MatrixXd gram_;
  std::vector<Eigen::MatrixXd> projectors_;
};

/// Distinct Weyl translates w(V) of a subspace of the split subspace.
std::vector<RationalMatrix> weyl_translates(const Subspace& v, const WeylGroup& w, std::uint64_t cutoff = 10'000'000);

struct GapSpace {
  std::string key;
  std::string description;
  AlgebraPtr g;
  ProductEmbedding h;
  ProductEmbedding l;
};

const std::vector<std::string>& gap_space_keys();
/// Throws NotInCatalog for an unknown key.
GapSpace gap_space(const std::string& key);

struct GapSample {
  double norm = 0;      // |mu(l)|
  double distance = 0;  // d(mu(l), mu(H))
};

struct GapReport {
  std::string space;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double fitted_epsilon = 0;
  double fitted_C = 0;
  double min_margin = 0;
  std::size_t translates = 0;
  double max_norm = 0;
  nlohmann::ordered_json to_json() const;
};

/// Random engine of sample `index` derived from the master seed.
std::mt19937_64 sample_engine(std::uint64_t seed, std::uint64_t index);

/// Random elements k1 exp(Y) k2 of a subgroup of G given by its compact part
/// (rows in algebra coordinates) and split part (rows in split coordinates).
class SubgroupSampler {
public:
  SubgroupSampler(const ProductGroup& g, const RationalMatrix& compact_rows, const RationalMatrix& split_rows);
  /// The whole group.
  static SubgroupSampler full(const ProductGroup& g);
  /// The subgroup with Lie algebra image(e); its split part is adapted_split_part(e).
  static SubgroupSampler of(const ProductGroup& g, const Embedding& e);

  GroupElement random_compact(std::mt19937_64& rng) const;
  /// Unit vector (Euclidean in split coordinates) in the split part.
  std::vector<double> random_split_direction(std::mt19937_64& rng) const;
  GroupElement sample(double radius, std::mt19937_64& rng) const;

private:
  const ProductGroup* g_;
  Eigen::MatrixXd compact_;  // algebra dim x compact dim
  Eigen::MatrixXd split_;    // rank x split dim
};

/// Radius distribution of the gap experiment: exp(u ln 51) - 1 for uniform u, in [0, 50].
double sample_radius(std::mt19937_64& rng);

GapReport gap_experiment(const std::string& space, std::uint64_t samples, std::uint64_t seed, unsigned threads = 1);
/// Fit of (eps, C) and the margin from raw samples.
GapReport fit_gap(const std::vector<GapSample>& samples);

}  // namespace ckf
