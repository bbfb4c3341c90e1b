#include "ckforms/cartanproj.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <exception>
#include <set>
#include <thread>

namespace ckf {

namespace {

double to_double(const Rational& q) { return q.get_d(); }

std::size_t field_multiplicity(const RealFormSpec& s) {
  switch (s.family) {
    case Family::SO: return 1;
    case Family::SU: return 2;
    case Family::SP: return 4;
    case Family::G2: break;
  }
  throw CartanError("no Cartan projection for the " + s.name() + " realization");
}

// Nearest orthogonal matrix by Newton's polar iteration.
RealMatrix orthogonalize(RealMatrix k) {
  for (int it = 0; it < 3; ++it) k = (k + k.inverse().transpose()) / 2;
  return k;
}

// For a form-preserving g = [[A, B], [C, D]] the diagonal blocks are invertible
// and well conditioned; g lies in the identity component iff det A, det D > 0.
bool identity_component(const GroupFactor& f) {
  const long n = f.matrix.rows();
  const long p = static_cast<long>(field_multiplicity(f.spec)) * f.spec.p;
  const bool a = p == 0 || f.matrix.topLeftCorner(p, p).partialPivLu().determinant() > 0;
  const bool d = p == n || f.matrix.bottomRightCorner(n - p, n - p).partialPivLu().determinant() > 0;
  return a && d;
}

}  // namespace

std::string GroupElement::realization() const {
  std::string s;
  for (const auto& f : factors) {
    if (!s.empty()) s += "x";
    std::string n = f.spec.name();
    for (std::size_t i = 0; i < n.size() && n[i] != '('; ++i) n[i] = static_cast<char>(std::toupper(n[i]));
    s += n;
  }
  return s;
}

GroupElement GroupElement::operator*(const GroupElement& o) const {
  if (o.factors.size() != factors.size()) throw CartanError("product of elements of different groups");
  GroupElement r;
  for (std::size_t i = 0; i < factors.size(); ++i) r.factors.push_back({factors[i].spec, factors[i].matrix * o.factors[i].matrix});
  return r;
}

GroupElement GroupElement::inverse() const {
  GroupElement r;
  for (const auto& f : factors) {
    const RealMatrix j = invariant_form(f.spec);
    r.factors.push_back({f.spec, j * f.matrix.transpose() * j});
  }
  return r;
}

RealMatrix invariant_form(const RealFormSpec& spec) {
  const std::size_t d = field_multiplicity(spec), n = spec.matrix_size();
  RealMatrix j = RealMatrix::Zero(static_cast<long>(n), static_cast<long>(n));
  for (std::size_t i = 0; i < n; ++i) j(static_cast<long>(i), static_cast<long>(i)) = i / d < static_cast<std::size_t>(spec.p) ? 1 : -1;
  return j;
}

double form_defect(const GroupFactor& f) {
  const RealMatrix j = invariant_form(f.spec);
  if (f.matrix.rows() != j.rows() || f.matrix.cols() != j.cols()) return INFINITY;
  const Real err = (f.matrix.transpose() * j * f.matrix - j).cwiseAbs().maxCoeff();
  const Real size = f.matrix.cwiseAbs().maxCoeff();
  return static_cast<double>(err / std::max(Real(1), size * size));
}

std::vector<double> factor_cartan_projection(const GroupFactor& f) {
  const std::size_t d = field_multiplicity(f.spec);
  const std::size_t p = static_cast<std::size_t>(std::min(f.spec.p, f.spec.q));
  Eigen::JacobiSVD<RealMatrix> svd(f.matrix);
  if (svd.info() != Eigen::Success) throw CartanError("singular value decomposition failed");
  const auto& sv = svd.singularValues();
  std::vector<double> t(p);
  for (std::size_t i = 0; i < p; ++i) t[i] = static_cast<double>(log(sv(static_cast<long>(d * i))));
  // The D-type chamber keeps the sign of the last coordinate: on the identity
  // component it is the sign of det of the off-diagonal block.
  if (f.spec.family == Family::SO && f.spec.p == f.spec.q && p > 0) {
    const Real det = f.matrix.topRightCorner(static_cast<long>(p), static_cast<long>(p)).determinant();
    if (det < 0) t[p - 1] = -t[p - 1];
  }
  return t;
}

// ---------------------------------------------------------------------------
// ProductGroup

ProductGroup::ProductGroup(AlgebraPtr g) : g_(std::move(g)), sd_(split_data(*g_)) {
  std::size_t offset = 0, split_offset = 0;
  for (std::size_t fi = 0; fi < g_->factor_names().size(); ++fi) {
    const RealFormSpec spec = parse_real_form(g_->factor_names()[fi]);
    field_multiplicity(spec);
    specs_.push_back(spec);
    coord_offset_.push_back(offset);
    split_offset_.push_back(split_offset);
    const AlgebraPtr f = catalog_algebra(spec);
    std::vector<Eigen::MatrixXd> mats;
    for (const auto& b : f->basis()) {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<long>(b.size()), static_cast<long>(b.size()));
      for (const auto& e : b.entries()) m(e.row, e.col) = to_double(e.value);
      mats.push_back(std::move(m));
    }
    basis_.push_back(std::move(mats));
    offset += f->dim();
    split_offset += static_cast<std::size_t>(spec.real_rank());
  }
  if (offset != g_->dim()) throw CartanError(g_->name() + ": factor dimensions do not add up");
  if (split_offset != sd_.rank()) throw CartanError(g_->name() + ": factor ranks do not add up");

  // Symmetric index pairs of the split elements, per factor.
  const RationalMatrix& a = g_->split()->a_basis;
  split_pairs_.resize(specs_.size());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    std::size_t fi = specs_.size() - 1;
    while (fi > 0 && split_offset_[fi] > k) --fi;
    const AlgebraPtr f = catalog_algebra(specs_[fi]);
    RationalVector local(f->dim());
    for (std::size_t i = 0; i < f->dim(); ++i) local[i] = a(k, coord_offset_[fi] + i);
    const SparseMatrix m = f->element(local);
    for (const auto& e : m.entries()) {
      if (e.row == e.col) throw CartanError("split element with diagonal entries");
      if (e.row > e.col) continue;
      auto& pairs = split_pairs_[fi];
      auto it = std::find_if(pairs.begin(), pairs.end(), [&](const SplitPair& s) { return s.i == e.row && s.j == e.col; });
      if (it == pairs.end()) {
        pairs.push_back({e.row, e.col, {}});
        it = pairs.end() - 1;
      }
      it->terms.emplace_back(k, to_double(e.value));
    }
  }
  for (const auto& pairs : split_pairs_) {
    std::set<std::size_t> used;
    for (const auto& s : pairs)
      if (!used.insert(s.i).second || !used.insert(s.j).second) throw CartanError("split elements act on overlapping pairs");
  }

  const std::size_t r = sd_.rank();
  killing_ = Eigen::MatrixXd(static_cast<long>(r), static_cast<long>(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) killing_(static_cast<long>(i), static_cast<long>(j)) = to_double(sd_.killing(i, j));
  walls_ = Eigen::MatrixXd(static_cast<long>(sd_.chamber_walls.rows()), static_cast<long>(r));
  for (std::size_t i = 0; i < sd_.chamber_walls.rows(); ++i)
    for (std::size_t j = 0; j < r; ++j) walls_(static_cast<long>(i), static_cast<long>(j)) = to_double(sd_.chamber_walls(i, j));

  RationalMatrix t = g_->theta();
  for (std::size_t i = 0; i < t.rows(); ++i) t(i, i) -= 1;
  k_basis_ = kernel(t);
}

GroupElement ProductGroup::identity() const {
  GroupElement e;
  for (const auto& s : specs_) {
    const long n = static_cast<long>(s.matrix_size());
    e.factors.push_back({s, RealMatrix::Identity(n, n)});
  }
  return e;
}

GroupElement ProductGroup::exp_compact(const std::vector<double>& coords) const {
  if (coords.size() != g_->dim()) throw DimensionMismatch("exp_compact: wrong number of coordinates");
  GroupElement e;
  for (std::size_t fi = 0; fi < specs_.size(); ++fi) {
    const long n = static_cast<long>(specs_[fi].matrix_size());
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < basis_[fi].size(); ++i) {
      const double c = coords[coord_offset_[fi] + i];
      if (c != 0) x += c * basis_[fi][i];
    }
    if ((x + x.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw CartanError("exp_compact: element is not compact");
    const Eigen::MatrixXd ex = x.exp();
    e.factors.push_back({specs_[fi], orthogonalize(ex.cast<Real>())});
  }
  return e;
}

GroupElement ProductGroup::exp_split(const std::vector<double>& t) const {
  if (t.size() != rank()) throw DimensionMismatch("exp_split: wrong number of coordinates");
  GroupElement e = identity();
  for (std::size_t fi = 0; fi < specs_.size(); ++fi) {
    RealMatrix& m = e.factors[fi].matrix;
    for (const auto& s : split_pairs_[fi]) {
      Real a = 0;
      for (const auto& [k, c] : s.terms) a += Real(t[k]) * Real(c);
      const long i = static_cast<long>(s.i), j = static_cast<long>(s.j);
      m(i, i) = cosh(a);
      m(j, j) = cosh(a);
      m(i, j) = sinh(a);
      m(j, i) = sinh(a);
    }
  }
  return e;
}

ChamberVector ProductGroup::cartan_projection(const GroupElement& g) const {
  if (g.factors.size() != specs_.size()) throw CartanError("element of " + g.realization() + " is not in " + g_->name());
  ChamberVector v;
  for (std::size_t fi = 0; fi < specs_.size(); ++fi) {
    const GroupFactor& f = g.factors[fi];
    if (!(f.spec == specs_[fi])) throw CartanError("factor " + f.spec.name() + " does not match " + specs_[fi].name());
    const double defect = form_defect(f);
    if (!(defect <= tolerance::form))
      throw CartanError(f.spec.name() + ": element does not preserve the invariant form (defect " + std::to_string(defect) + ")");
    if (!identity_component(f)) throw CartanError(f.spec.name() + ": element is not in the identity component");
    const std::vector<double> t = factor_cartan_projection(f);
    v.coordinates.insert(v.coordinates.end(), t.begin(), t.end());
  }
  v.chamber_normalized = true;
  return v;
}

double ProductGroup::norm(const std::vector<double>& v) const {
  const Eigen::Map<const Eigen::VectorXd> x(v.data(), static_cast<long>(v.size()));
  return std::sqrt(std::max(0.0, x.dot(killing_ * x)));
}

double ProductGroup::norm(const ChamberVector& v) const { return norm(v.coordinates); }

bool ProductGroup::in_chamber(const ChamberVector& v) const {
  const Eigen::Map<const Eigen::VectorXd> x(v.coordinates.data(), static_cast<long>(v.coordinates.size()));
  return walls_.rows() == 0 || (walls_ * x).minCoeff() >= -tolerance::chamber;
}

std::pair<std::size_t, std::size_t> ProductGroup::split_range(std::size_t i) const {
  return {split_offset_.at(i), split_offset_[i] + static_cast<std::size_t>(specs_[i].real_rank())};
}

// ---------------------------------------------------------------------------
// Distances

SubspaceUnion::SubspaceUnion(std::vector<RationalMatrix> spans, const Eigen::MatrixXd& gram) : gram_(gram) {
  const long r = gram.rows();
  for (const auto& s : spans) {
    Eigen::MatrixXd v(r, static_cast<long>(s.rows()));
    for (std::size_t i = 0; i < s.rows(); ++i)
      for (long j = 0; j < r; ++j) v(j, static_cast<long>(i)) = to_double(s(i, static_cast<std::size_t>(j)));
    if (s.rows() == 0) {
      projectors_.push_back(Eigen::MatrixXd::Zero(r, r));
      continue;
    }
    const Eigen::MatrixXd m = v.transpose() * gram * v;
    projectors_.push_back(v * m.ldlt().solve(v.transpose() * gram));
  }
}

double SubspaceUnion::distance(const std::vector<double>& x) const {
  const Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<long>(x.size()));
  double best = INFINITY;
  for (const auto& p : projectors_) {
    const Eigen::VectorXd y = v - p * v;
    best = std::min(best, std::sqrt(std::max(0.0, y.dot(gram_ * y))));
  }
  return best;
}

std::vector<RationalMatrix> weyl_translates(const Subspace& v, const WeylGroup& w, std::uint64_t cutoff) {
  if (w.order() > cutoff) throw WeylCutoffExceeded(w.order(), cutoff);
  std::vector<RationalMatrix> out;
  std::set<std::string> seen;
  for (std::uint64_t i = 0; i < w.order(); ++i) {
    const RationalMatrix m = w.element(i);
    RationalMatrix rows(0, w.rank());
    for (std::size_t k = 0; k < v.dim(); ++k) rows.append_row(m * v.vector(k));
    RationalMatrix c = Subspace(w.rank(), rows).canonical_basis();
    if (seen.insert(c.to_string()).second) out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spaces of the gap experiment

const std::vector<std::string>& gap_space_keys() {
  static const std::vector<std::string> keys = {"so44xso24-delta", "so34xso24-delta", "so44xso34-delta",
                                                "so44xso24-delta-control"};
  return keys;
}

GapSpace gap_space(const std::string& key) {
  Catalog& cat = default_catalog();
  auto diagonal_space = [&](const std::string& g1, const std::string& g2, const std::string& iota, const std::string& l1,
                            const std::string& l2) {
    const AlgebraPtr a1 = catalog_algebra(g1), a2 = catalog_algebra(g2);
    GapSpace s;
    s.key = key;
    s.h = diagonal_embedding(cat.lookup(iota), a2);
    s.l = product_embedding(cat.lookup(l1), cat.lookup(l2), a1, a2);
    s.g = s.h.ambient();
    s.description = g1 + "+" + g2 + " / " + s.h.label() + ", L = " + s.l.label();
    return s;
  };
  if (key == "so44xso24-delta")
    return diagonal_space("so(4,4)", "so(2,4)", "so(4,4):so(2,4):block", "so(4,4):so(3,4):spin", "so(2,4):so(1,4):block");
  if (key == "so34xso24-delta")
    return diagonal_space("so(3,4)", "so(2,4)", "so(3,4):so(2,4):block", "so(3,4):g2(2):g2in7", "so(2,4):so(1,4):block");
  if (key == "so44xso34-delta")
    return diagonal_space("so(4,4)", "so(3,4)", "so(4,4):so(3,4):block", "so(4,4):so(3,4):spin", "so(3,4):so(1,4):block");
  if (key == "so44xso24-delta-control") {
    GapSpace s = diagonal_space("so(4,4)", "so(2,4)", "so(4,4):so(2,4):block", "so(4,4):so(3,4):spin",
                                "so(2,4):so(1,4):block");
    s.l = s.h;
    s.description = "so(4,4)+so(2,4) / " + s.h.label() + ", L = " + s.l.label();
    return s;
  }
  throw NotInCatalog("unknown gap space '" + key + "'", gap_space_keys());
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Eigen::MatrixXd to_double_columns(const RationalMatrix& rows) {
  Eigen::MatrixXd m(static_cast<long>(rows.cols()), static_cast<long>(rows.rows()));
  for (std::size_t i = 0; i < rows.rows(); ++i)
    for (std::size_t j = 0; j < rows.cols(); ++j) m(static_cast<long>(j), static_cast<long>(i)) = to_double(rows(i, j));
  return m;
}

}  // namespace

std::mt19937_64 sample_engine(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ index));
}

double sample_radius(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::exp(u(rng) * std::log(51.0)) - 1.0;
}

SubgroupSampler::SubgroupSampler(const ProductGroup& g, const RationalMatrix& compact_rows, const RationalMatrix& split_rows)
    : g_(&g), compact_(to_double_columns(compact_rows)), split_(to_double_columns(split_rows)) {
  if (compact_rows.rows() > 0 && compact_rows.cols() != g.algebra()->dim())
    throw DimensionMismatch("sampler: compact rows are not in algebra coordinates");
  if (split_rows.rows() > 0 && split_rows.cols() != g.rank())
    throw DimensionMismatch("sampler: split rows are not in split coordinates");
  if (compact_rows.rows() == 0) compact_ = Eigen::MatrixXd::Zero(static_cast<long>(g.algebra()->dim()), 0);
  if (split_rows.rows() == 0) split_ = Eigen::MatrixXd::Zero(static_cast<long>(g.rank()), 0);
}

SubgroupSampler SubgroupSampler::full(const ProductGroup& g) {
  return SubgroupSampler(g, g.compact_basis(), RationalMatrix::identity(g.rank()));
}

SubgroupSampler SubgroupSampler::of(const ProductGroup& g, const Embedding& e) {
  if (e.target->dim() != g.algebra()->dim()) throw DimensionMismatch("sampler: embedding target is not the group");
  RationalMatrix t = e.source->theta();
  for (std::size_t i = 0; i < t.rows(); ++i) t(i, i) -= 1;
  const RationalMatrix k = kernel(t);
  RationalMatrix rows(0, g.algebra()->dim());
  for (std::size_t i = 0; i < k.rows(); ++i) rows.append_row(e.map * k.row(i));
  return SubgroupSampler(g, rows, adapted_split_part(e).basis());
}

GroupElement SubgroupSampler::random_compact(std::mt19937_64& rng) const {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::VectorXd z(compact_.cols());
  for (long i = 0; i < z.size(); ++i) z(i) = n(rng);
  const Eigen::VectorXd x = compact_ * z;
  return g_->exp_compact(std::vector<double>(x.data(), x.data() + x.size()));
}

std::vector<double> SubgroupSampler::random_split_direction(std::mt19937_64& rng) const {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> out(static_cast<std::size_t>(split_.rows()), 0.0);
  if (split_.cols() == 0) return out;
  Eigen::VectorXd t;
  do {
    Eigen::VectorXd y(split_.cols());
    for (long i = 0; i < y.size(); ++i) y(i) = n(rng);
    t = split_ * y;
  } while (t.norm() < 1e-12);
  t /= t.norm();
  std::copy(t.data(), t.data() + t.size(), out.begin());
  return out;
}

GroupElement SubgroupSampler::sample(double radius, std::mt19937_64& rng) const {
  const GroupElement k1 = random_compact(rng);
  std::vector<double> t = random_split_direction(rng);
  for (auto& x : t) x *= radius;
  const GroupElement k2 = random_compact(rng);
  return k1 * g_->exp_split(t) * k2;
}

// ---------------------------------------------------------------------------
// Gap experiment

nlohmann::ordered_json GapReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["space"] = space;
  j["samples"] = samples;
  j["seed"] = seed;
  j["fitted_epsilon"] = fitted_epsilon;
  j["fitted_C"] = fitted_C;
  j["min_margin"] = min_margin;
  j["weyl_translates"] = translates;
  j["max_norm"] = max_norm;
  return j;
}

GapReport fit_gap(const std::vector<GapSample>& samples) {
  GapReport r;
  r.samples = samples.size();
  double eps = INFINITY;
  for (const auto& s : samples) {
    r.max_norm = std::max(r.max_norm, s.norm);
    if (s.norm >= 1.0) eps = std::min(eps, s.distance / (2.0 * s.norm));
  }
  if (!std::isfinite(eps) || eps < 1e-9) eps = 0;
  double c = 0;
  for (const auto& s : samples) c = std::max(c, 2.0 * eps * s.norm - s.distance);
  double margin = samples.empty() ? 0.0 : INFINITY;
  for (const auto& s : samples) margin = std::min(margin, s.distance - 2.0 * eps * s.norm + c);
  r.fitted_epsilon = eps;
  r.fitted_C = c;
  r.min_margin = margin;
  return r;
}

GapReport gap_experiment(const std::string& key, std::uint64_t samples, std::uint64_t seed, unsigned threads) {
  const GapSpace space = gap_space(key);
  const ProductGroup g(space.g);
  const WeylGroup w(g.split());
  const SubspaceUnion h_union(weyl_translates(adapted_split_part(space.h.combined), w), g.killing());
  const SubgroupSampler sampler = SubgroupSampler::of(g, space.l.combined);

  std::vector<GapSample> out(samples);
  std::vector<std::exception_ptr> errors(std::max(1u, threads));
  auto run = [&](unsigned shard, std::uint64_t begin, std::uint64_t end) {
    try {
      for (std::uint64_t i = begin; i < end; ++i) {
        std::mt19937_64 rng = sample_engine(seed, i);
        const double radius = sample_radius(rng);
        const ChamberVector mu = g.cartan_projection(sampler.sample(radius, rng));
        out[i] = {g.norm(mu), h_union.distance(mu.coordinates)};
      }
    } catch (...) {
      errors[shard] = std::current_exception();
    }
  };
  const unsigned t = static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, samples)));
  if (t <= 1) {
    run(0, 0, samples);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (samples + t - 1) / t;
    for (unsigned i = 0; i < t; ++i) pool.emplace_back(run, i, std::min(samples, i * chunk), std::min(samples, (i + 1) * chunk));
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  GapReport r = fit_gap(out);
  r.space = key;
  r.seed = seed;
  r.translates = h_union.size();
  return r;
}

}  // namespace ckf
