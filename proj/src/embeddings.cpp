#include "ckforms/embeddings.hpp"

#include <algorithm>
#include <sstream>

namespace ckf {

NotInCatalog::NotInCatalog(const std::string& what, std::vector<std::string> suggestions)
    : std::invalid_argument(what), suggestions_(std::move(suggestions)) {}

// ---------------------------------------------------------------------------
// Algebra registry

namespace {

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::string, AlgebraPtr>& registry() {
  static std::map<std::string, AlgebraPtr> r;
  return r;
}

}  // namespace

AlgebraPtr catalog_algebra(const RealFormSpec& spec) {
  const std::string name = spec.name();
  {
    std::lock_guard lock(registry_mutex());
    auto it = registry().find(name);
    if (it != registry().end()) return it->second;
  }
  auto g = std::make_shared<const LieAlgebra>(build_real_form(spec));
  std::lock_guard lock(registry_mutex());
  return registry().emplace(name, g).first->second;
}

AlgebraPtr catalog_algebra(const std::string& name) { return catalog_algebra(parse_real_form(name)); }

AlgebraPtr catalog_sum(const AlgebraPtr& g1, const AlgebraPtr& g2) {
  const std::string name = g1->name() + "x" + g2->name();
  {
    std::lock_guard lock(registry_mutex());
    auto it = registry().find(name);
    if (it != registry().end()) return it->second;
  }
  auto g = std::make_shared<const LieAlgebra>(LieAlgebra::direct_sum(*g1, *g2));
  std::lock_guard lock(registry_mutex());
  return registry().emplace(name, g).first->second;
}

AlgebraPtr zero_algebra() {
  static const AlgebraPtr z = [] {
    LieAlgebra g = LieAlgebra::from_structure_constants("0", 0, {}, RationalMatrix(0, 0));
    g.set_split(SplitMetadata{RationalMatrix(0, 0), {}, {}});
    return std::make_shared<const LieAlgebra>(std::move(g));
  }();
  return z;
}

// ---------------------------------------------------------------------------
// Embeddings

Subspace Embedding::image() const { return Subspace(target->dim(), map.transpose()); }

RationalVector Embedding::apply(std::span<const Rational> x) const { return map * x; }

namespace {

RationalVector column(const RationalMatrix& m, std::size_t c) { return m.col(c); }

std::size_t source_rank(const LieAlgebra& g) { return g.split() ? g.split()->a_basis.rows() : 0; }

// Coordinates of v in the span of independent rows; nullopt when v is outside.
std::optional<RationalVector> row_coordinates(const RationalMatrix& rows, const RationalVector& v) {
  const std::size_t r = rows.rows();
  if (r == 0) {
    if (std::all_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) == 0; })) return RationalVector{};
    return std::nullopt;
  }
  std::vector<std::size_t> piv;
  rref(rows, &piv);
  RationalMatrix sub(r, r);  // sub(k, i) = rows(i, piv[k])
  for (std::size_t k = 0; k < r; ++k)
    for (std::size_t i = 0; i < r; ++i) sub(k, i) = rows(i, piv[k]);
  RationalVector vp(r);
  for (std::size_t k = 0; k < r; ++k) vp[k] = v[piv[k]];
  RationalVector c = inverse(sub) * vp;
  RationalVector back(rows.cols());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < rows.cols(); ++j) back[j] += c[i] * rows(i, j);
  if (back != v) return std::nullopt;
  return c;
}

Subspace split_intersection(const Embedding& e) {
  const auto& ts = e.target->split();
  if (!ts) throw std::runtime_error(e.target->name() + ": no split subspace data");
  const Subspace a(e.target->dim(), ts->a_basis);
  const Subspace i = intersect(e.image(), a);
  RationalMatrix coords(0, ts->a_basis.rows());
  for (std::size_t k = 0; k < i.dim(); ++k) coords.append_row(*row_coordinates(ts->a_basis, i.vector(k)));
  return Subspace(ts->a_basis.rows(), coords);
}

}  // namespace

EmbeddingCertificate certify(const Embedding& e) {
  EmbeddingCertificate c;
  const LieAlgebra& s = *e.source;
  const LieAlgebra& t = *e.target;
  std::ostringstream detail;
  c.injective = e.map.rows() == t.dim() && e.map.cols() == s.dim() && rank(e.map) == s.dim();
  if (!c.injective) detail << "map is not injective; ";

  c.homomorphism = true;
  std::vector<RationalVector> cols(s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i) cols[i] = column(e.map, i);
  for (std::size_t i = 0; i < s.dim() && c.homomorphism; ++i)
    for (std::size_t j = i + 1; j < s.dim(); ++j) {
      const RationalVector lhs = e.map * densify(s.basis_bracket(i, j), s.dim());
      if (lhs != t.bracket(cols[i], cols[j])) {
        c.homomorphism = false;
        detail << "bracket not preserved on e" << i << ",e" << j << "; ";
        break;
      }
    }

  c.theta_compatible = t.theta() * e.map == e.map * s.theta();
  if (!c.theta_compatible) detail << "Cartan involutions not compatible; ";

  if (t.split() && s.split()) {
    c.split_dim = split_intersection(e).dim();
    c.adapted = c.split_dim == source_rank(s);
    if (!c.adapted)
      detail << "image meets the split subspace in dimension " << c.split_dim << ", expected " << source_rank(s) << "; ";
  } else {
    detail << "missing split subspace data; ";
  }
  c.detail = detail.str();
  return c;
}

Subspace adapted_split_part(const Embedding& e) {
  const Subspace v = split_intersection(e);
  const std::size_t r = source_rank(*e.source);
  if (v.dim() != r)
    throw std::runtime_error("adaptedness failure for " + e.key + ": split part of dimension " + std::to_string(v.dim()) +
                             ", source real rank " + std::to_string(r));
  return v;
}

Embedding embedding_from_matrices(std::string key, std::string variant, AlgebraPtr source, AlgebraPtr target,
                                  const std::function<SparseMatrix(const SparseMatrix&)>& f) {
  Embedding e;
  e.key = std::move(key);
  e.variant = std::move(variant);
  e.map = RationalMatrix(target->dim(), source->dim());
  for (std::size_t i = 0; i < source->dim(); ++i) {
    const auto c = target->coordinates(f(source->basis()[i]));
    if (!c) throw std::logic_error(e.key + ": image of e" + std::to_string(i) + " is not in the target");
    for (std::size_t r = 0; r < target->dim(); ++r) e.map(r, i) = (*c)[r];
  }
  e.source = std::move(source);
  e.target = std::move(target);
  return e;
}

Embedding identity_embedding(const RealFormSpec& g) {
  auto a = catalog_algebra(g);
  return embedding_from_matrices(Catalog::make_key(g.name(), g.name(), "identity"), "identity", a, a,
                                 [](const SparseMatrix& m) { return m; });
}

std::vector<std::size_t> block_index_map(const RealFormSpec& sub, const RealFormSpec& ambient) {
  if (sub.family != ambient.family || sub.family == Family::G2 || sub.p > ambient.p || sub.q > ambient.q)
    throw std::invalid_argument("block_index_map: " + sub.name() + " is not a block of " + ambient.name());
  const std::size_t p1 = static_cast<std::size_t>(sub.p), q1 = static_cast<std::size_t>(sub.q);
  const std::size_t p = static_cast<std::size_t>(ambient.p), q = static_cast<std::size_t>(ambient.q);
  std::vector<std::size_t> map(p1 + q1);
  // Positive j keeps the last positives; negative j < p1 pairs with it so that
  // the split elements A_j land on split elements of the ambient.
  std::vector<bool> used(q, false);
  for (std::size_t j = 0; j < p1; ++j) {
    map[j] = p - p1 + j;
    map[p1 + j] = p + (p - p1 + j);
    used[p - p1 + j] = true;
  }
  std::size_t next = 0;
  for (std::size_t j = p1; j < q1; ++j) {
    while (used[next]) ++next;
    map[p1 + j] = p + next;
    used[next] = true;
  }
  return map;
}

Embedding block_embedding(const RealFormSpec& sub, const RealFormSpec& ambient) {
  const std::vector<std::size_t> idx = block_index_map(sub, ambient);
  const std::size_t d = sub.field_dim(), n = ambient.matrix_size();
  auto real = [&](std::uint32_t i) { return static_cast<std::uint32_t>(d * idx[i / d] + i % d); };
  return embedding_from_matrices(Catalog::make_key(ambient.name(), sub.name(), "block"), "block", catalog_algebra(sub),
                                 catalog_algebra(ambient), [&](const SparseMatrix& m) {
                                   std::vector<SparseMatrix::Entry> es;
                                   for (const auto& e : m.entries()) es.push_back({real(e.row), real(e.col), e.value});
                                   return SparseMatrix(n, std::move(es));
                                 });
}

Embedding complex_structure_embedding(const RealFormSpec& sub, const RealFormSpec& ambient) {
  if (sub.family != Family::SU || ambient.family != Family::SO || ambient.p != 2 * sub.p || ambient.q != 2 * sub.q)
    throw std::invalid_argument("complex structure embedding needs su(a,b) in so(2a,2b)");
  return embedding_from_matrices(Catalog::make_key(ambient.name(), sub.name(), "complexstruct"), "complexstruct",
                                 catalog_algebra(sub), catalog_algebra(ambient),
                                 [](const SparseMatrix& m) { return m; });
}

Embedding quaternionic_embedding(const RealFormSpec& sub, const RealFormSpec& ambient) {
  if (sub.family != Family::SP) throw std::invalid_argument("quaternionic embedding needs an sp source");
  const std::string key = Catalog::make_key(ambient.name(), sub.name(), "quaternionic");
  if (ambient.family == Family::SO && ambient.p == 4 * sub.p && ambient.q == 4 * sub.q)
    return embedding_from_matrices(key, "quaternionic", catalog_algebra(sub), catalog_algebra(ambient),
                                   [](const SparseMatrix& m) { return m; });
  if (ambient.family == Family::SU && ambient.p == 2 * sub.p && ambient.q == 2 * sub.q) {
    // Right multiplication by i is the complex structure commuting with the
    // left quaternionic action; flipping the sign of the k-component turns
    // it into the standard block form used by the su realification.
    const std::size_t n = sub.matrix_size();
    std::vector<std::size_t> perm(n);
    std::vector<int> sign(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
      perm[i] = i;
      if (i % 4 == 3) sign[i] = -1;
    }
    return embedding_from_matrices(key, "quaternionic", catalog_algebra(sub), catalog_algebra(ambient),
                                   [&](const SparseMatrix& m) { return m.permuted(perm, sign, n); });
  }
  throw std::invalid_argument("quaternionic embedding needs sp(a,b) in so(4a,4b) or su(2a,2b)");
}

Embedding g2_embedding() {
  return embedding_from_matrices(Catalog::make_key("so(3,4)", "g2(2)", "g2in7"), "g2in7", catalog_algebra("g2(2)"),
                                 catalog_algebra("so(3,4)"), [](const SparseMatrix& m) { return m; });
}

RealFormSpec spin_target(int p, int q) {
  const CliffordData c = clifford_generators(p, q);
  RealFormSpec t{Family::SO, static_cast<int>(c.form_positive), static_cast<int>(c.form_negative)};
  if (t.p > t.q) throw std::logic_error("spin_target: spinor form has more positive than negative directions");
  return t;
}

Embedding spin_embedding(int p, int q) {
  const CliffordData c = clifford_generators(p, q);
  const RealFormSpec src{Family::SO, p, q};
  const RealFormSpec tgt{Family::SO, static_cast<int>(c.form_positive), static_cast<int>(c.form_negative)};
  if (tgt.p > tgt.q) throw std::logic_error("spin_embedding: unbalanced spinor form");
  if (signature(c.spinor_form).null != 0) throw std::logic_error("spin_embedding: degenerate spinor form");
  const std::size_t n = tgt.matrix_size();
  return embedding_from_matrices(Catalog::make_key(tgt.name(), src.name(), "spin"), "spin", catalog_algebra(src),
                                 catalog_algebra(tgt), [&](const SparseMatrix& m) {
                                   // m = E_ab -+ E_ba with a < b maps to (s_b / 2) gamma_a gamma_b.
                                   for (const auto& e : m.entries())
                                     if (e.row < e.col) {
                                       const Rational f(c.squares[e.col], 2);
                                       return (c.gammas[e.row] * c.gammas[e.col]).scaled(f * e.value);
                                     }
                                   return SparseMatrix(n);
                                 });
}

// ---------------------------------------------------------------------------
// Products and diagonals

namespace {

std::string part_label(const std::optional<Embedding>& e) {
  if (!e) return "0";
  return e->source->name() + "@" + e->variant;
}

}  // namespace

std::string ProductEmbedding::label() const {
  switch (mode) {
    case ProductMode::Factor:
      if (!g2) return part_label(left);
      return part_label(left) + "x" + part_label(right);
    case ProductMode::Product: return part_label(left) + "x" + part_label(right);
    case ProductMode::Diagonal: return "delta(" + right->source->name() + "," + left->variant + ")";
  }
  return {};
}

ProductEmbedding simple_embedding(const Embedding& e) {
  ProductEmbedding pe;
  pe.mode = ProductMode::Factor;
  pe.left = e;
  pe.g1 = e.target;
  pe.combined = e;
  return pe;
}

ProductEmbedding zero_embedding(const AlgebraPtr& g1, const AlgebraPtr& g2) {
  ProductEmbedding pe;
  pe.mode = ProductMode::Factor;
  pe.g1 = g1;
  pe.g2 = g2;
  const AlgebraPtr amb = g2 ? catalog_sum(g1, g2) : g1;
  pe.combined = Embedding{"0", "zero", zero_algebra(), amb, RationalMatrix(amb->dim(), 0)};
  return pe;
}

ProductEmbedding product_embedding(std::optional<Embedding> left, std::optional<Embedding> right, const AlgebraPtr& g1,
                                   const AlgebraPtr& g2) {
  if (left && left->target != g1) throw std::invalid_argument("product_embedding: left part does not land in g1");
  if (right && right->target != g2) throw std::invalid_argument("product_embedding: right part does not land in g2");
  if (!left && !right) return zero_embedding(g1, g2);
  ProductEmbedding pe;
  pe.mode = left && right ? ProductMode::Product : ProductMode::Factor;
  pe.g1 = g1;
  pe.g2 = g2;
  const AlgebraPtr amb = catalog_sum(g1, g2);
  AlgebraPtr src;
  if (left && right) src = catalog_sum(left->source, right->source);
  else src = left ? left->source : right->source;
  const std::size_t d1 = g1->dim();
  RationalMatrix m(amb->dim(), src->dim());
  std::size_t col = 0;
  if (left) {
    for (std::size_t c = 0; c < left->map.cols(); ++c, ++col)
      for (std::size_t r = 0; r < d1; ++r) m(r, col) = left->map(r, c);
  }
  if (right) {
    for (std::size_t c = 0; c < right->map.cols(); ++c, ++col)
      for (std::size_t r = 0; r < g2->dim(); ++r) m(d1 + r, col) = right->map(r, c);
  }
  pe.left = std::move(left);
  pe.right = std::move(right);
  pe.combined = Embedding{pe.label(), "product", src, amb, std::move(m)};
  return pe;
}

ProductEmbedding diagonal_embedding(const Embedding& iota, const AlgebraPtr& g2) {
  if (iota.source != g2 && iota.source->name() != g2->name())
    throw std::invalid_argument("diagonal_embedding: source " + iota.source->name() + " differs from " + g2->name());
  ProductEmbedding pe;
  pe.mode = ProductMode::Diagonal;
  pe.g1 = iota.target;
  pe.g2 = g2;
  pe.left = iota;
  pe.right = identity_embedding(parse_real_form(g2->name()));
  const AlgebraPtr amb = catalog_sum(pe.g1, g2);
  const std::size_t d1 = pe.g1->dim(), n = g2->dim();
  RationalMatrix m(amb->dim(), n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < d1; ++r) m(r, c) = iota.map(r, c);
    m(d1 + c, c) = 1;
  }
  pe.combined = Embedding{pe.label(), "diagonal", g2, amb, std::move(m)};
  return pe;
}

// ---------------------------------------------------------------------------
// Catalog

const std::vector<std::string>& Catalog::variants() {
  static const std::vector<std::string> v{"identity", "block", "complexstruct", "quaternionic", "g2in7", "spin"};
  return v;
}

std::string Catalog::make_key(const std::string& ambient, const std::string& sub, const std::string& variant) {
  return ambient + ":" + sub + ":" + variant;
}

std::optional<Embedding> Catalog::build(const RealFormSpec& a, const RealFormSpec& s, const std::string& variant) {
  if (variant == "identity") {
    if (a == s) return identity_embedding(a);
  } else if (variant == "block") {
    if (a.family == s.family && a.family != Family::G2 && s.p <= a.p && s.q <= a.q && s.p + s.q >= 2)
      return block_embedding(s, a);
  } else if (variant == "complexstruct") {
    if (s.family == Family::SU && a.family == Family::SO && a.p == 2 * s.p && a.q == 2 * s.q)
      return complex_structure_embedding(s, a);
  } else if (variant == "quaternionic") {
    if (s.family == Family::SP &&
        ((a.family == Family::SO && a.p == 4 * s.p && a.q == 4 * s.q) ||
         (a.family == Family::SU && a.p == 2 * s.p && a.q == 2 * s.q)))
      return quaternionic_embedding(s, a);
  } else if (variant == "g2in7") {
    if (s.family == Family::G2 && a == RealFormSpec{Family::SO, 3, 4}) return g2_embedding();
  } else if (variant == "spin") {
    // Spin representations used by the catalog: so(1,q) for q <= 8 and so(3,4).
    const bool supported = s.family == Family::SO && ((s.p == 1 && s.q >= 2 && s.q <= 8) || (s.p == 3 && s.q == 4));
    if (supported && a.family == Family::SO && a.p + a.q <= 16 && spin_target(s.p, s.q) == a) return spin_embedding(s.p, s.q);
  }
  return std::nullopt;
}

std::vector<std::string> Catalog::suggestions(const std::string& ambient, const std::string& sub) {
  std::vector<std::string> out;
  for (const auto& v : variants())
    if (available(ambient, sub, v)) out.push_back(make_key(ambient, sub, v));
  if (out.empty())
    for (const auto& v : variants()) out.push_back(make_key(ambient, sub, v) + " (unavailable)");
  return out;
}

bool Catalog::available(const std::string& ambient, const std::string& sub, const std::string& variant) {
  try {
    lookup(ambient, sub, variant);
    return true;
  } catch (const NotInCatalog&) {
    return false;
  }
}

const Embedding& Catalog::lookup(const std::string& ambient, const std::string& sub, const std::string& variant) {
  const RealFormSpec a = parse_real_form(ambient), s = parse_real_form(sub);
  const std::string key = make_key(a.name(), s.name(), variant);
  std::lock_guard lock(mu_);
  if (disabled_.count(key)) throw NotInCatalog("catalog entry disabled: " + key, {});
  if (auto it = cache_.find(key); it != cache_.end()) return *it->second;
  if (failed_.count(key) || std::find(variants().begin(), variants().end(), variant) == variants().end())
    throw NotInCatalog("not in catalog: " + key, {});
  std::optional<Embedding> e = build(a, s, variant);
  if (!e) {
    failed_.insert(key);
    throw NotInCatalog("not in catalog: " + key, {});
  }
  const EmbeddingCertificate cert = certify(*e);
  if (!cert.ok()) throw std::logic_error("catalog entry " + key + " failed certification: " + cert.detail);
  return *cache_.emplace(key, std::make_unique<Embedding>(std::move(*e))).first->second;
}

const Embedding& Catalog::lookup(const std::string& key) {
  const auto first = key.find(':'), last = key.rfind(':');
  if (first == std::string::npos || first == last) throw NotInCatalog("malformed embedding key: " + key, {});
  const std::string ambient = key.substr(0, first), sub = key.substr(first + 1, last - first - 1),
                    variant = key.substr(last + 1);
  try {
    return lookup(ambient, sub, variant);
  } catch (const NotInCatalog& e) {
    throw NotInCatalog(e.what(), suggestions(ambient, sub));
  }
}

std::optional<std::string> Catalog::default_variant(const std::string& ambient, const std::string& sub) {
  for (const auto& v : variants())
    if (available(ambient, sub, v)) return v;
  return std::nullopt;
}

void Catalog::disable(const std::string& key) {
  std::lock_guard lock(mu_);
  disabled_.insert(key);
}

void Catalog::enable_all() {
  std::lock_guard lock(mu_);
  disabled_.clear();
}

bool Catalog::disabled(const std::string& key) const {
  std::lock_guard lock(mu_);
  return disabled_.count(key) > 0;
}

Catalog& default_catalog() {
  static Catalog c;
  return c;
}

}  // namespace ckf
