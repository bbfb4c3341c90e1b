#include "ckforms/criteria.hpp"

#include <sstream>

namespace ckf {

std::string Triple::ambient_label() const { return ambient()->name(); }

Triple make_triple(ProductEmbedding h, ProductEmbedding l, std::string name) {
  if (h.ambient() != l.ambient() && h.ambient()->name() != l.ambient()->name())
    throw std::invalid_argument("triple: h and l live in different algebras (" + h.ambient()->name() + ", " +
                                l.ambient()->name() + ")");
  Triple t;
  t.g1 = h.g1 ? h.g1 : l.g1;
  t.g2 = h.g2 ? h.g2 : l.g2;
  if (!t.g1) t.g1 = h.ambient();
  t.name = name.empty() ? h.ambient()->name() + ":" + h.label() + "+" + l.label() : std::move(name);
  t.h = std::move(h);
  t.l = std::move(l);
  return t;
}

std::string to_string(CaseLabel c) {
  switch (c) {
    case CaseLabel::Case1: return "Case1";
    case CaseLabel::Case2: return "Case2";
    case CaseLabel::Case3: return "Case3";
    case CaseLabel::Case4: return "Case4";
    case CaseLabel::Case5: return "Case5";
    case CaseLabel::SimpleDecomposition: return "SimpleDecomposition";
    case CaseLabel::Trivial: return "Trivial";
    case CaseLabel::Reject: return "Reject";
  }
  return "Reject";
}

SumCheck check_sum(const Triple& t) {
  SumCheck s;
  const Subspace h = t.h.combined.image(), l = t.l.combined.image();
  s.dim_g = t.ambient()->dim();
  s.dim_h = h.dim();
  s.dim_l = l.dim();
  s.rank = subspace_sum(h, l).dim();
  s.dim_intersection = intersect(h, l).dim();
  s.holds = s.rank == s.dim_g;
  return s;
}

CompactCheck check_compact_intersection(const Triple& t) {
  CompactCheck c;
  const LieAlgebra& g = *t.ambient();
  const SubalgebraHandle i = span_closure(g, intersect(t.h.combined.image(), t.l.combined.image()));
  const CompactnessCertificate cert = is_compactly_embedded(g, i);
  c.compact = cert.compact;
  c.signature = cert.signature;
  c.basis = i.space.basis();
  return c;
}

std::optional<WeylCheck> check_weyl(const Triple& t, std::uint64_t cutoff, unsigned threads) {
  const WeylGroup w(split_data(*t.ambient()));
  if (w.order() > cutoff) return std::nullopt;
  const DisjointnessResult r =
      weyl_disjoint(adapted_split_part(t.h.combined), adapted_split_part(t.l.combined), w, cutoff, threads);
  WeylCheck c;
  c.proper = r.disjoint;
  c.group_order = r.group_order;
  c.witness_index = r.witness_index;
  c.witness = r.witness;
  c.vector = r.vector;
  return c;
}

Subspace projection(const ProductEmbedding& e, std::size_t i) {
  const Subspace img = e.combined.image();
  if (!e.g2) {
    if (i != 0) throw std::out_of_range("projection: simple ambient has one factor");
    return img;
  }
  const std::size_t d1 = e.g1->dim(), n = i == 0 ? d1 : e.g2->dim(), off = i == 0 ? 0 : d1;
  RationalMatrix rows(0, n);
  for (std::size_t k = 0; k < img.dim(); ++k) {
    const RationalVector v = img.vector(k);
    rows.append_row(std::span<const Rational>(v.data() + off, n));
  }
  return Subspace(n, rows);
}

namespace {

struct Factors {
  AlgebraPtr alg[2];
  std::size_t dim[2];
  std::size_t offset[2];
};

// Inclusion of factor i coordinates into the ambient.
Subspace lift(const Factors& f, std::size_t i, const Subspace& s, std::size_t ambient) {
  RationalMatrix rows(0, ambient);
  for (std::size_t k = 0; k < s.dim(); ++k) {
    RationalVector v(ambient);
    const RationalVector x = s.vector(k);
    for (std::size_t j = 0; j < x.size(); ++j) v[f.offset[i] + j] = x[j];
    rows.append_row(v);
  }
  return Subspace(ambient, rows);
}

// Factor i coordinates of an ambient subspace.
Subspace slice(const Factors& f, std::size_t i, const Subspace& s) {
  RationalMatrix rows(0, f.dim[i]);
  for (std::size_t k = 0; k < s.dim(); ++k) {
    const RationalVector v = s.vector(k);
    rows.append_row(std::span<const Rational>(v.data() + f.offset[i], f.dim[i]));
  }
  return Subspace(f.dim[i], rows);
}

// Shape of a subalgebra in g_i + g_j: projection dimensions and whether it splits as a sum.
struct Shape {
  Subspace image;
  Subspace pi[2];
  std::size_t dim = 0;
  bool product() const { return dim == pi[0].dim() + pi[1].dim(); }
};

Shape shape_of(const ProductEmbedding& e) {
  Shape s;
  s.dim = e.dim();
  s.image = e.combined.image();
  s.pi[0] = projection(e, 0);
  s.pi[1] = projection(e, 1);
  return s;
}

// g = a + b with a ∩ b compact, inside one simple factor.
bool factor_decomposition(const LieAlgebra& g, const Subspace& a, const Subspace& b) {
  if (subspace_sum(a, b).dim() != g.dim()) return false;
  return is_compactly_embedded(g, span_closure(g, intersect(a, b))).compact;
}

struct CaseMatch {
  bool matched = false;
  std::vector<std::string> evidence;
};

std::string dims(const char* what, std::size_t d, std::size_t n) {
  std::ostringstream s;
  s << what << " dim " << d;
  if (d == 0) s << " (0)";
  else if (d == n) s << " (whole factor)";
  else s << " (proper)";
  return s.str();
}

// Case k of the classification for (X as h, Y as l) with factor i playing g1.
CaseMatch match_case(int k, const Triple& t, const Factors& f, const Shape& x, const Shape& y, std::size_t i) {
  const std::size_t j = 1 - i, ni = f.dim[i], nj = f.dim[j];
  const std::size_t xi = x.pi[i].dim(), xj = x.pi[j].dim(), yi = y.pi[i].dim(), yj = y.pi[j].dim();
  auto proper = [](std::size_t d, std::size_t n) { return d > 0 && d < n; };
  CaseMatch m;
  m.evidence = {dims("pi1(h)", xi, ni), dims("pi2(h)", xj, nj), dims("pi1(l)", yi, ni), dims("pi2(l)", yj, nj)};
  switch (k) {
    case 1:
      m.matched = xi == ni && xj == 0 && yi == 0 && yj == nj;
      break;
    case 2:
      m.matched = proper(xi, ni) && xj == 0 && proper(yi, ni) && yj == nj && y.product() &&
                  factor_decomposition(*f.alg[i], x.pi[i], y.pi[i]);
      if (m.matched) m.evidence.push_back("(g1, pi1(h), pi1(l)) is a decomposition with compact intersection");
      break;
    case 3:
      m.matched = proper(xi, ni) && proper(xj, nj) && proper(yi, ni) && proper(yj, nj) && x.product() && y.product() &&
                  factor_decomposition(*f.alg[i], x.pi[i], y.pi[i]) && factor_decomposition(*f.alg[j], x.pi[j], y.pi[j]);
      if (m.matched) m.evidence.push_back("both factors decompose with compact intersections");
      break;
    case 4:
      m.matched = xi == ni && xj == 0 && y.dim == nj && yj == nj && yi == nj;
      if (m.matched) m.evidence.push_back("l is the graph of an embedding g2 -> g1");
      break;
    case 5: {
      m.matched = proper(xi, ni) && proper(xj, nj) && x.product() && y.dim == nj && yj == nj && yi == nj;
      if (!m.matched) break;
      // iota(g'') = pi_i(l ∩ (g_i + g'')) must complement g' in g_i.
      const std::size_t amb = t.ambient()->dim();
      const Subspace slab = subspace_sum(lift(f, i, Subspace::full(ni), amb), lift(f, j, x.pi[j], amb));
      const Subspace image = slice(f, i, intersect(y.image, slab));
      m.matched = image.dim() == xj && factor_decomposition(*f.alg[i], x.pi[i], image);
      if (m.matched) m.evidence.push_back("(g1, pi1(h), iota(pi2(h))) is a decomposition with compact intersection");
      break;
    }
    default:
      break;
  }
  return m;
}

}  // namespace

Verdict classify_triple(const Triple& t, const ClassifyOptions& opts) {
  Verdict v;
  v.triple = t.name;
  v.sum = check_sum(t);
  v.compact = check_compact_intersection(t);
  if (opts.run_weyl && !v.sum.holds && !opts.weyl_without_sum) {
    v.weyl_note = "skipped because h + l != g";
  } else if (opts.run_weyl) {
    try {
      v.weyl = check_weyl(t, opts.weyl_cutoff, opts.threads);
      if (!v.weyl) v.weyl_note = "Weyl group order exceeds the cutoff " + std::to_string(opts.weyl_cutoff);
    } catch (const std::exception& e) {
      v.weyl_note = e.what();
    }
  } else {
    v.weyl_note = "not requested";
  }

  std::ostringstream dimstr;
  dimstr << "(" << v.sum.dim_g << ", " << v.sum.dim_h << ", " << v.sum.dim_l << ", " << v.sum.dim_intersection << ")";
  if (!v.sum.holds) {
    v.failed.push_back("sum");
    v.reason = "check_sum: h + l has dimension " + std::to_string(v.sum.rank) + " < dim g = " + std::to_string(v.sum.dim_g);
  }
  if (!v.compact.compact) {
    v.failed.push_back("compact_intersection");
    if (!v.reason.empty()) v.reason += "; ";
    v.reason += "check_compact_intersection: Killing form on h ∩ l has signature " + to_string(v.compact.signature);
  }
  if (!v.failed.empty()) {
    v.label = CaseLabel::Reject;
    return v;
  }
  v.evidence.push_back("dims " + dimstr.str());

  const std::size_t dg = v.sum.dim_g;
  if (v.sum.dim_h == 0 || v.sum.dim_l == 0 || v.sum.dim_h == dg || v.sum.dim_l == dg) {
    v.trivial = true;
    v.label = CaseLabel::Trivial;
    v.evidence.push_back("one of h, l is 0 or all of g");
    return v;
  }
  if (!t.g2) {
    v.label = CaseLabel::SimpleDecomposition;
    v.evidence.push_back("proper decomposition of a simple algebra");
    return v;
  }

  Factors f;
  f.alg[0] = t.g1;
  f.alg[1] = t.g2;
  f.dim[0] = t.g1->dim();
  f.dim[1] = t.g2->dim();
  f.offset[0] = 0;
  f.offset[1] = f.dim[0];
  const Shape sh = shape_of(t.h), sl = shape_of(t.l);
  for (int k = 1; k <= 5; ++k)
    for (int order = 0; order < 4; ++order) {
      const bool swap_roles = order >= 2;
      const std::size_t i = order % 2;
      const CaseMatch m = match_case(k, t, f, swap_roles ? sl : sh, swap_roles ? sh : sl, i);
      if (!m.matched) continue;
      v.label = static_cast<CaseLabel>(k - 1);
      v.roles_swapped = swap_roles;
      v.factors_swapped = i == 1;
      v.evidence.insert(v.evidence.end(), m.evidence.begin(), m.evidence.end());
      if (swap_roles) v.evidence.push_back("roles of h and l exchanged");
      if (i == 1) v.evidence.push_back("factors exchanged");
      return v;
    }
  v.label = CaseLabel::Reject;
  v.failed.push_back("case");
  v.reason = "no case of the classification matches the projections";
  return v;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::ordered_json rational_vector(const RationalVector& v) {
  nlohmann::ordered_json a = nlohmann::ordered_json::array();
  for (const auto& x : v) a.push_back(x.get_str());
  return a;
}

nlohmann::ordered_json rational_matrix(const RationalMatrix& m) {
  nlohmann::ordered_json a = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) a.push_back(rational_vector(m.row(r)));
  return a;
}

}  // namespace

nlohmann::ordered_json Verdict::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["triple"] = triple;
  j["standard_form"] = standard_form();
  j["case"] = to_string(label);
  j["trivial"] = trivial;
  j["dims"] = {{"g", sum.dim_g}, {"h", sum.dim_h}, {"l", sum.dim_l}, {"intersection", sum.dim_intersection}};
  j["sum_holds"] = sum.holds;
  j["intersection_compact"] = compact.compact;
  j["intersection_signature"] = {compact.signature.positive, compact.signature.negative, compact.signature.null};
  if (weyl) {
    nlohmann::ordered_json w;
    w["proper"] = weyl->proper;
    w["group_order"] = weyl->group_order;
    if (weyl->witness_index) w["witness_index"] = *weyl->witness_index;
    if (weyl->witness) w["witness"] = rational_matrix(*weyl->witness);
    if (weyl->vector) w["vector"] = rational_vector(*weyl->vector);
    j["weyl"] = w;
  } else {
    j["weyl"] = {{"skipped", weyl_note}};
  }
  if (!failed.empty()) {
    j["failed"] = failed;
    j["reason"] = reason;
  }
  j["evidence"] = evidence;
  return j;
}

}  // namespace ckf
