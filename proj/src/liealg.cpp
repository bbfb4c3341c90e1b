#include "ckforms/liealg.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

namespace ckf {

RationalVector densify(const SparseVector& v, std::size_t dim) {
  RationalVector out(dim);
  for (const auto& [i, x] : v) out[i] = x;
  return out;
}

SparseVector sparsify(std::span<const Rational> v) {
  SparseVector out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (sgn(v[i]) != 0) out.emplace_back(static_cast<std::uint32_t>(i), v[i]);
  return out;
}

namespace {

std::uint64_t pos_key(std::uint32_t r, std::uint32_t c) { return (static_cast<std::uint64_t>(r) << 32) | c; }

SparseVector negated(const SparseVector& v) {
  SparseVector out = v;
  for (auto& e : out) e.second = -e.second;
  return out;
}

// Accumulate f * v into a dense vector.
void axpy(RationalVector& acc, const Rational& f, const SparseVector& v) {
  for (const auto& [i, x] : v) acc[i] += f * x;
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction

LieAlgebra LieAlgebra::from_matrices(std::string name, std::vector<SparseMatrix> basis) {
  LieAlgebra g;
  g.name_ = std::move(name);
  g.dim_ = basis.size();
  g.realization_size_ = basis.empty() ? 0 : basis.front().size();
  for (const auto& b : basis)
    if (b.size() != g.realization_size_) throw DimensionMismatch("LieAlgebra: basis matrices of different sizes");
  g.basis_ = std::move(basis);
  g.factor_dims_ = {g.dim_};
  g.factor_names_ = {g.name_};
  g.build_coordinate_map();

  const std::size_t d = g.dim_;
  g.brackets_.assign(d * d, {});
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const auto c = g.coordinates(commutator(g.basis_[i], g.basis_[j]));
      if (!c) throw std::invalid_argument(g.name_ + ": span is not closed under the bracket");
      g.brackets_[i * d + j] = sparsify(*c);
      g.brackets_[j * d + i] = negated(g.brackets_[i * d + j]);
    }

  g.theta_ = RationalMatrix(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    const auto c = g.coordinates(g.basis_[i].transpose().scaled(-1));
    if (!c) throw std::invalid_argument(g.name_ + ": span is not stable under transpose");
    for (std::size_t k = 0; k < d; ++k) g.theta_(k, i) = (*c)[k];
  }
  g.compute_killing();
  return g;
}

LieAlgebra LieAlgebra::from_structure_constants(std::string name, std::size_t dim, std::vector<SparseVector> brackets,
                                                RationalMatrix theta) {
  if (brackets.size() != dim * dim) throw DimensionMismatch("from_structure_constants: table must be dim*dim");
  if (theta.rows() != dim || theta.cols() != dim) throw DimensionMismatch("from_structure_constants: theta size");
  LieAlgebra g;
  g.name_ = std::move(name);
  g.dim_ = dim;
  g.brackets_ = std::move(brackets);
  g.theta_ = std::move(theta);
  g.factor_dims_ = {dim};
  g.factor_names_ = {g.name_};
  g.compute_killing();
  return g;
}

LieAlgebra LieAlgebra::direct_sum(const LieAlgebra& a, const LieAlgebra& b) {
  LieAlgebra g;
  g.name_ = a.name_ + "x" + b.name_;
  const std::size_t da = a.dim_, db = b.dim_, d = da + db;
  g.dim_ = d;
  g.factor_dims_ = a.factor_dims_;
  g.factor_dims_.insert(g.factor_dims_.end(), b.factor_dims_.begin(), b.factor_dims_.end());
  g.factor_names_ = a.factor_names_;
  g.factor_names_.insert(g.factor_names_.end(), b.factor_names_.begin(), b.factor_names_.end());

  g.brackets_.assign(d * d, {});
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j) g.brackets_[i * d + j] = a.brackets_[i * da + j];
  for (std::size_t i = 0; i < db; ++i)
    for (std::size_t j = 0; j < db; ++j) {
      SparseVector v = b.brackets_[i * db + j];
      for (auto& e : v) e.first += static_cast<std::uint32_t>(da);
      g.brackets_[(da + i) * d + da + j] = std::move(v);
    }

  g.theta_ = RationalMatrix(d, d);
  g.killing_ = RationalMatrix(d, d);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j) {
      g.theta_(i, j) = a.theta_(i, j);
      g.killing_(i, j) = a.killing_(i, j);
    }
  for (std::size_t i = 0; i < db; ++i)
    for (std::size_t j = 0; j < db; ++j) {
      g.theta_(da + i, da + j) = b.theta_(i, j);
      g.killing_(da + i, da + j) = b.killing_(i, j);
    }

  if (a.has_realization() && b.has_realization() && d > 0) {
    const std::size_t na = a.realization_size_, nb = b.realization_size_;
    g.realization_size_ = na + nb;
    for (const auto& m : a.basis_) g.basis_.emplace_back(na + nb, m.entries());
    for (const auto& m : b.basis_) {
      std::vector<SparseMatrix::Entry> es;
      for (const auto& e : m.entries())
        es.push_back({static_cast<std::uint32_t>(e.row + na), static_cast<std::uint32_t>(e.col + na), e.value});
      g.basis_.emplace_back(na + nb, std::move(es));
    }
    g.pivot_positions_ = a.pivot_positions_;
    for (const auto& [r, c] : b.pivot_positions_)
      g.pivot_positions_.emplace_back(static_cast<std::uint32_t>(r + na), static_cast<std::uint32_t>(c + na));
    g.pivot_inverse_ = RationalMatrix(d, d);
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t j = 0; j < da; ++j) g.pivot_inverse_(i, j) = a.pivot_inverse_(i, j);
    for (std::size_t i = 0; i < db; ++i)
      for (std::size_t j = 0; j < db; ++j) g.pivot_inverse_(da + i, da + j) = b.pivot_inverse_(i, j);
  }
  if (a.split_ && b.split_) {
    SplitMetadata s;
    const auto& sa = a.split_->a_basis;
    const auto& sb = b.split_->a_basis;
    s.a_basis = RationalMatrix(sa.rows() + sb.rows(), d);
    for (std::size_t r = 0; r < sa.rows(); ++r)
      for (std::size_t c = 0; c < da; ++c) s.a_basis(r, c) = sa(r, c);
    for (std::size_t r = 0; r < sb.rows(); ++r)
      for (std::size_t c = 0; c < db; ++c) s.a_basis(sa.rows() + r, da + c) = sb(r, c);
    s.factor_types = a.split_->factor_types;
    s.factor_types.insert(s.factor_types.end(), b.split_->factor_types.begin(), b.split_->factor_types.end());
    s.factor_ranks = a.split_->factor_ranks;
    s.factor_ranks.insert(s.factor_ranks.end(), b.split_->factor_ranks.begin(), b.split_->factor_ranks.end());
    g.split_ = std::move(s);
  }
  return g;
}

LieAlgebra LieAlgebra::with_bracket(std::size_t i, std::size_t j, SparseVector value) const {
  if (i >= dim_ || j >= dim_ || i == j) throw std::out_of_range("with_bracket: bad index pair");
  LieAlgebra g = *this;
  g.brackets_[j * dim_ + i] = negated(value);
  g.brackets_[i * dim_ + j] = std::move(value);
  g.compute_killing();
  return g;
}

void LieAlgebra::build_coordinate_map() {
  const std::size_t d = dim_;
  pivot_positions_.clear();
  pivot_inverse_ = RationalMatrix(d, d);
  if (d == 0) return;

  // Restrict to the union of supports, then pick pivot positions by elimination.
  std::map<std::uint64_t, std::size_t> support;
  for (const auto& b : basis_)
    for (const auto& e : b.entries()) support.emplace(pos_key(e.row, e.col), 0);
  std::vector<std::uint64_t> keys;
  for (auto& [k, idx] : support) {
    idx = keys.size();
    keys.push_back(k);
  }
  RationalMatrix m(d, keys.size());
  for (std::size_t i = 0; i < d; ++i)
    for (const auto& e : basis_[i].entries()) m(i, support[pos_key(e.row, e.col)]) = e.value;
  std::vector<std::size_t> piv;
  rref(m, &piv);
  if (piv.size() != d) throw std::invalid_argument(name_ + ": basis matrices are linearly dependent");

  RationalMatrix mp(d, d);  // mp(k, i) = entry of basis i at pivot position k
  for (std::size_t k = 0; k < d; ++k) {
    const std::uint64_t key = keys[piv[k]];
    pivot_positions_.emplace_back(static_cast<std::uint32_t>(key >> 32), static_cast<std::uint32_t>(key));
    for (std::size_t i = 0; i < d; ++i) mp(k, i) = m(i, piv[k]);
  }
  pivot_inverse_ = inverse(mp);
}

void LieAlgebra::compute_killing() {
  const std::size_t d = dim_;
  // ad(e_a)_{jk} = c_{ak}^j, so B_ab = sum_{k,j} c_{ak}^j c_{bj}^k.
  std::unordered_map<std::uint64_t, SparseVector> by_pair;  // (k, j) -> [(a, c_{ak}^j)]
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t k = 0; k < d; ++k)
      for (const auto& [j, c] : brackets_[a * d + k])
        by_pair[pos_key(static_cast<std::uint32_t>(k), j)].emplace_back(static_cast<std::uint32_t>(a), c);
  killing_ = RationalMatrix(d, d);
  for (const auto& [key, left] : by_pair) {
    const auto k = static_cast<std::uint32_t>(key >> 32), j = static_cast<std::uint32_t>(key);
    const auto it = by_pair.find(pos_key(j, k));
    if (it == by_pair.end()) continue;
    for (const auto& [a, x] : left)
      for (const auto& [b, y] : it->second) killing_(a, b) += x * y;
  }
}

// ---------------------------------------------------------------------------
// Elements

RationalVector LieAlgebra::bracket(std::span<const Rational> x, std::span<const Rational> y) const {
  if (x.size() != dim_ || y.size() != dim_) throw DimensionMismatch("bracket: coordinate length mismatch");
  RationalVector out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    if (sgn(x[i]) == 0) continue;
    for (std::size_t j = 0; j < dim_; ++j) {
      if (sgn(y[j]) == 0) continue;
      axpy(out, x[i] * y[j], brackets_[i * dim_ + j]);
    }
  }
  return out;
}

std::optional<RationalVector> LieAlgebra::coordinates(const SparseMatrix& m) const {
  if (!has_realization()) throw std::logic_error(name_ + ": no matrix realization");
  if (m.size() != realization_size_) throw DimensionMismatch("coordinates: matrix size mismatch");
  RationalVector c(dim_);
  for (std::size_t k = 0; k < pivot_positions_.size(); ++k) {
    const Rational v = m.at(pivot_positions_[k].first, pivot_positions_[k].second);
    if (sgn(v) == 0) continue;
    for (std::size_t i = 0; i < dim_; ++i)
      if (sgn(pivot_inverse_(i, k)) != 0) c[i] += pivot_inverse_(i, k) * v;
  }
  if (!(element(c) == m)) return std::nullopt;
  return c;
}

SparseMatrix LieAlgebra::element(std::span<const Rational> coords) const {
  if (coords.size() != dim_) throw DimensionMismatch("element: coordinate length mismatch");
  return linear_combination(basis_, coords);
}

// ---------------------------------------------------------------------------
// Validation

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << c.name << ": " << (c.passed ? "ok" : "FAILED");
    if (!c.detail.empty()) os << " (" << c.detail << ")";
    os << "\n";
  }
  if (killing_degenerate) os << "killing form degenerate\n";
  return os.str();
}

namespace {

std::string triple_label(std::size_t i, std::size_t j, std::size_t k) {
  return "e" + std::to_string(i) + ",e" + std::to_string(j) + ",e" + std::to_string(k);
}

SparseVector theta_column(const RationalMatrix& theta, std::size_t i) {
  SparseVector v;
  for (std::size_t k = 0; k < theta.rows(); ++k)
    if (sgn(theta(k, i)) != 0) v.emplace_back(static_cast<std::uint32_t>(k), theta(k, i));
  return v;
}

}  // namespace

Subspace compact_part(const LieAlgebra& g) {
  return Subspace(g.dim(), kernel(g.theta() - RationalMatrix::identity(g.dim())));
}

Subspace noncompact_part(const LieAlgebra& g) {
  return Subspace(g.dim(), kernel(g.theta() + RationalMatrix::identity(g.dim())));
}

ValidationReport validate_structure(const LieAlgebra& g) {
  ValidationReport rep;
  const std::size_t d = g.dim();

  ValidationCheck closure{"closure", true, ""};
  if (g.has_realization() && d > 0) {
    for (std::size_t i = 0; i < d && closure.passed; ++i)
      for (std::size_t j = i + 1; j < d; ++j) {
        const SparseMatrix lhs = commutator(g.basis()[i], g.basis()[j]);
        if (!(g.element(densify(g.basis_bracket(i, j), d)) == lhs)) {
          closure.passed = false;
          closure.detail = "bracket of e" + std::to_string(i) + ",e" + std::to_string(j) + " disagrees with realization";
          break;
        }
      }
  }
  rep.checks.push_back(closure);

  ValidationCheck jacobi{"jacobi", true, ""};
  for (std::size_t i = 0; i < d && jacobi.passed; ++i)
    for (std::size_t j = i + 1; j < d && jacobi.passed; ++j)
      for (std::size_t k = j + 1; k < d; ++k) {
        RationalVector acc(d);
        for (const auto& [m, c] : g.basis_bracket(i, j)) axpy(acc, c, g.basis_bracket(m, k));
        for (const auto& [m, c] : g.basis_bracket(j, k)) axpy(acc, c, g.basis_bracket(m, i));
        for (const auto& [m, c] : g.basis_bracket(k, i)) axpy(acc, c, g.basis_bracket(m, j));
        if (std::any_of(acc.begin(), acc.end(), [](const Rational& x) { return sgn(x) != 0; })) {
          jacobi.passed = false;
          jacobi.detail = "violated on " + triple_label(i, j, k);
          break;
        }
      }
  rep.checks.push_back(jacobi);

  const RationalMatrix& th = g.theta();
  rep.checks.push_back({"theta_involution", th * th == RationalMatrix::identity(d), ""});

  ValidationCheck automorphism{"theta_automorphism", true, ""};
  std::vector<SparseVector> cols(d);
  for (std::size_t i = 0; i < d; ++i) cols[i] = theta_column(th, i);
  for (std::size_t i = 0; i < d && automorphism.passed; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      RationalVector lhs(d), rhs(d);
      for (const auto& [m, c] : g.basis_bracket(i, j)) axpy(lhs, c, cols[m]);
      for (const auto& [a, x] : cols[i])
        for (const auto& [b, y] : cols[j]) axpy(rhs, x * y, g.basis_bracket(a, b));
      if (lhs != rhs) {
        automorphism.passed = false;
        automorphism.detail = "fails on e" + std::to_string(i) + ",e" + std::to_string(j);
        break;
      }
    }
  rep.checks.push_back(automorphism);

  // theta^T K theta, using the sparsity of theta.
  const RationalMatrix& kil = g.killing();
  RationalMatrix kt(d, d);  // K theta
  for (std::size_t j = 0; j < d; ++j)
    for (const auto& [m, c] : cols[j])
      for (std::size_t r = 0; r < d; ++r)
        if (sgn(kil(r, m)) != 0) kt(r, j) += kil(r, m) * c;
  RationalMatrix tkt(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (const auto& [m, c] : cols[i])
      for (std::size_t j = 0; j < d; ++j)
        if (sgn(kt(m, j)) != 0) tkt(i, j) += c * kt(m, j);
  rep.checks.push_back({"killing_theta_invariant", tkt == kil, ""});

  const Signature full = signature(kil);
  rep.killing_degenerate = full.null > 0;
  if (rep.killing_degenerate) {
    rep.checks.push_back({"killing_negative_on_k", true, "skipped: degenerate killing form"});
    rep.checks.push_back({"killing_positive_on_p", true, "skipped: degenerate killing form"});
  } else {
    const Subspace k = compact_part(g), p = noncompact_part(g);
    const Signature sk = signature(restrict_form(kil, k.basis()));
    const Signature sp = signature(restrict_form(kil, p.basis()));
    rep.checks.push_back({"killing_negative_on_k", sk.negative == k.dim(), "signature " + to_string(sk)});
    rep.checks.push_back({"killing_positive_on_p", sp.positive == p.dim(), "signature " + to_string(sp)});
    rep.checks.push_back({"theta_eigenspaces_span", k.dim() + p.dim() == d, ""});
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Subalgebras

SubalgebraHandle span_closure(const LieAlgebra& g, const Subspace& vectors) {
  if (vectors.ambient_dim() != g.dim()) throw DimensionMismatch("span_closure: ambient mismatch");
  Subspace s = vectors;
  std::vector<RationalVector> elems;
  for (std::size_t i = 0; i < s.dim(); ++i) elems.push_back(s.vector(i));
  // Bracket every new element against all elements found so far.
  for (std::size_t next = 0; next < elems.size(); ++next)
    for (std::size_t j = 0; j < next; ++j) {
      RationalVector b = g.bracket(elems[j], elems[next]);
      if (s.contains(b)) continue;
      RationalMatrix rows = s.basis();
      rows.append_row(b);
      s = Subspace(g.dim(), rows);
      elems.push_back(std::move(b));
    }
  return {&g, s};
}

bool is_bracket_closed(const LieAlgebra& g, const Subspace& s) {
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t j = i + 1; j < s.dim(); ++j)
      if (!s.contains(g.bracket(s.vector(i), s.vector(j)))) return false;
  return true;
}

CompactnessCertificate is_compactly_embedded(const LieAlgebra& g, const SubalgebraHandle& s) {
  if (s.space.ambient_dim() != g.dim()) throw DimensionMismatch("is_compactly_embedded: ambient mismatch");
  CompactnessCertificate cert;
  cert.signature = signature(restrict_form(g.killing(), s.space.basis()));
  cert.compact = cert.signature.negative == s.space.dim();
  return cert;
}

}  // namespace ckf
