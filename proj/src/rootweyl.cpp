#include "ckforms/rootweyl.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <map>
#include <numeric>
#include <set>
#include <thread>

namespace ckf {

WeylCutoffExceeded::WeylCutoffExceeded(std::uint64_t order, std::uint64_t cutoff)
    : std::runtime_error("Weyl group of order " + std::to_string(order) + " exceeds the enumeration cutoff " +
                         std::to_string(cutoff)),
      order_(order) {}

std::string SplitData::root_type() const {
  std::string s;
  for (const auto& f : factors) {
    if (!s.empty()) s += "+";
    s += f.label();
  }
  return s;
}

namespace {

RootFactor parse_factor(const std::string& label) {
  RootFactor f;
  std::size_t i = 0;
  while (i < label.size() && std::isalpha(static_cast<unsigned char>(label[i]))) ++i;
  f.type = label.substr(0, i);
  f.rank = static_cast<std::size_t>(std::stoul(label.substr(i)));
  return f;
}

RationalVector unit(std::size_t n, std::size_t i, int v = 1) {
  RationalVector e(n);
  e[i] = v;
  return e;
}

std::string vector_key(const RationalVector& v) {
  std::string s;
  for (const auto& x : v) s += x.get_str() + ",";
  return s;
}

// ad(x) as a dim x dim matrix: ad(x)(j, k) = sum_i x_i c_{ik}^j.
RationalMatrix ad_matrix(const LieAlgebra& g, const RationalVector& x) {
  const std::size_t d = g.dim();
  RationalMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    if (sgn(x[i]) == 0) continue;
    for (std::size_t k = 0; k < d; ++k)
      for (const auto& [j, c] : g.basis_bracket(i, k)) m(j, k) += x[i] * c;
  }
  return m;
}

const std::vector<ComputedRoot>& g2_roots() {
  static const std::vector<ComputedRoot> r = computed_roots(*catalog_algebra("g2(2)"));
  return r;
}

// Simple roots: positive with respect to a generic functional and not a sum of two positive roots.
std::vector<RationalVector> simple_roots(const std::vector<RationalVector>& roots) {
  const std::size_t n = roots.empty() ? 0 : roots.front().size();
  RationalVector generic(n);
  for (std::size_t i = 0; i < n; ++i) generic[i] = Rational(1000 + 7 * static_cast<long>(i), 1 + static_cast<long>(i));
  std::vector<RationalVector> pos;
  for (const auto& r : roots) {
    Rational s = 0;
    for (std::size_t i = 0; i < n; ++i) s += r[i] * generic[i];
    if (sgn(s) > 0) pos.push_back(r);
  }
  std::set<std::string> sums;
  for (const auto& a : pos)
    for (const auto& b : pos) {
      RationalVector c(n);
      for (std::size_t i = 0; i < n; ++i) c[i] = a[i] + b[i];
      sums.insert(vector_key(c));
    }
  std::vector<RationalVector> simple;
  for (const auto& r : pos)
    if (!sums.count(vector_key(r))) simple.push_back(r);
  return simple;
}

// Reflection of the split subspace in the root with functional lambda.
RationalMatrix reflection(const RationalVector& lambda, const RationalMatrix& killing) {
  const std::size_t n = lambda.size();
  const RationalVector h = inverse(killing) * lambda;  // B(h, x) = lambda(x)
  Rational lh = 0;
  for (std::size_t i = 0; i < n; ++i) lh += lambda[i] * h[i];
  RationalMatrix s = RationalMatrix::identity(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) s(r, c) -= 2 * h[r] * lambda[c] / lh;
  return s;
}

std::uint64_t factorial(std::size_t k) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= k; ++i) f *= i;
  return f;
}

std::uint64_t sign_count(const std::string& type, std::size_t k) {
  if (type == "D") return k == 0 ? 1 : (std::uint64_t{1} << (k - 1));
  return std::uint64_t{1} << k;
}

void unrank_permutation(std::uint64_t r, std::size_t k, std::size_t* perm) {
  std::size_t avail[32];
  for (std::size_t i = 0; i < k; ++i) avail[i] = i;
  std::size_t left = k;
  for (std::size_t i = 0; i < k; ++i) {
    const std::uint64_t f = factorial(k - 1 - i);
    const std::size_t q = static_cast<std::size_t>(r / f);
    r %= f;
    perm[i] = avail[q];
    for (std::size_t j = q; j + 1 < left; ++j) avail[j] = avail[j + 1];
    --left;
  }
}

// Signs of a classical element: bit i of mask flips coordinate i; for D the
// last sign is fixed by parity.
void signs_from_mask(const std::string& type, std::size_t k, std::uint64_t mask, int* sign) {
  int parity = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (type == "D" && i + 1 == k) {
      sign[i] = parity ? -1 : 1;
      break;
    }
    sign[i] = (mask >> i) & 1 ? -1 : 1;
    parity ^= static_cast<int>((mask >> i) & 1);
  }
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) { return a / std::gcd(a, b) * b; }

}  // namespace

std::vector<ComputedRoot> computed_roots(const LieAlgebra& g) {
  if (!g.split() || !g.has_realization()) throw std::invalid_argument(g.name() + ": no split data or realization");
  const RationalMatrix& a = g.split()->a_basis;
  const std::size_t r = a.rows(), d = g.dim();
  // Weights of the realization: each split element acts on disjoint symmetric
  // index pairs, so e_i +- e_j are joint eigenvectors.
  std::map<std::pair<std::uint32_t, std::uint32_t>, RationalVector> pairs;
  for (std::size_t m = 0; m < r; ++m) {
    const SparseMatrix am = g.element(a.row(m));
    for (const auto& e : am.entries()) {
      if (e.row == e.col) throw std::logic_error("computed_roots: split element with diagonal entries");
      if (e.row > e.col) continue;
      auto& w = pairs[{e.row, e.col}];
      if (w.empty()) w.assign(r, Rational(0));
      w[m] = e.value;
    }
  }
  std::vector<RationalVector> weights{RationalVector(r)};
  for (const auto& [ij, w] : pairs) {
    weights.push_back(w);
    RationalVector n = w;
    for (auto& x : n) x = -x;
    weights.push_back(n);
  }
  std::set<std::string> seen;
  std::vector<RationalVector> candidates;
  for (const auto& u : weights)
    for (const auto& v : weights) {
      RationalVector c(r);
      bool nz = false;
      for (std::size_t i = 0; i < r; ++i) {
        c[i] = u[i] - v[i];
        nz = nz || sgn(c[i]) != 0;
      }
      if (nz && seen.insert(vector_key(c)).second) candidates.push_back(c);
    }
  std::sort(candidates.begin(), candidates.end());

  std::vector<RationalMatrix> ads;
  for (std::size_t m = 0; m < r; ++m) ads.push_back(ad_matrix(g, a.row(m)));
  std::vector<ComputedRoot> roots;
  for (const auto& lam : candidates) {
    RationalMatrix stacked(0, d);
    for (std::size_t m = 0; m < r; ++m) {
      RationalMatrix x = ads[m];
      for (std::size_t i = 0; i < d; ++i) x(i, i) -= lam[m];
      stacked = stack(stacked, x);
    }
    const std::size_t mult = d - rank(stacked);
    if (mult > 0) roots.push_back({lam, mult});
  }
  return roots;
}

std::vector<RationalVector> standard_roots(const std::string& type, std::size_t k) {
  std::vector<RationalVector> out;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      for (int si : {1, -1})
        for (int sj : {1, -1}) {
          RationalVector v(k);
          v[i] = si;
          v[j] = sj;
          out.push_back(v);
        }
  for (std::size_t i = 0; i < k; ++i)
    for (int s : {1, -1}) {
      if (type == "B" || type == "BC" || type == "A") out.push_back(unit(k, i, s));
      if (type == "C" || type == "BC") out.push_back(unit(k, i, 2 * s));
    }
  std::sort(out.begin(), out.end());
  return out;
}

SplitData split_data(const LieAlgebra& g) {
  for (const auto& name : g.factor_names()) parse_real_form(name);  // catalog check
  if (!g.split()) throw std::invalid_argument(g.name() + ": not a catalog algebra");
  SplitData sd;
  sd.algebra = &g;
  sd.a_basis = Subspace(g.dim(), g.split()->a_basis);
  const std::size_t r = sd.rank();
  sd.killing = restrict_form(g.killing(), g.split()->a_basis);
  std::size_t offset = 0;
  for (const auto& label : g.split()->factor_types) {
    RootFactor f = parse_factor(label);
    f.offset = offset;
    offset += f.rank;
    sd.factors.push_back(f);
  }
  if (offset != r) throw std::logic_error(g.name() + ": factor ranks do not add up to the split rank");
  // Distinct factors are orthogonal for the Killing form.
  for (const auto& f : sd.factors)
    for (std::size_t i = f.offset; i < f.offset + f.rank; ++i)
      for (std::size_t j = 0; j < r; ++j)
        if ((j < f.offset || j >= f.offset + f.rank) && sgn(sd.killing(i, j)) != 0)
          throw std::logic_error(g.name() + ": split factors are not Killing-orthogonal");

  sd.chamber_walls = RationalMatrix(0, r);
  for (const auto& f : sd.factors) {
    auto put = [&](const RationalVector& local) {
      RationalVector v(r);
      for (std::size_t i = 0; i < f.rank; ++i) v[f.offset + i] = local[i];
      sd.chamber_walls.append_row(v);
    };
    if (f.type == "G") {
      std::vector<RationalVector> roots;
      for (const auto& cr : g2_roots()) roots.push_back(cr.functional);
      for (const auto& s : simple_roots(roots)) put(s);
      continue;
    }
    for (std::size_t i = 0; i + 1 < f.rank; ++i) {
      RationalVector v(f.rank);
      v[i] = 1;
      v[i + 1] = -1;
      put(v);
    }
    if (f.type == "D") {
      if (f.rank >= 2) {
        RationalVector v(f.rank);
        v[f.rank - 2] = 1;
        v[f.rank - 1] = 1;
        put(v);
      }
    } else if (f.rank >= 1) {
      put(unit(f.rank, f.rank - 1));
    }
  }
  return sd;
}

// ---------------------------------------------------------------------------
// Weyl group

WeylGroup::WeylGroup(const SplitData& sd) : rank_(sd.rank()) {
  for (const auto& rf : sd.factors) {
    Factor f;
    f.type = rf.type;
    f.rank = rf.rank;
    f.offset = rf.offset;
    if (rf.type == "G") {
      RationalMatrix kil(rf.rank, rf.rank);
      for (std::size_t i = 0; i < rf.rank; ++i)
        for (std::size_t j = 0; j < rf.rank; ++j) kil(i, j) = sd.killing(rf.offset + i, rf.offset + j);
      std::vector<RationalVector> roots;
      for (const auto& cr : g2_roots()) roots.push_back(cr.functional);
      std::vector<RationalMatrix> gens;
      for (const auto& s : simple_roots(roots)) gens.push_back(reflection(s, kil));
      // Closure by breadth-first search from the identity.
      std::vector<RationalMatrix> elems{RationalMatrix::identity(rf.rank)};
      for (std::size_t i = 0; i < elems.size(); ++i)
        for (const auto& s : gens) {
          RationalMatrix x = s * elems[i];
          if (std::find(elems.begin(), elems.end(), x) == elems.end()) elems.push_back(std::move(x));
        }
      f.matrices = std::move(elems);
      f.order = f.matrices.size();
      for (const auto& s : gens) {
        RationalMatrix big = RationalMatrix::identity(rank_);
        for (std::size_t i = 0; i < rf.rank; ++i)
          for (std::size_t j = 0; j < rf.rank; ++j) big(rf.offset + i, rf.offset + j) = s(i, j);
        generators_.push_back(big);
      }
    } else {
      f.order = factorial(rf.rank) * sign_count(rf.type, rf.rank);
      for (std::size_t i = 0; i + 1 < rf.rank; ++i) {
        RationalMatrix s = RationalMatrix::identity(rank_);
        const std::size_t a = rf.offset + i, b = a + 1;
        s(a, a) = 0;
        s(b, b) = 0;
        s(a, b) = 1;
        s(b, a) = 1;
        generators_.push_back(s);
      }
      if (rf.rank >= 1) {
        RationalMatrix s = RationalMatrix::identity(rank_);
        const std::size_t l = rf.offset + rf.rank - 1;
        if (rf.type == "D") {
          if (rf.rank >= 2) {
            // Reflection in e_{k-1} + e_k.
            s(l - 1, l - 1) = 0;
            s(l, l) = 0;
            s(l - 1, l) = -1;
            s(l, l - 1) = -1;
            generators_.push_back(s);
          }
        } else {
          s(l, l) = -1;
          generators_.push_back(s);
        }
      }
    }
    if (f.order != 0 && order_ > std::numeric_limits<std::uint64_t>::max() / f.order)
      order_ = std::numeric_limits<std::uint64_t>::max();
    else
      order_ *= f.order;
    factors_.push_back(std::move(f));
  }
  for (const auto& f : factors_)
    for (const auto& m : f.matrices)
      for (std::size_t i = 0; i < f.rank; ++i)
        for (std::size_t j = 0; j < f.rank; ++j) scale_ = lcm64(scale_, m(i, j).get_den().get_si());
  for (auto& f : factors_)
    for (const auto& m : f.matrices) {
      std::vector<std::int64_t> s(f.rank * f.rank);
      for (std::size_t i = 0; i < f.rank; ++i)
        for (std::size_t j = 0; j < f.rank; ++j) {
          const Rational v = m(i, j) * scale_;
          s[i * f.rank + j] = v.get_num().get_si();
        }
      f.scaled.push_back(std::move(s));
    }
}

void WeylGroup::decode(std::uint64_t index, std::vector<std::uint64_t>& parts) const {
  parts.assign(factors_.size(), 0);
  for (std::size_t i = factors_.size(); i-- > 0;) {
    parts[i] = index % factors_[i].order;
    index /= factors_[i].order;
  }
}

void WeylGroup::apply(std::uint64_t index, const std::int64_t* in, std::int64_t* out) const {
  std::vector<std::uint64_t> parts;
  decode(index, parts);
  std::size_t perm[32];
  int sign[32];
  for (std::size_t fi = 0; fi < factors_.size(); ++fi) {
    const Factor& f = factors_[fi];
    const std::int64_t* x = in + f.offset;
    std::int64_t* y = out + f.offset;
    if (!f.scaled.empty()) {
      const auto& m = f.scaled[parts[fi]];
      for (std::size_t i = 0; i < f.rank; ++i) {
        std::int64_t s = 0;
        for (std::size_t j = 0; j < f.rank; ++j) s += m[i * f.rank + j] * x[j];
        y[i] = s;
      }
      continue;
    }
    const std::uint64_t ns = sign_count(f.type, f.rank);
    unrank_permutation(parts[fi] / ns, f.rank, perm);
    signs_from_mask(f.type, f.rank, parts[fi] % ns, sign);
    for (std::size_t i = 0; i < f.rank; ++i) y[perm[i]] = scale_ * sign[i] * x[i];
  }
}

RationalMatrix WeylGroup::element(std::uint64_t index) const {
  RationalMatrix m(rank_, rank_);
  std::vector<std::int64_t> in(rank_), out(rank_);
  for (std::size_t c = 0; c < rank_; ++c) {
    std::fill(in.begin(), in.end(), 0);
    in[c] = 1;
    apply(index, in.data(), out.data());
    for (std::size_t r = 0; r < rank_; ++r) m(r, c) = Rational(out[r], scale_);
  }
  for (std::size_t r = 0; r < rank_; ++r)
    for (std::size_t c = 0; c < rank_; ++c) m(r, c).canonicalize();
  return m;
}

std::vector<RationalMatrix> weyl_elements(const SplitData& sd, std::uint64_t cutoff) {
  const WeylGroup w(sd);
  if (w.order() > cutoff) throw WeylCutoffExceeded(w.order(), cutoff);
  std::vector<RationalMatrix> out;
  out.reserve(w.order());
  for (std::uint64_t i = 0; i < w.order(); ++i) out.push_back(w.element(i));
  return out;
}

// ---------------------------------------------------------------------------
// Disjointness

namespace {

// Integer row vectors spanning the same subspace.
std::vector<std::vector<std::int64_t>> integer_rows(const Subspace& s) {
  std::vector<std::vector<std::int64_t>> out;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    RationalVector v = s.vector(i);
    mpz_class l = 1;
    for (const auto& x : v) l = lcm(l, mpz_class(x.get_den()));
    mpz_class g = 0;
    for (const auto& x : v) g = gcd(g, mpz_class(x.get_num() * (l / x.get_den())));
    std::vector<std::int64_t> row;
    for (const auto& x : v) {
      const mpz_class n = x.get_num() * (l / x.get_den()) / g;
      if (!n.fits_slong_p()) throw std::overflow_error("weyl_disjoint: coordinates too large");
      row.push_back(n.get_si());
    }
    out.push_back(std::move(row));
  }
  return out;
}

// Rank of a small integer matrix by fraction-free elimination; nullopt on overflow.
std::optional<std::size_t> small_rank(std::vector<std::int64_t>& m, std::size_t rows, std::size_t cols) {
  using wide = __int128;
  constexpr wide limit = wide(1) << 62;
  std::int64_t prev = 1;
  std::size_t rk = 0;
  for (std::size_t c = 0; c < cols && rk < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t r = rk; r < rows; ++r)
      if (m[r * cols + c] != 0) {
        piv = r;
        break;
      }
    if (piv == rows) continue;
    if (piv != rk)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m[piv * cols + j], m[rk * cols + j]);
    const std::int64_t p = m[rk * cols + c];
    for (std::size_t r = rk + 1; r < rows; ++r) {
      const std::int64_t f = m[r * cols + c];
      for (std::size_t j = c; j < cols; ++j) {
        const wide v = (wide(m[r * cols + j]) * p - wide(f) * m[rk * cols + j]) / prev;
        if (v >= limit || v <= -limit) return std::nullopt;
        m[r * cols + j] = static_cast<std::int64_t>(v);
      }
    }
    prev = p;
    ++rk;
  }
  return rk;
}

}  // namespace

DisjointnessResult weyl_disjoint(const Subspace& vh, const Subspace& vl, const WeylGroup& w, std::uint64_t cutoff,
                                 unsigned threads) {
  if (vh.ambient_dim() != w.rank() || vl.ambient_dim() != w.rank())
    throw DimensionMismatch("weyl_disjoint: subspaces are not in the split subspace of the group");
  DisjointnessResult res;
  res.group_order = w.order();
  auto record = [&](std::uint64_t idx) {
    res.disjoint = false;
    res.witness_index = idx;
    res.witness = w.element(idx);
    RationalMatrix moved(0, w.rank());
    for (std::size_t i = 0; i < vh.dim(); ++i) moved.append_row(*res.witness * vh.vector(i));
    const Subspace meet = intersect(Subspace(w.rank(), moved), vl);
    res.vector = meet.vector(0);
  };
  if (vh.dim() == 0 || vl.dim() == 0) return res;
  if (vh.dim() + vl.dim() > w.rank()) {
    record(0);
    return res;
  }
  if (w.order() > cutoff) throw WeylCutoffExceeded(w.order(), cutoff);

  const auto hrows = integer_rows(vh), lrows = integer_rows(vl);
  const std::size_t r = w.rank(), nh = hrows.size(), nl = lrows.size(), n = nh + nl;
  const std::uint64_t order = w.order();
  std::atomic<std::uint64_t> best{order};

  auto scan = [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<std::int64_t> m(n * r);
    for (std::uint64_t idx = begin; idx < end && idx < best.load(std::memory_order_relaxed); ++idx) {
      for (std::size_t i = 0; i < nh; ++i) w.apply(idx, hrows[i].data(), m.data() + i * r);
      for (std::size_t i = 0; i < nl; ++i) std::copy(lrows[i].begin(), lrows[i].end(), m.begin() + (nh + i) * r);
      std::size_t rk;
      if (auto k = small_rank(m, n, r)) {
        rk = *k;
      } else {
        RationalMatrix exact(n, r);
        for (std::size_t i = 0; i < nh; ++i) {
          w.apply(idx, hrows[i].data(), m.data());
          for (std::size_t j = 0; j < r; ++j) exact(i, j) = Rational(m[j]);
        }
        for (std::size_t i = 0; i < nl; ++i)
          for (std::size_t j = 0; j < r; ++j) exact(nh + i, j) = Rational(lrows[i][j]);
        rk = rank(exact);
      }
      if (rk < n) {
        std::uint64_t cur = best.load();
        while (idx < cur && !best.compare_exchange_weak(cur, idx)) {
        }
        return;
      }
    }
  };

  const unsigned t = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(order, 64))));
  if (t == 1) {
    scan(0, order);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (order + t - 1) / t;
    for (unsigned i = 0; i < t; ++i) pool.emplace_back(scan, i * chunk, std::min(order, (i + 1) * chunk));
    for (auto& th : pool) th.join();
  }
  if (best.load() < order) record(best.load());
  return res;
}

RationalVector chamber_representative(const SplitData& sd, const RationalVector& x) {
  RationalVector y = x;
  for (const auto& f : sd.factors) {
    if (f.type == "G") continue;
    std::vector<Rational> block(y.begin() + static_cast<long>(f.offset), y.begin() + static_cast<long>(f.offset + f.rank));
    int negatives = 0;
    bool has_zero = false;
    for (auto& v : block) {
      if (sgn(v) < 0) ++negatives;
      if (sgn(v) == 0) has_zero = true;
      v = abs(v);
    }
    std::sort(block.begin(), block.end(), std::greater<>());
    if (f.type == "D" && negatives % 2 == 1 && !has_zero && !block.empty()) block.back() = -block.back();
    std::copy(block.begin(), block.end(), y.begin() + static_cast<long>(f.offset));
  }
  // Remaining factors: reflect across violated walls until inside the chamber.
  for (const auto& f : sd.factors) {
    if (f.type != "G") continue;
    RationalMatrix kil(f.rank, f.rank);
    for (std::size_t i = 0; i < f.rank; ++i)
      for (std::size_t j = 0; j < f.rank; ++j) kil(i, j) = sd.killing(f.offset + i, f.offset + j);
    std::vector<RationalVector> walls;
    for (std::size_t w = 0; w < sd.chamber_walls.rows(); ++w) {
      RationalVector local(f.rank);
      bool inside = true;
      for (std::size_t j = 0; j < sd.rank(); ++j) {
        const bool mine = j >= f.offset && j < f.offset + f.rank;
        if (mine) local[j - f.offset] = sd.chamber_walls(w, j);
        else if (sgn(sd.chamber_walls(w, j)) != 0) inside = false;
      }
      if (inside) walls.push_back(local);
    }
    RationalVector local(y.begin() + static_cast<long>(f.offset), y.begin() + static_cast<long>(f.offset + f.rank));
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& wl : walls) {
        Rational s = 0;
        for (std::size_t i = 0; i < f.rank; ++i) s += wl[i] * local[i];
        if (sgn(s) < 0) {
          local = reflection(wl, kil) * local;
          changed = true;
        }
      }
    }
    std::copy(local.begin(), local.end(), y.begin() + static_cast<long>(f.offset));
  }
  return y;
}

}  // namespace ckf
