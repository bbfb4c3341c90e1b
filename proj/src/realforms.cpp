#include "ckforms/realforms.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <functional>
#include <numeric>
#include <optional>

namespace ckf {

std::string RealFormSpec::name() const {
  switch (family) {
    case Family::SO: return "so(" + std::to_string(p) + "," + std::to_string(q) + ")";
    case Family::SU: return "su(" + std::to_string(p) + "," + std::to_string(q) + ")";
    case Family::SP: return "sp(" + std::to_string(p) + "," + std::to_string(q) + ")";
    case Family::G2: return "g2(2)";
  }
  return {};
}

std::size_t RealFormSpec::dim() const {
  const std::size_t n = static_cast<std::size_t>(p + q);
  switch (family) {
    case Family::SO: return n * (n - 1) / 2;
    case Family::SU: return n * n - 1;
    case Family::SP: return n * (2 * n + 1);
    case Family::G2: return 14;
  }
  return 0;
}

std::size_t RealFormSpec::field_dim() const {
  switch (family) {
    case Family::SO: return 1;
    case Family::SU: return 2;
    case Family::SP: return 4;
    case Family::G2: return 7;
  }
  return 1;
}

std::size_t RealFormSpec::matrix_size() const {
  if (family == Family::G2) return 7;
  return field_dim() * static_cast<std::size_t>(p + q);
}

std::string RealFormSpec::root_type() const {
  if (family == Family::G2) return "G2";
  const int r = std::min(p, q);
  if (r == 0) return "";
  const std::string n = std::to_string(r);
  if (family == Family::SO) return (p == q ? "D" : "B") + n;
  return (p == q ? "C" : "BC") + n;
}

RealFormSpec parse_real_form(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "g2(2)" || s == "g2") return {Family::G2, 3, 4};
  if (s.size() < 6 || s[2] != '(' || s.back() != ')') throw ParseError("unrecognized real form: " + std::string(text));
  RealFormSpec spec;
  const std::string fam = s.substr(0, 2);
  if (fam == "so") spec.family = Family::SO;
  else if (fam == "su") spec.family = Family::SU;
  else if (fam == "sp") spec.family = Family::SP;
  else throw ParseError("unknown family in: " + std::string(text));
  const std::string inner = s.substr(3, s.size() - 4);
  const auto comma = inner.find(',');
  if (comma == std::string::npos) throw ParseError("expected (p,q) in: " + std::string(text));
  auto parse_int = [&](const std::string& t) {
    if (t.empty() || t.size() > 3 || !std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw ParseError("bad index in: " + std::string(text));
    return std::stoi(t);
  };
  spec.p = parse_int(inner.substr(0, comma));
  spec.q = parse_int(inner.substr(comma + 1));
  if (spec.p > spec.q) std::swap(spec.p, spec.q);
  const int n = spec.p + spec.q;
  if ((spec.family != Family::SP && n < 2) || n < 1) throw ParseError("degenerate real form: " + std::string(text));
  return spec;
}

RationalMatrix unit_matrix(std::size_t d, int u) {
  RationalMatrix m(d, d);
  auto col = [&](std::size_t c, std::size_t r, int v) { m(r, c) = v; };
  if (u == 0) return RationalMatrix::identity(d);
  if (d == 2 && u == 1) {
    col(0, 1, 1);
    col(1, 0, -1);
    return m;
  }
  if (d != 4) throw std::invalid_argument("unit_matrix: unit not available in this dimension");
  switch (u) {
    case 1: col(0, 1, 1); col(1, 0, -1); col(2, 3, 1); col(3, 2, -1); break;
    case 2: col(0, 2, 1); col(1, 3, -1); col(2, 0, -1); col(3, 1, 1); break;
    case 3: col(0, 3, 1); col(1, 2, 1); col(2, 1, -1); col(3, 0, -1); break;
    default: throw std::invalid_argument("unit_matrix: unit index out of range");
  }
  return m;
}

namespace {

struct Builder {
  std::size_t d;
  std::size_t n;
  std::vector<RationalMatrix> units;
  std::vector<SparseMatrix::Entry> entries;

  void add(std::size_t a, std::size_t b, int u, int value) {
    const RationalMatrix& L = units[static_cast<std::size_t>(u)];
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t s = 0; s < d; ++s)
        if (sgn(L(r, s)) != 0)
          entries.push_back({static_cast<std::uint32_t>(d * a + r), static_cast<std::uint32_t>(d * b + s), value * L(r, s)});
  }
  SparseMatrix take() {
    SparseMatrix m(n, std::move(entries));
    entries.clear();
    return m;
  }
};

LieAlgebra build_classical(const RealFormSpec& spec) {
  const std::size_t d = spec.field_dim();
  const std::size_t p = static_cast<std::size_t>(spec.p), N = static_cast<std::size_t>(spec.p + spec.q);
  Builder b{d, d * N, {}, {}};
  for (int u = 0; u < static_cast<int>(d); ++u) b.units.push_back(u == 0 ? RationalMatrix::identity(d) : unit_matrix(d, u));
  const int imag = static_cast<int>(d) - 1;

  std::vector<SparseMatrix> kpart, ppart;
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t c = a + 1; c < N; ++c) {
      const bool same = (a < p) == (c < p);
      auto& out = same ? kpart : ppart;
      const int real_sign = same ? -1 : 1;
      b.add(a, c, 0, 1);
      b.add(c, a, 0, real_sign);
      out.push_back(b.take());
      for (int u = 1; u <= imag; ++u) {
        b.add(a, c, u, 1);
        b.add(c, a, u, -real_sign);
        out.push_back(b.take());
      }
    }
  if (spec.family == Family::SU)
    for (std::size_t a = 0; a + 1 < N; ++a) {
      b.add(a, a, 1, 1);
      b.add(a + 1, a + 1, 1, -1);
      kpart.push_back(b.take());
    }
  if (spec.family == Family::SP)
    for (std::size_t a = 0; a < N; ++a)
      for (int u = 1; u <= 3; ++u) {
        b.add(a, a, u, 1);
        kpart.push_back(b.take());
      }

  // A_k = E_{k,p+k} + E_{p+k,k}, located in the noncompact list.
  std::vector<SparseMatrix> basis = kpart;
  basis.insert(basis.end(), ppart.begin(), ppart.end());
  const std::size_t r = spec.real_rank();
  SplitMetadata split;
  split.a_basis = RationalMatrix(r, basis.size());
  for (std::size_t k = 0; k < r; ++k) {
    b.add(k, p + k, 0, 1);
    b.add(p + k, k, 0, 1);
    const SparseMatrix a = b.take();
    const auto it = std::find(basis.begin(), basis.end(), a);
    split.a_basis(k, static_cast<std::size_t>(it - basis.begin())) = 1;
  }
  if (r > 0) {
    split.factor_types = {spec.root_type()};
    split.factor_ranks = {r};
  }
  LieAlgebra g = LieAlgebra::from_matrices(spec.name(), std::move(basis));
  g.set_split(std::move(split));
  return g;
}

// Quaternion product table in the basis (1, i, j, k): e_a e_b = sign * e_idx.
struct QuatProduct {
  int idx;
  int sign;
};
constexpr QuatProduct kQuat[4][4] = {
    {{0, 1}, {1, 1}, {2, 1}, {3, 1}},
    {{1, 1}, {0, -1}, {3, 1}, {2, -1}},
    {{2, 1}, {3, -1}, {0, -1}, {1, 1}},
    {{3, 1}, {2, 1}, {1, -1}, {0, -1}},
};

using Quat = std::array<Rational, 4>;

Quat qmul(const Quat& x, const Quat& y) {
  Quat out{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      if (sgn(x[a]) == 0 || sgn(y[b]) == 0) continue;
      out[kQuat[a][b].idx] += kQuat[a][b].sign * x[a] * y[b];
    }
  return out;
}

Quat qconj(Quat x) {
  for (int i = 1; i < 4; ++i) x[i] = -x[i];
  return x;
}

Quat qadd(const Quat& x, const Quat& y) {
  Quat out;
  for (int i = 0; i < 4; ++i) out[i] = x[i] + y[i];
  return out;
}

}  // namespace

std::vector<std::vector<RationalVector>> split_octonion_table() {
  // Cayley-Dickson doubling (a,b)(c,d) = (ac + conj(d) b, d a + b conj(c)).
  std::vector<std::vector<RationalVector>> t(8, std::vector<RationalVector>(8, RationalVector(8)));
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) {
      Quat a{}, b{}, c{}, d{};
      (x < 4 ? a : b)[x % 4] = 1;
      (y < 4 ? c : d)[y % 4] = 1;
      const Quat lo = qadd(qmul(a, c), qmul(qconj(d), b));
      const Quat hi = qadd(qmul(d, a), qmul(b, qconj(c)));
      for (int i = 0; i < 4; ++i) {
        t[x][y][i] = lo[i];
        t[x][y][4 + i] = hi[i];
      }
    }
  return t;
}

namespace {

LieAlgebra build_g2() {
  const auto m = split_octonion_table();
  // Unknowns D(t, c) for t, c in 1..7, index 7(t-1) + (c-1).
  auto var = [](int t, int c) { return static_cast<std::size_t>(7 * (t - 1) + (c - 1)); };
  RationalMatrix eqs(0, 49);
  for (int a = 1; a < 8; ++a)
    for (int b = 1; b < 8; ++b)
      for (int t = 0; t < 8; ++t) {
        RationalVector row(49);
        if (t >= 1)
          for (int c = 1; c < 8; ++c)
            if (sgn(m[a][b][c]) != 0) row[var(t, c)] += m[a][b][c];
        for (int r = 1; r < 8; ++r) {
          if (sgn(m[r][b][t]) != 0) row[var(r, a)] -= m[r][b][t];
          if (sgn(m[a][r][t]) != 0) row[var(r, b)] -= m[a][r][t];
        }
        if (std::any_of(row.begin(), row.end(), [](const Rational& v) { return sgn(v) != 0; })) eqs.append_row(row);
      }
  const Subspace der(49, kernel(eqs));
  if (der.dim() != 14) throw std::logic_error("g2: derivation algebra has unexpected dimension");

  auto flat = [](std::size_t r, std::size_t c) { return 7 * r + c; };
  auto to_matrix = [&](const RationalVector& v) {
    std::vector<SparseMatrix::Entry> es;
    for (std::size_t r = 0; r < 7; ++r)
      for (std::size_t c = 0; c < 7; ++c)
        if (sgn(v[flat(r, c)]) != 0) es.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c), v[flat(r, c)]});
    return SparseMatrix(7, std::move(es));
  };
  auto to_vector = [&](const SparseMatrix& s) {
    RationalVector v(49);
    for (const auto& e : s.entries()) v[flat(e.row, e.col)] = e.value;
    return v;
  };

  // Conjugate by a signed permutation of the negative block so that g2 meets
  // the diagonal split subspace of so(3,4) in a rank-two subspace.
  RationalMatrix a_rows(0, 49);
  for (std::size_t k = 0; k < 3; ++k) {
    RationalVector v(49);
    v[flat(k, 3 + k)] = 1;
    v[flat(3 + k, k)] = 1;
    a_rows.append_row(v);
  }
  const Subspace a_so(49, a_rows);
  std::vector<SparseMatrix> mats;
  for (std::size_t i = 0; i < der.dim(); ++i) mats.push_back(to_matrix(der.vector(i)));

  std::array<std::size_t, 4> perm4{0, 1, 2, 3};
  std::optional<Subspace> chosen;
  do {
    for (int signs = 0; signs < 16 && !chosen; ++signs) {
      std::vector<std::size_t> perm{0, 1, 2};
      std::vector<int> sign{1, 1, 1};
      for (std::size_t i = 0; i < 4; ++i) {
        perm.push_back(3 + perm4[i]);
        sign.push_back((signs >> i) & 1 ? -1 : 1);
      }
      RationalMatrix rows(0, 49);
      for (const auto& x : mats) rows.append_row(to_vector(x.permuted(perm, sign, 7)));
      Subspace conj(49, rows);
      if (intersect(conj, a_so).dim() == 2) chosen = conj;
    }
  } while (!chosen && std::next_permutation(perm4.begin(), perm4.end()));
  if (!chosen) throw std::logic_error("g2: no adapted conjugate found");

  RationalMatrix skew(0, 49), sym(0, 49);
  for (std::size_t r = 0; r < 7; ++r)
    for (std::size_t c = r; c < 7; ++c) {
      RationalVector v(49), w(49);
      v[flat(r, c)] += 1;
      v[flat(c, r)] += 1;
      sym.append_row(v);
      if (c != r) {
        w[flat(r, c)] = 1;
        w[flat(c, r)] = -1;
        skew.append_row(w);
      }
    }
  const Subspace kpart = intersect(*chosen, Subspace(49, skew));
  const Subspace ppart = intersect(*chosen, Subspace(49, sym));
  if (kpart.dim() != 6 || ppart.dim() != 8) throw std::logic_error("g2: realization is not transpose stable");

  std::vector<SparseMatrix> basis;
  for (const auto* part : {&kpart, &ppart}) {
    const RationalMatrix cb = part->canonical_basis();
    for (std::size_t i = 0; i < cb.rows(); ++i) basis.push_back(to_matrix(cb.row(i)));
  }
  LieAlgebra g = LieAlgebra::from_matrices("g2(2)", std::move(basis));

  const Subspace a_g2 = intersect(*chosen, a_so);
  const RationalMatrix ab = a_g2.canonical_basis();
  SplitMetadata split;
  split.a_basis = RationalMatrix(0, 14);
  for (std::size_t i = 0; i < ab.rows(); ++i) split.a_basis.append_row(*g.coordinates(to_matrix(ab.row(i))));
  split.factor_types = {"G2"};
  split.factor_ranks = {2};
  g.set_split(std::move(split));
  return g;
}

}  // namespace

LieAlgebra build_real_form(const RealFormSpec& spec) {
  if (spec.family == Family::G2) return build_g2();
  return build_classical(spec);
}

// ---------------------------------------------------------------------------
// Clifford generators

namespace {

struct Pauli {
  std::uint32_t x = 0;
  std::uint32_t z = 0;
};

bool anticommute(const Pauli& a, const Pauli& b) {
  return (std::popcount((a.z & b.x)) + std::popcount((a.x & b.z))) % 2 == 1;
}

int square_sign(const Pauli& a) { return std::popcount(a.x & a.z) % 2 == 0 ? 1 : -1; }

std::string label(const Pauli& a, int k) {
  std::string s;
  for (int i = 0; i < k; ++i) {
    const std::uint32_t bit = 1u << (k - 1 - i);
    const bool x = a.x & bit, z = a.z & bit;
    s += x ? (z ? 'E' : 'X') : (z ? 'Z' : 'I');
  }
  return s;
}

struct Slot {
  bool positive;
  int index;
};

}  // namespace

CliffordData clifford_generators(int p, int q, int max_k) {
  if (p < 0 || q < 0 || p + q == 0) throw std::invalid_argument("clifford_generators: need p + q > 0");
  const int m = std::min(p, q);
  std::vector<Slot> order;
  for (int i = 0; i < m; ++i) {
    order.push_back({true, i});
    order.push_back({false, i});
  }
  for (int i = m; i < p; ++i) order.push_back({true, i});
  for (int i = m; i < q; ++i) order.push_back({false, i});

  for (int k = 0; k <= max_k; ++k) {
    const std::uint32_t count = 1u << (2 * k);
    std::vector<Pauli> all;
    for (std::uint32_t t = 0; t < count; ++t) {
      Pauli s;
      for (int i = 0; i < k; ++i) {
        const std::uint32_t digit = (t >> (2 * (k - 1 - i))) & 3u;
        const std::uint32_t bit = 1u << (k - 1 - i);
        if (digit & 1u) s.x |= bit;
        if (digit & 2u) s.z |= bit;
      }
      all.push_back(s);
    }
    for (bool flip : {false, true})
      for (std::uint32_t zs = 0; zs < (1u << k); ++zs) {
        const Pauli form{0, zs};
        std::vector<Pauli> cand_pos, cand_neg;
        for (const auto& s : all) {
          const bool commutes = !anticommute(form, s);
          const int sq = square_sign(s);
          if (commutes && sq == (flip ? -1 : 1)) cand_pos.push_back(s);
          if (!commutes && sq == (flip ? 1 : -1)) cand_neg.push_back(s);
        }
        std::vector<Pauli> chosen;
        std::optional<std::uint32_t> mask;
        std::function<bool()> dfs = [&]() -> bool {
          if (chosen.size() == order.size()) return true;
          const Slot slot = order[chosen.size()];
          for (const auto& s : slot.positive ? cand_pos : cand_neg) {
            if (!std::all_of(chosen.begin(), chosen.end(), [&](const Pauli& c) { return anticommute(c, s); })) continue;
            const auto saved = mask;
            if (!slot.positive && slot.index < m) {
              const std::uint32_t mk = chosen.back().x ^ s.x;
              if (mask && *mask != mk) continue;
              mask = mk;
            }
            chosen.push_back(s);
            if (dfs()) return true;
            chosen.pop_back();
            mask = saved;
          }
          return false;
        };
        if (!dfs()) continue;

        CliffordData out;
        out.p = p;
        out.q = q;
        out.k = k;
        out.flipped = flip;
        out.form_string = label(form, k);
        std::vector<Pauli> pos(static_cast<std::size_t>(p)), neg(static_cast<std::size_t>(q));
        for (std::size_t i = 0; i < order.size(); ++i)
          (order[i].positive ? pos : neg)[static_cast<std::size_t>(order[i].index)] = chosen[i];

        const std::size_t n = std::size_t{1} << k;
        auto form_sign = [&](std::uint32_t c) { return std::popcount(zs & c) % 2 == 0 ? 1 : -1; };
        std::vector<std::uint32_t> positives, negatives;
        for (std::uint32_t c = 0; c < n; ++c) (form_sign(c) > 0 ? positives : negatives).push_back(c);
        if (mask) {
          negatives.clear();
          for (auto u : positives) negatives.push_back(u ^ *mask);
        }
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < positives.size(); ++i) perm[positives[i]] = i;
        for (std::size_t i = 0; i < negatives.size(); ++i) perm[negatives[i]] = positives.size() + i;
        const std::vector<int> ones(n, 1);
        out.form_positive = positives.size();
        out.form_negative = negatives.size();
        std::vector<Rational> diag(n, Rational(-1));
        for (std::size_t i = 0; i < positives.size(); ++i) diag[i] = 1;
        out.spinor_form = RationalMatrix::diagonal(diag);

        for (const auto* list : {&pos, &neg})
          for (const auto& s : *list) {
            std::vector<SparseMatrix::Entry> es;
            for (std::uint32_t c = 0; c < n; ++c)
              es.push_back({c ^ s.x, c, Rational(std::popcount(s.z & c) % 2 == 0 ? 1 : -1)});
            out.gammas.push_back(SparseMatrix(n, std::move(es)).permuted(perm, ones, n));
            out.labels.push_back(label(s, k));
            out.squares.push_back(square_sign(s));
          }
        return out;
      }
  }
  throw std::runtime_error("clifford_generators: no generators found up to the size limit");
}

}  // namespace ckf
