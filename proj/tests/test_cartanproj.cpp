#include "doctest.h"

#include "ckforms/cartanproj.hpp"

#include <algorithm>
#include <cmath>

using namespace ckf;

namespace {

AlgebraPtr sum(const std::string& a, const std::string& b) { return catalog_sum(catalog_algebra(a), catalog_algebra(b)); }

// Closed-chamber representative by sorting absolute values; D-type keeps the sign parity.
std::vector<double> sorted_chamber(const ProductGroup& g, const std::vector<double>& x) {
  std::vector<double> out = x;
  for (std::size_t f = 0; f < g.factors().size(); ++f) {
    const auto [b, e] = g.split_range(f);
    int negatives = 0;
    for (std::size_t i = b; i < e; ++i) {
      negatives += out[i] < 0;
      out[i] = std::abs(out[i]);
    }
    std::sort(out.begin() + static_cast<long>(b), out.begin() + static_cast<long>(e), std::greater<>());
    const RealFormSpec& s = g.factors()[f];
    if (s.family == Family::SO && s.p == s.q && negatives % 2 == 1) out[e - 1] = -out[e - 1];
  }
  return out;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<double> random_vector(std::size_t n, double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("identity and split exponentials") {
  const ProductGroup g(sum("so(4,4)", "so(2,4)"));
  const ChamberVector z = g.cartan_projection(g.identity());
  CHECK(z.chamber_normalized);
  CHECK(max_diff(z.coordinates, std::vector<double>(6, 0.0)) == 0.0);
  CHECK(g.norm(z) == 0.0);
  const std::vector<double> x{5.0, 3.0, 2.0, -1.0, 4.0, 0.5};
  CHECK(max_diff(g.cartan_projection(g.exp_split(x)).coordinates, x) < tolerance::recovery);
}

TEST_CASE("recovery of k1 exp(X) k2 over random trials") {
  for (const char* name : {"so(2,4)", "su(2,2)", "sp(1,2)", "so(3,4)"}) {
    CAPTURE(name);
    const ProductGroup g(catalog_algebra(name));
    const SubgroupSampler s = SubgroupSampler::full(g);
    std::mt19937_64 rng(7);
    double worst = 0;
    for (int trial = 0; trial < 40; ++trial) {
      const std::vector<double> x = random_vector(g.rank(), 12.0, rng);
      const ChamberVector mu = g.cartan_projection(s.random_compact(rng) * g.exp_split(x) * s.random_compact(rng));
      CHECK(g.in_chamber(mu));
      worst = std::max(worst, max_diff(mu.coordinates, sorted_chamber(g, x)));
    }
    CHECK(worst < tolerance::recovery);
  }
  const ProductGroup g(sum("so(4,4)", "so(2,4)"));
  const SubgroupSampler s = SubgroupSampler::full(g);
  std::mt19937_64 rng(11);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::vector<double> x = random_vector(g.rank(), 25.0, rng);
    const ChamberVector mu = g.cartan_projection(s.random_compact(rng) * g.exp_split(x) * s.random_compact(rng));
    worst = std::max(worst, max_diff(mu.coordinates, sorted_chamber(g, x)));
  }
  CHECK(worst < tolerance::recovery);
}

TEST_CASE("Pythagorean identity on a product") {
  const AlgebraPtr a1 = catalog_algebra("so(4,4)"), a2 = catalog_algebra("so(2,4)");
  const ProductGroup g(catalog_sum(a1, a2)), g1(a1), g2(a2);
  const SubgroupSampler s1 = SubgroupSampler::full(g1), s2 = SubgroupSampler::full(g2);
  std::mt19937_64 rng(3);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const GroupElement x1 = s1.sample(sample_radius(rng), rng), x2 = s2.sample(sample_radius(rng), rng);
    GroupElement pair;
    pair.factors = {x1.factors[0], x2.factors[0]};
    const ChamberVector m = g.cartan_projection(pair), m1 = g1.cartan_projection(x1), m2 = g2.cartan_projection(x2);
    // Concatenation of the factor projections.
    std::vector<double> cat = m1.coordinates;
    cat.insert(cat.end(), m2.coordinates.begin(), m2.coordinates.end());
    CHECK(m.coordinates == cat);
    const double lhs = g.norm(m) * g.norm(m), rhs = g1.norm(m1) * g1.norm(m1) + g2.norm(m2) * g2.norm(m2);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, rhs));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("norm scales linearly along chamber rays") {
  const ProductGroup g(catalog_algebra("so(2,4)"));
  const std::vector<double> x{2.0, 1.0};
  const double base = g.norm(g.cartan_projection(g.exp_split(x)));
  for (double t : {1.0, 2.5, 7.0, 20.0}) {
    const std::vector<double> tx{t * x[0], t * x[1]};
    CHECK(std::abs(g.norm(g.cartan_projection(g.exp_split(tx))) - t * base) < 1e-9 * t * base);
  }
}

TEST_CASE("inverse and compact invariance") {
  const ProductGroup g(sum("so(3,4)", "so(2,4)"));
  const SubgroupSampler s = SubgroupSampler::full(g);
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    const GroupElement x = s.sample(sample_radius(rng), rng);
    const ChamberVector m = g.cartan_projection(x);
    CHECK(std::abs(g.norm(g.cartan_projection(x.inverse())) - g.norm(m)) < 1e-9 * std::max(1.0, g.norm(m)));
    const ChamberVector mk = g.cartan_projection(s.random_compact(rng) * x * s.random_compact(rng));
    CHECK(max_diff(mk.coordinates, m.coordinates) < 1e-9);
  }
}

TEST_CASE("elements off the group are rejected") {
  const ProductGroup g(catalog_algebra("so(2,4)"));
  GroupElement x = g.identity();
  x.factors[0].matrix(0, 0) = 2;
  CHECK(form_defect(x.factors[0]) > tolerance::form);
  CHECK_THROWS_AS(g.cartan_projection(x), CartanError);
  const ProductGroup other(catalog_algebra("so(3,4)"));
  CHECK_THROWS_AS(other.cartan_projection(g.identity()), CartanError);
  CHECK_THROWS_AS(ProductGroup(catalog_algebra("g2(2)")), CartanError);
}

TEST_CASE("subspace union model matches sampled diagonal elements") {
  const GapSpace sp = gap_space("so44xso24-delta");
  const ProductGroup g(sp.g);
  const WeylGroup w(g.split());
  const auto translates = weyl_translates(adapted_split_part(sp.h.combined), w);
  CHECK(translates.size() > 1);
  const SubspaceUnion u(translates, g.killing());
  const SubgroupSampler s = SubgroupSampler::of(g, sp.h.combined);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const ChamberVector m = g.cartan_projection(s.sample(sample_radius(rng), rng));
    CHECK(u.distance(m.coordinates) <= tolerance::union_consistency * std::max(1.0, g.norm(m)));
  }
}

TEST_CASE("distance to a union of subspaces") {
  Eigen::MatrixXd gram = Eigen::MatrixXd::Identity(2, 2);
  const SubspaceUnion u({RationalMatrix{{1, 0}}, RationalMatrix{{0, 1}}}, gram);
  CHECK(std::abs(u.distance({3.0, 1.0}) - 1.0) < 1e-15);
  CHECK(std::abs(u.distance({-1.0, 4.0}) - 1.0) < 1e-15);
  const SubspaceUnion z({RationalMatrix(0, 2)}, gram * 4.0);
  CHECK(std::abs(z.distance({3.0, 4.0}) - 10.0) < 1e-12);
}

TEST_CASE("gap fit") {
  const GapReport r = fit_gap({{2.0, 1.0}, {4.0, 4.0}, {0.5, 0.0}});
  CHECK(r.fitted_epsilon == doctest::Approx(0.25));
  CHECK(r.fitted_C == doctest::Approx(0.25));
  CHECK(r.min_margin == doctest::Approx(0.0));
  const GapReport z = fit_gap({{2.0, 0.0}, {3.0, 1e-14}});
  CHECK(z.fitted_epsilon == 0.0);
  CHECK(z.min_margin >= 0.0);
}

TEST_CASE("gap experiment") {
  for (const char* key : {"so44xso24-delta", "so34xso24-delta", "so44xso34-delta"}) {
    CAPTURE(key);
    const GapSpace sp = gap_space(key);
    const WeylGroup w(split_data(*sp.g));
    CHECK(weyl_disjoint(adapted_split_part(sp.h.combined), adapted_split_part(sp.l.combined), w).disjoint);
    const GapReport r = gap_experiment(key, 400, 42);
    CHECK(r.fitted_epsilon > 0);
    CHECK(r.min_margin >= 0);
    CHECK(r.max_norm > 1);
  }
  const GapReport c = gap_experiment("so44xso24-delta-control", 400, 42);
  CHECK(c.fitted_epsilon == 0.0);
  CHECK(c.min_margin >= 0);
}

TEST_CASE("gap experiment is deterministic") {
  const std::string a = gap_experiment("so34xso24-delta", 200, 9).to_json().dump();
  const std::string b = gap_experiment("so34xso24-delta", 200, 9, 3).to_json().dump();
  CHECK(a == b);
  CHECK(a != gap_experiment("so34xso24-delta", 200, 10).to_json().dump());
  const auto j = nlohmann::json::parse(a);
  for (const char* field : {"schema_version", "space", "samples", "seed", "fitted_epsilon", "fitted_C", "min_margin"})
    CHECK(j.contains(field));
}

TEST_CASE("unknown gap spaces") { CHECK_THROWS_AS(gap_space("so(9,9)"), NotInCatalog); }
