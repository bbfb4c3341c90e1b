#include "doctest.h"

#include "ckforms/criteria.hpp"

using namespace ckf;

namespace {

Catalog& cat() { return default_catalog(); }

Triple simple_triple(const std::string& h, const std::string& l) {
  return make_triple(simple_embedding(cat().lookup(h)), simple_embedding(cat().lookup(l)));
}

const Embedding& ident(const std::string& g) { return cat().lookup(g + ":" + g + ":identity"); }

}  // namespace

TEST_CASE("check_sum on table rows") {
  const SumCheck a = check_sum(simple_triple("su(2,2):sp(1,1):quaternionic", "su(2,2):su(1,2):block"));
  CHECK(a.holds);
  CHECK(a.dim_g == 15);
  CHECK(a.dim_h == 10);
  CHECK(a.dim_l == 8);
  CHECK(a.dim_intersection == 10 + 8 - 15);

  CHECK_FALSE(check_sum(simple_triple("so(4,4):so(3,4):block", "so(4,4):so(1,4):block")).holds);

  const SumCheck c = check_sum(simple_triple("so(8,8):so(7,8):block", "so(8,8):so(1,8):spin"));
  CHECK(c.holds);
  CHECK(c.dim_g == 16 * 15 / 2);
  CHECK(c.dim_h == 15 * 14 / 2);
  CHECK(c.dim_l == 9 * 8 / 2);
  CHECK(c.dim_intersection == 7 * 6 / 2);
}

TEST_CASE("compact intersections") {
  const CompactCheck a = check_compact_intersection(simple_triple("so(3,4):so(1,4):block", "so(3,4):g2(2):g2in7"));
  CHECK(a.compact);
  CHECK(a.dim() == 14 + 10 - 21);
  CHECK(a.signature == Signature{0, 3, 0});

  const CompactCheck b = check_compact_intersection(simple_triple("so(4,4):so(3,4):block", "so(4,4):sp(1,1):quaternionic"));
  CHECK(b.compact);
  CHECK(b.dim() == 3);

  const AlgebraPtr g = catalog_algebra("so(2,4)");
  const ProductEmbedding d = diagonal_embedding(ident("so(2,4)"), g);
  const Triple t = make_triple(d, d);
  const CompactCheck c = check_compact_intersection(t);
  CHECK_FALSE(c.compact);
  CHECK(c.dim() == 15);
}

TEST_CASE("closed-form intersection dimensions") {
  for (int n = 1; n <= 3; ++n) {
    CAPTURE(n);
    const std::string su = "su(2," + std::to_string(2 * n) + ")";
    const SumCheck a = check_sum(simple_triple(su + ":sp(1," + std::to_string(n) + "):quaternionic",
                                               su + ":su(1," + std::to_string(2 * n) + "):block"));
    CHECK(a.holds);
    CHECK(a.dim_intersection == static_cast<std::size_t>(n * (2 * n + 1)));
    CHECK(a.dim_intersection == a.dim_h + a.dim_l - a.dim_g);

    const std::string so2 = "so(2," + std::to_string(2 * n) + ")";
    const SumCheck b = check_sum(simple_triple(so2 + ":su(1," + std::to_string(n) + "):complexstruct",
                                               so2 + ":so(1," + std::to_string(2 * n) + "):block"));
    CHECK(b.holds);
    CHECK(b.dim_intersection == static_cast<std::size_t>(n * n - 1));

    const std::string so4 = "so(4," + std::to_string(4 * n) + ")";
    const Triple t = simple_triple(so4 + ":so(3," + std::to_string(4 * n) + "):block",
                                   so4 + ":sp(1," + std::to_string(n) + "):quaternionic");
    const SumCheck c = check_sum(t);
    CHECK(c.holds);
    CHECK(c.dim_intersection == static_cast<std::size_t>(n * (2 * n + 1)));
    CHECK(check_compact_intersection(t).compact);
  }
}

TEST_CASE("simple decompositions are standard and agree with the Weyl oracle") {
  for (const auto& [h, l] : std::vector<std::pair<std::string, std::string>>{
           {"su(2,2):sp(1,1):quaternionic", "su(2,2):su(1,2):block"},
           {"so(2,4):su(1,2):complexstruct", "so(2,4):so(1,4):block"},
           {"so(4,4):so(3,4):spin", "so(4,4):so(1,4):block"},
           {"so(3,4):so(1,4):block", "so(3,4):g2(2):g2in7"},
           {"so(4,8):so(3,8):block", "so(4,8):sp(1,2):quaternionic"}}) {
    CAPTURE(h);
    const Verdict v = classify_triple(simple_triple(h, l));
    CHECK(v.standard_form());
    CHECK(v.label == CaseLabel::SimpleDecomposition);
    REQUIRE(v.weyl);
    CHECK(v.weyl->proper == v.compact.compact);
  }
}

TEST_CASE("so(8,8) row with the Weyl oracle") {
  const Verdict v = classify_triple(simple_triple("so(8,8):so(7,8):block", "so(8,8):so(1,8):spin"));
  CHECK(v.standard_form());
  REQUIRE(v.weyl);
  CHECK(v.weyl->group_order == 5160960);
  CHECK(v.weyl->proper);
}

TEST_CASE("case 1") {
  const AlgebraPtr g1 = catalog_algebra("so(2,4)"), g2 = catalog_algebra("su(2,2)");
  const Triple t = make_triple(product_embedding(ident("so(2,4)"), std::nullopt, g1, g2),
                               product_embedding(std::nullopt, ident("su(2,2)"), g1, g2));
  const Verdict v = classify_triple(t);
  CHECK(v.label == CaseLabel::Case1);
  CHECK(v.standard_form());
  CHECK_FALSE(v.trivial);
  REQUIRE(v.weyl);
  CHECK(v.weyl->proper);
}

TEST_CASE("case 2 and case 3") {
  const AlgebraPtr g1 = catalog_algebra("so(2,4)"), g2 = catalog_algebra("so(3,4)");
  const Triple t2 = make_triple(product_embedding(cat().lookup("so(2,4):su(1,2):complexstruct"), std::nullopt, g1, g2),
                                product_embedding(cat().lookup("so(2,4):so(1,4):block"), ident("so(3,4)"), g1, g2));
  CHECK(classify_triple(t2).label == CaseLabel::Case2);
  const Triple t3 = make_triple(
      product_embedding(cat().lookup("so(2,4):su(1,2):complexstruct"), cat().lookup("so(3,4):g2(2):g2in7"), g1, g2),
      product_embedding(cat().lookup("so(2,4):so(1,4):block"), cat().lookup("so(3,4):so(1,4):block"), g1, g2));
  const Verdict v3 = classify_triple(t3);
  CHECK(v3.label == CaseLabel::Case3);
  REQUIRE(v3.weyl);
  CHECK(v3.weyl->proper);
}

TEST_CASE("case 4") {
  const AlgebraPtr g1 = catalog_algebra("so(3,4)"), g2 = catalog_algebra("g2(2)");
  const Triple t = make_triple(product_embedding(ident("so(3,4)"), std::nullopt, g1, g2),
                               diagonal_embedding(cat().lookup("so(3,4):g2(2):g2in7"), g2));
  const Verdict v = classify_triple(t);
  CHECK(v.label == CaseLabel::Case4);
  CHECK(v.standard_form());
}

TEST_CASE("case 5 examples") {
  {
    const AlgebraPtr g1 = catalog_algebra("so(4,4)"), g2 = catalog_algebra("so(2,4)");
    const Triple t = make_triple(
        diagonal_embedding(cat().lookup("so(4,4):so(2,4):block"), g2),
        product_embedding(cat().lookup("so(4,4):so(3,4):spin"), cat().lookup("so(2,4):so(1,4):block"), g1, g2));
    const Verdict v = classify_triple(t);
    CHECK(v.label == CaseLabel::Case5);
    CHECK(v.standard_form());
    CHECK(v.roles_swapped);
    REQUIRE(v.weyl);
    CHECK(v.weyl->proper);
  }
  {
    const AlgebraPtr g = catalog_algebra("so(3,4)");
    const Triple t = make_triple(
        diagonal_embedding(ident("so(3,4)"), g),
        product_embedding(cat().lookup("so(3,4):g2(2):g2in7"), cat().lookup("so(3,4):so(1,4):block"), g, g));
    const Verdict v = classify_triple(t);
    CHECK(v.label == CaseLabel::Case5);
    REQUIRE(v.weyl);
    CHECK(v.weyl->proper == v.compact.compact);
  }
}

TEST_CASE("swap symmetry of verdicts") {
  const AlgebraPtr g1 = catalog_algebra("so(4,4)"), g2 = catalog_algebra("so(2,4)");
  const ProductEmbedding h = diagonal_embedding(cat().lookup("so(4,4):so(2,4):block"), g2);
  const ProductEmbedding l =
      product_embedding(cat().lookup("so(4,4):so(3,4):spin"), cat().lookup("so(2,4):so(1,4):block"), g1, g2);
  const Verdict a = classify_triple(make_triple(h, l)), b = classify_triple(make_triple(l, h));
  CHECK(a.standard_form() == b.standard_form());
  CHECK(a.label == b.label);
  CHECK(a.roles_swapped != b.roles_swapped);

  const Triple n1 = simple_triple("so(4,4):so(3,4):block", "so(4,4):so(1,4):block");
  const Triple n2 = simple_triple("so(4,4):so(1,4):block", "so(4,4):so(3,4):block");
  CHECK(classify_triple(n1).standard_form() == classify_triple(n2).standard_form());
}

TEST_CASE("negative controls name the failing criterion") {
  const Verdict nested = classify_triple(simple_triple("so(4,4):so(3,4):block", "so(4,4):so(1,4):block"));
  CHECK(nested.label == CaseLabel::Reject);
  REQUIRE_FALSE(nested.failed.empty());
  CHECK(nested.failed.front() == "sum");
  CHECK(nested.reason.find("check_sum") != std::string::npos);

  const AlgebraPtr g = catalog_algebra("so(2,4)");
  const ProductEmbedding d = diagonal_embedding(ident("so(2,4)"), g);
  const Verdict diag = classify_triple(make_triple(d, d));
  CHECK(diag.label == CaseLabel::Reject);
  CHECK(std::find(diag.failed.begin(), diag.failed.end(), "compact_intersection") != diag.failed.end());
  REQUIRE(diag.weyl);
  CHECK_FALSE(diag.weyl->proper);
  REQUIRE(diag.weyl->witness_index);
  CHECK(*diag.weyl->witness_index == 0);
  CHECK(*diag.weyl->witness == RationalMatrix::identity(4));

  // Overlapping blocks miss the (p2, n4) plane and meet in a noncompact so(1,3).
  const Verdict sig = classify_triple(simple_triple("so(2,4):so(1,4):block", "so(2,4):so(2,3):block"));
  CHECK(sig.label == CaseLabel::Reject);
}

TEST_CASE("trivial triples") {
  const AlgebraPtr g = catalog_algebra("so(2,4)");
  const Triple t = make_triple(simple_embedding(ident("so(2,4)")), zero_embedding(g, nullptr));
  const Verdict v = classify_triple(t);
  CHECK(v.label == CaseLabel::Trivial);
  CHECK(v.trivial);
  CHECK(v.standard_form());
}

TEST_CASE("verdict JSON") {
  const Verdict v = classify_triple(simple_triple("so(4,4):so(3,4):spin", "so(4,4):so(1,4):block"));
  const auto j = v.to_json();
  CHECK(j["schema_version"] == 1);
  CHECK(j["dims"]["g"] == 28);
  CHECK(j["dims"]["h"] == 21);
  CHECK(j["dims"]["l"] == 10);
  CHECK(j["dims"]["intersection"] == 3);
  CHECK(j["standard_form"] == true);
  CHECK(j["intersection_signature"] == nlohmann::ordered_json({0, 3, 0}));
  CHECK(j["weyl"]["proper"] == true);
}
