#include "doctest.h"

#include "ckforms/enumerate.hpp"

#include <algorithm>
#include <thread>

using namespace ckf;

namespace {

Catalog& cat() { return default_catalog(); }

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

ClassifyOptions sweep_options() {
  ClassifyOptions o;
  o.weyl_without_sum = false;
  o.threads = workers();
  return o;
}

GenerationSpec parallel_spec() {
  GenerationSpec s;
  s.threads = workers();
  return s;
}

const std::vector<CheckedCandidate>& simple_n1() {
  static const std::vector<CheckedCandidate> v = verify_batch(simple_candidates(1), sweep_options());
  return v;
}

std::set<std::string> keys_of(const TableDocument& d) {
  std::set<std::string> out;
  for (const auto& r : d.rows) out.insert(r.key);
  return out;
}

std::set<std::string> reference_keys(TableKind k) {
  std::set<std::string> out;
  for (const auto& r : reference_rows(k)) out.insert(row_key(k, r));
  return out;
}

// so(4,m) (+) su(2,m/2) with so(3,m) (+) sp(1,m/4) and the diagonal su(2,m/2) through the complex structure.
Triple extra_family_instance(int n) {
  const std::string g1 = "so(4," + std::to_string(4 * n) + ")", g2 = "su(2," + std::to_string(2 * n) + ")";
  const AlgebraPtr a = catalog_algebra(g1), b = catalog_algebra(g2);
  const Embedding& so3 = cat().lookup(g1 + ":so(3," + std::to_string(4 * n) + "):block");
  const Embedding& sp1 = cat().lookup(g2 + ":sp(1," + std::to_string(n) + "):quaternionic");
  const Embedding& iota = cat().lookup(g1 + ":" + g2 + ":complexstruct");
  return make_triple(product_embedding(so3, sp1, a, b), diagonal_embedding(iota, b));
}

}  // namespace

TEST_CASE("labels") {
  CHECK(instantiate_label("so(4,4n)", 2) == "so(4,8)");
  CHECK(instantiate_label("su(2,2n)", 3) == "su(2,6)");
  CHECK(instantiate_label("sp(1,n)", 2) == "sp(1,2)");
  CHECK(instantiate_label("g2(2)", 5) == "g2(2)");
  CHECK(symbolize_label("so(3,8)", 2) == "so(3,4n)");
  CHECK(symbolize_label("sp(1,2)", 2) == "sp(1,n)");
  CHECK(symbolize_label("su(1,4)", 2) == "su(1,2n)");
  CHECK(symbolize_label("so(3,5)", 2) == "so(3,5)");
  for (const char* t : {"so(4,4n)", "su(1,2n)", "sp(1,n)", "so(3,4n)"})
    for (int n = 1; n <= 3; ++n) CHECK(symbolize_label(instantiate_label(t, n), n) == t);

  CHECK(absolutely_simple("so(3,4)"));
  CHECK(absolutely_simple("g2(2)"));
  CHECK_FALSE(absolutely_simple("so(2,2)"));
  CHECK_FALSE(absolutely_simple("so(1,3)"));
}

TEST_CASE("subalgebra keys") {
  const auto ks = subalgebra_keys("so(3,4)");
  CHECK(std::count(ks.begin(), ks.end(), "so(3,4):g2(2):g2in7") == 1);
  CHECK(std::count(ks.begin(), ks.end(), "so(3,4):so(3,4):identity") == 0);
  for (const auto& k : ks) CHECK(k.rfind("so(3,4):", 0) == 0);

  cat().disable("so(3,4):g2(2):g2in7");
  std::vector<std::string> notes;
  const auto without = subalgebra_keys("so(3,4)", &notes);
  cat().enable_all();
  CHECK(without.size() + 1 == ks.size());
  CHECK(std::any_of(notes.begin(), notes.end(), [](const auto& s) { return s.find("g2in7") != std::string::npos; }));
}

TEST_CASE("row keys") {
  CHECK(row_key(TableKind::Table1, {"so(4,4)", "so(1,4)", "so(3,4)"}) ==
        row_key(TableKind::Table1, {"so(4,4)", "so(3,4)", "so(1,4)"}));
  CHECK(row_key(TableKind::Table1, {"so(4,4)", "so(1,4)", "so(3,4)"}) !=
        row_key(TableKind::Table1, {"so(3,4)", "so(1,4)", "g2(2)"}));
  CHECK(parse_table_kind("table2") == TableKind::Table2);
  CHECK_THROWS(parse_table_kind("table3"));
  CHECK(reference_rows(TableKind::Table1).size() == 6);
  CHECK(reference_rows(TableKind::Table2).size() == 9);
}

TEST_CASE("simple sweep at n = 1") {
  const auto& s = simple_n1();
  std::set<std::string> found;
  for (const auto& cc : s) {
    CHECK(cc.candidate.rule == 0);
    if (cc.standard()) found.insert(row_key(TableKind::Table1, cc.candidate.labels));
  }
  // Families of Table 1 at n = 1 collapse onto concrete keys; so(2,2) is not simple.
  CHECK(found.count(row_key(TableKind::Table1, {"su(2,2)", "sp(1,1)", "su(1,2)"})));
  CHECK(found.count(row_key(TableKind::Table1, {"so(4,4)", "so(3,4)", "sp(1,1)"})));
  CHECK(found.count(row_key(TableKind::Table1, {"so(4,4)", "so(1,4)", "so(3,4)"})));
  CHECK(found.count(row_key(TableKind::Table1, {"so(3,4)", "so(1,4)", "g2(2)"})));
  CHECK(found.count(row_key(TableKind::Table1, {"so(8,8)", "so(7,8)", "so(1,8)"})));
  CHECK(found.size() == 5);

  // Control ambients contribute no standard triple.
  for (const auto& cc : s)
    if (cc.standard()) {
      const auto& c = control_ambients();
      CHECK(std::find(c.begin(), c.end(), cc.candidate.labels[0]) == c.end());
    }
}

TEST_CASE("Case 1 with fixed algebras") {
  const Candidate c = case1_candidate("so(1,2)", "g2(2)");
  const auto v = verify_batch({c}, ClassifyOptions{});
  REQUIRE(v.size() == 1);
  CHECK(v[0].verdict.label == CaseLabel::Case1);
  CHECK(v[0].verdict.sum.dim_intersection == 0);
  CHECK(v[0].standard());
  std::size_t n = 0;
  for (const auto& k : case_candidates(1, {}, 1))
    if (k.labels == std::vector<std::string>{"so(1,2)", "g2(2)"}) ++n;
  CHECK(n == 1);
}

TEST_CASE("Cases 2 to 5 from the n = 1 sweep") {
  const auto& s = simple_n1();
  const std::size_t reps = 5, ff = free_factors().size();
  const auto c2 = case_candidates(2, s, 1);
  const auto c3 = case_candidates(3, s, 1);
  CHECK(c2.size() == reps * 2 * ff);
  CHECK(c3.size() == reps * (reps + 1));
  for (const auto& [which, cs] : {std::pair{2, c2}, std::pair{3, c3}}) {
    const auto v = verify_batch(cs, sweep_options());
    for (const auto& cc : v) {
      INFO(cc.verdict.triple);
      CHECK(cc.standard());
      CHECK(cc.verdict.label == (which == 2 ? CaseLabel::Case2 : CaseLabel::Case3));
    }
  }

  const auto c5 = case_candidates(5, s, 1);
  const auto v5 = verify_batch(c5, sweep_options());
  std::set<std::string> rows;
  for (const auto& cc : v5) {
    CHECK(cc.candidate.rule == 5);
    if (cc.standard()) {
      CHECK(cc.verdict.label == CaseLabel::Case5);
      rows.insert(row_key(TableKind::Table2, cc.candidate.labels));
    }
  }
  // The so(4,4) chain rows.
  CHECK(rows.count(row_key(TableKind::Table2, {"so(4,4)", "so(4,4)", "so(3,4)", "so(1,4)", "so(4,4)"})));
  CHECK(rows.count(row_key(TableKind::Table2, {"so(4,4)", "so(3,4)", "so(3,4)", "so(1,4)", "so(3,4)"})));
  CHECK(rows.count(row_key(TableKind::Table2, {"so(4,4)", "so(2,4)", "so(3,4)", "so(1,4)", "so(2,4)"})));
}

TEST_CASE("extra family is an honest Case 5 triple") {
  for (int n = 1; n <= 2; ++n) {
    const Verdict v = classify_triple(extra_family_instance(n));
    INFO(v.triple);
    CHECK(v.label == CaseLabel::Case5);
    CHECK(v.standard_form());
    const std::size_t so = (4 + 4 * n) * (3 + 4 * n) / 2, su = (2 * n + 2) * (2 * n + 2) - 1;
    CHECK(v.sum.dim_g == so + su);
    CHECK(v.sum.dim_h == (3 + 4 * n) * (2 + 4 * n) / 2 + (n + 1) * (2 * n + 3));
    CHECK(v.sum.dim_l == su);
    CHECK(v.sum.dim_intersection == std::size_t(n * (2 * n + 1)));
    REQUIRE(v.weyl);
    CHECK(v.weyl->proper);
  }
}

TEST_CASE("Table 1 at n = 1 reproduces the reference") {
  const TableDocument d = emit_table(TableKind::Table1, parallel_spec());
  CHECK(d.matches_reference());
  CHECK(keys_of(d) == reference_keys(TableKind::Table1));
  for (const auto& r : d.rows) {
    CHECK(r.in_reference);
    CHECK_FALSE(r.instances.empty());
  }
  CHECK(d.to_json()["matches_reference"] == true);
  CHECK(d.to_markdown().find("| so(8,8) | so(7,8) | so(1,8) |") != std::string::npos);
}

TEST_CASE("a disabled catalog entry aborts the table") {
  cat().disable("so(3,4):g2(2):g2in7");
  bool thrown = false;
  try {
    emit_table(TableKind::Table1, parallel_spec());
  } catch (const TableError& e) {
    thrown = true;
    const auto& d = e.diagnostics();
    CHECK(std::any_of(d.begin(), d.end(), [](const auto& s) {
      return s.find("missing row") != std::string::npos && s.find("g2(2)") != std::string::npos;
    }));
  }
  cat().enable_all();
  CHECK(thrown);
}

TEST_CASE("Table 2 at n = 1: reference rows plus one extra family") {
  const TableDocument d = emit_table(TableKind::Table2, parallel_spec());
  const auto ref = reference_keys(TableKind::Table2);
  std::set<std::string> matched, extra;
  for (const auto& r : d.rows) (r.in_reference ? matched : extra).insert(r.key);
  CHECK(matched == ref);
  const std::string fam = row_key(TableKind::Table2, {"so(4,4n)", "su(2,2n)", "so(3,4n)", "sp(1,n)", "su(2,2n)"});
  CHECK(extra == std::set<std::string>{fam});
  CHECK(d.extra == std::vector<std::string>{fam});
  CHECK_FALSE(d.matches_reference());
}
