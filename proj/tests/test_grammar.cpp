#include "doctest.h"

#include "ckforms/grammar.hpp"

using namespace ckf;

TEST_CASE("simple ambient with resolution") {
  const ParsedTriple p = parse_triple("so(4,4):so(3,4)+so(1,4)");
  CHECK(p.resolved);
  CHECK(p.keys.size() == 2);
  const SumCheck s = check_sum(p.triple);
  CHECK(s.holds);
  CHECK(s.dim_g == 28);
  CHECK(s.dim_h == 21);
  CHECK(s.dim_l == 10);
  CHECK(s.dim_intersection == 3);
  CHECK(check_compact_intersection(p.triple).compact);
}

TEST_CASE("explicit variants are kept") {
  const ParsedTriple p = parse_triple(" so(3,4) : g2(2)@g2in7 + so(1,4)@block ");
  CHECK_FALSE(p.resolved);
  CHECK(p.keys == std::vector<std::string>{"so(3,4):g2(2):g2in7", "so(3,4):so(1,4):block"});
  CHECK(p.triple.name == "so(3,4):g2(2)@g2in7+so(1,4)@block");
}

TEST_CASE("names round-trip") {
  for (const char* t : {"so(4,4):so(3,4)@block+so(1,4)@spin", "su(2,2):sp(1,1)@quaternionic+su(1,2)@block"}) {
    const ParsedTriple p = parse_triple(t);
    CHECK(p.triple.name == t);
    CHECK(parse_triple(p.triple.name).triple.name == p.triple.name);
  }
  const ParsedTriple d = parse_triple("so(4,4)xso(2,4):so(3,4)@spinxso(1,4)@block+delta(so(2,4),block)");
  CHECK(parse_triple(d.triple.name).triple.name == d.triple.name);
  const Verdict v = classify_triple(d.triple);
  CHECK(v.label == CaseLabel::Case5);
  CHECK(v.sum.dim_g == 43);
  CHECK(v.sum.dim_intersection == 3);

  const ParsedTriple r = parse_triple("so(4,4)xso(2,4):so(3,4)xso(1,4)+delta(so(2,4),block)");
  CHECK(r.resolved);
  CHECK(r.triple.name == d.triple.name);
  CHECK(classify_triple(parse_triple("so(4,4)xso(2,4):so(3,4)@blockxso(1,4)@block+delta(so(2,4),block)").triple).label ==
        CaseLabel::Reject);
}

TEST_CASE("products, zeros and diagonals") {
  const ParsedTriple c1 = parse_triple("so(1,2)xg2(2):so(1,2)@identityx0+0xg2(2)@identity");
  CHECK(classify_triple(c1.triple).label == CaseLabel::Case1);

  const ParsedTriple z = parse_triple("so(3,4):0+so(3,4)@identity");
  CHECK(classify_triple(z.triple).label == CaseLabel::Trivial);

  const ParsedTriple fk = parse_triple("so(4,4)xso(3,4):so(3,4)xso(1,4)+delta(so(3,4),so(4,4):so(3,4):block)");
  CHECK(fk.keys.back() == "so(4,4):so(3,4):block");

  CHECK(parse_triple("so(2,4)xso(2,4):0xso(2,4)+delta(so(2,4),identity)").keys.back() == "so(2,4):so(2,4):identity");
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(parse_triple("so(4,4)"), GrammarError);
  CHECK_THROWS_AS(parse_triple("so(4,4):so(3,4)"), GrammarError);
  CHECK_THROWS_AS(parse_triple("so(4,4):so(3,4)+so(1,4)+so(1,2)"), GrammarError);
  CHECK_THROWS_AS(parse_triple("so(4,4:so(3,4)+so(1,4)"), GrammarError);
  CHECK_THROWS_AS(parse_triple("so(4,4):so(3,4)xso(1,2)+so(1,4)"), GrammarError);
  CHECK_THROWS_AS(parse_triple("so(4,4):delta(so(3,4),block)+so(1,4)"), GrammarError);
  CHECK_THROWS_AS(parse_triple("so(4,4)xso(3,4):so(3,4)+so(1,4)"), GrammarError);
  CHECK_THROWS_AS(parse_triple("so(4,4)xso(3,4):0+delta(so(2,4),block)"), GrammarError);
  CHECK_THROWS_AS(parse_triple("so(4,4):so(3,4)@+so(1,4)"), GrammarError);
  CHECK_THROWS_AS(parse_triple("sx(4,4):so(3,4)+so(1,4)"), GrammarError);
  CHECK_THROWS_AS(parse_triple("so(4,4):so(3,5)+so(1,4)"), NotInCatalog);
  CHECK_THROWS_AS(parse_triple("so(4,4):so(3,4)@nope+so(1,4)"), NotInCatalog);
  try {
    parse_triple("so(4,4):so(3,4)@blok+so(1,4)");
    FAIL("expected NotInCatalog");
  } catch (const NotInCatalog& e) {
    CHECK_FALSE(e.suggestions().empty());
  }
}
