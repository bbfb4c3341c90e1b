#include "doctest.h"

#include "ckforms/embeddings.hpp"

using namespace ckf;

namespace {

Catalog& cat() { return default_catalog(); }

void check_certified(const Embedding& e, std::size_t image_dim) {
  CAPTURE(e.key);
  const EmbeddingCertificate c = certify(e);
  CHECK_MESSAGE(c.ok(), c.detail);
  CHECK(e.image().dim() == image_dim);
}

}  // namespace

TEST_CASE("catalog embeddings are certified") {
  check_certified(cat().lookup("so(2,4):so(1,4):block"), 10);
  check_certified(cat().lookup("su(2,2):sp(1,1):quaternionic"), 10);
  check_certified(cat().lookup("so(3,4):g2(2):g2in7"), 14);
  check_certified(cat().lookup("so(4,4):so(3,4):spin"), 21);
  check_certified(cat().lookup("so(4,4):so(1,4):spin"), 10);
  check_certified(cat().lookup("so(2,2):so(1,2):spin"), 3);
  check_certified(cat().lookup("so(2,4):su(1,2):complexstruct"), 8);
  check_certified(cat().lookup("so(4,8):sp(1,2):quaternionic"), 21);
  check_certified(cat().lookup("su(2,4):sp(1,2):quaternionic"), 21);
  check_certified(cat().lookup("su(2,4):su(1,4):block"), 24);
  check_certified(cat().lookup("so(3,4):so(1,4):block"), 10);
}

TEST_CASE("spin embedding of so(1,8) into so(8,8)") {
  const Embedding& e = cat().lookup("so(8,8):so(1,8):spin");
  check_certified(e, 36);
  CHECK(e.target->dim() == 120);
}

TEST_CASE("spin embedding data") {
  CHECK(spin_target(3, 4) == RealFormSpec{Family::SO, 4, 4});
  CHECK(spin_target(1, 4) == RealFormSpec{Family::SO, 4, 4});
  CHECK(spin_target(1, 8) == RealFormSpec{Family::SO, 8, 8});
  CHECK(spin_target(1, 2) == RealFormSpec{Family::SO, 2, 2});
}

TEST_CASE("block so(3,4) and spin so(1,4) span so(4,4)") {
  const Embedding& a = cat().lookup("so(4,4):so(3,4):block");
  const Embedding& b = cat().lookup("so(4,4):so(1,4):spin");
  CHECK(rank(stack(a.map.transpose(), b.map.transpose())) == 28);
  const Subspace i = intersect(a.image(), b.image());
  CHECK(i.dim() == 3);
  const AlgebraPtr g = a.target;
  const SubalgebraHandle h = span_closure(*g, i);
  CHECK(h.dim() == 3);
  const CompactnessCertificate c = is_compactly_embedded(*g, h);
  CHECK(c.compact);
  CHECK(c.signature == Signature{0, 3, 0});
}

TEST_CASE("spin so(3,4) and block so(1,4) span so(4,4) with compact intersection") {
  const Embedding& a = cat().lookup("so(4,4):so(3,4):spin");
  const Embedding& b = cat().lookup("so(4,4):so(1,4):block");
  CHECK(rank(stack(a.map.transpose(), b.map.transpose())) == 28);
  const Subspace i = intersect(a.image(), b.image());
  CHECK(i.dim() == 3);
  CHECK(is_compactly_embedded(*a.target, span_closure(*a.target, i)).compact);
}

TEST_CASE("nested blocks do not span") {
  const Embedding& a = cat().lookup("so(4,4):so(3,4):block");
  const Embedding& b = cat().lookup("so(4,4):so(1,4):block");
  CHECK(a.image().contains(b.image()));
}

TEST_CASE("sp(1,1) and su(1,2) inside su(2,2)") {
  const Embedding& a = cat().lookup("su(2,2):sp(1,1):quaternionic");
  const Embedding& b = cat().lookup("su(2,2):su(1,2):block");
  const Subspace i = intersect(a.image(), b.image());
  CHECK(i.dim() == 10 + 8 - 15);
  const SubalgebraHandle h = span_closure(*a.target, i);
  CHECK(h.dim() == 3);
  CHECK(is_compactly_embedded(*a.target, h).compact);
}

TEST_CASE("adapted split parts") {
  const Subspace v = adapted_split_part(cat().lookup("so(2,4):so(1,4):block"));
  CHECK(v.ambient_dim() == 2);
  CHECK(v.dim() == 1);
  const Subspace w = adapted_split_part(cat().lookup("so(3,4):g2(2):g2in7"));
  CHECK(w.ambient_dim() == 3);
  CHECK(w.dim() == 2);
  const ProductEmbedding d = diagonal_embedding(cat().lookup("so(4,4):so(2,4):block"), catalog_algebra("so(2,4)"));
  const Subspace dv = adapted_split_part(d.combined);
  CHECK(dv.ambient_dim() == 6);
  CHECK(dv.dim() == 2);
}

TEST_CASE("diagonal embeddings") {
  const AlgebraPtr so34 = catalog_algebra("so(3,4)");
  const ProductEmbedding d = diagonal_embedding(cat().lookup("so(3,4):so(3,4):identity"), so34);
  CHECK(d.mode == ProductMode::Diagonal);
  CHECK(d.combined.image().dim() == 21);
  CHECK(d.combined.target->dim() == 42);
  CHECK(certify(d.combined).ok());

  const ProductEmbedding d2 = diagonal_embedding(cat().lookup("so(4,4):so(2,4):block"), catalog_algebra("so(2,4)"));
  CHECK(d2.combined.image().dim() == 15);
  CHECK(certify(d2.combined).ok());
  const ProductEmbedding d3 = diagonal_embedding(cat().lookup("so(3,4):so(2,4):block"), catalog_algebra("so(2,4)"));
  CHECK(certify(d3.combined).ok());

  CHECK_THROWS_AS(diagonal_embedding(cat().lookup("so(4,4):so(2,4):block"), so34), std::invalid_argument);
}

TEST_CASE("product embeddings") {
  const AlgebraPtr g1 = catalog_algebra("so(4,4)"), g2 = catalog_algebra("so(2,4)");
  const ProductEmbedding p =
      product_embedding(cat().lookup("so(4,4):so(3,4):spin"), cat().lookup("so(2,4):so(1,4):block"), g1, g2);
  CHECK(p.mode == ProductMode::Product);
  CHECK(p.dim() == 31);
  CHECK(certify(p.combined).ok());
  CHECK(adapted_split_part(p.combined).dim() == 4);
  const ProductEmbedding z = zero_embedding(g1, g2);
  CHECK(z.dim() == 0);
  CHECK(certify(z.combined).ok());
}

TEST_CASE("unknown pairs are reported, never guessed") {
  CHECK_THROWS_AS(cat().lookup("so(2,4):so(3,4):block"), NotInCatalog);
  CHECK_THROWS_AS(cat().lookup("so(2,4):su(1,2):spin"), NotInCatalog);
  CHECK_THROWS_AS(cat().lookup("so(2,4):so(1,4):warp"), NotInCatalog);
  try {
    cat().lookup("so(2,4):so(1,4):warp");
  } catch (const NotInCatalog& e) {
    CHECK_FALSE(e.suggestions().empty());
    CHECK(e.suggestions().front() == "so(2,4):so(1,4):block");
  }
  CHECK(cat().default_variant("so(2,4)", "su(1,2)") == std::optional<std::string>("complexstruct"));
  CHECK(cat().default_variant("so(4,4)", "so(3,4)") == std::optional<std::string>("block"));
}

TEST_CASE("disabling an entry makes it unavailable") {
  Catalog local;
  CHECK(local.available("so(2,4)", "so(1,4)", "block"));
  local.disable("so(2,4):so(1,4):block");
  CHECK_FALSE(local.available("so(2,4)", "so(1,4)", "block"));
  local.enable_all();
  CHECK(local.available("so(2,4)", "so(1,4)", "block"));
}
