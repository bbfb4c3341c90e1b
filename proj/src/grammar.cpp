#include "ckforms/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace ckf {

namespace {

std::string strip(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

// Splits at every depth-0 occurrence of `sep`.
std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out(1);
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth < 0) throw GrammarError("unbalanced parentheses in '" + s + "'");
    if (c == sep && depth == 0) {
      out.emplace_back();
      continue;
    }
    out.back().push_back(c);
  }
  if (depth != 0) throw GrammarError("unbalanced parentheses in '" + s + "'");
  return out;
}

std::string algebra_name(const std::string& s) {
  try {
    return parse_real_form(s).name();
  } catch (const ParseError& e) {
    throw GrammarError(std::string("bad algebra '") + s + "': " + e.what());
  }
}

// An embedding choice: fixed variant, or open with the available variants.
struct Slot {
  std::string ambient, sub;
  std::vector<std::string> variants;
};

struct Item {
  bool zero = true;
  std::size_t slot = 0;
};

struct Part {
  enum Kind { Zero, Simple, Product, Diagonal } kind = Zero;
  Item left, right;
  std::size_t iota = 0;  // slot of the diagonal's embedding
};

class Parser {
public:
  std::vector<Slot> slots;

  std::size_t add_slot(const std::string& ambient, const std::string& sub, const std::string& variant) {
    Slot s{ambient, sub, {}};
    Catalog& cat = default_catalog();
    if (!variant.empty()) {
      cat.lookup(Catalog::make_key(ambient, sub, variant));
      s.variants = {variant};
    } else {
      for (const auto& v : Catalog::variants())
        if (cat.available(ambient, sub, v)) s.variants.push_back(v);
      if (s.variants.empty()) cat.lookup(Catalog::make_key(ambient, sub, "block"));  // throws with suggestions
    }
    slots.push_back(std::move(s));
    return slots.size() - 1;
  }

  Item item(const std::string& text, const std::string& ambient) {
    if (text == "0") return {};
    const auto at = text.find('@');
    const std::string sub = algebra_name(text.substr(0, at));
    const std::string variant = at == std::string::npos ? "" : text.substr(at + 1);
    if (at != std::string::npos && variant.empty()) throw GrammarError("empty variant in '" + text + "'");
    return {false, add_slot(ambient, sub, variant)};
  }

  Part part(const std::string& text, const std::string& g1, const std::string& g2) {
    Part p;
    if (text.empty()) throw GrammarError("empty subalgebra");
    if (text == "0") return p;
    if (text.rfind("delta(", 0) == 0) {
      if (g2.empty()) throw GrammarError("delta(...) needs a product ambient");
      if (text.back() != ')') throw GrammarError("malformed diagonal '" + text + "'");
      const std::vector<std::string> args = split_top(text.substr(6, text.size() - 7), ',');
      if (args.size() != 2) throw GrammarError("delta(<alg>,<iota>) takes two arguments: '" + text + "'");
      if (algebra_name(args[0]) != g2)
        throw GrammarError("the diagonal of " + g1 + " x " + g2 + " is a copy of " + g2 + ", not " + args[0]);
      std::string variant = args[1];
      if (variant.find(':') != std::string::npos) {
        const auto first = variant.find(':'), last = variant.rfind(':');
        if (first == last || algebra_name(variant.substr(0, first)) != g1 ||
            algebra_name(variant.substr(first + 1, last - first - 1)) != g2)
          throw GrammarError("iota key '" + variant + "' is not an embedding " + g2 + " -> " + g1);
        variant = variant.substr(last + 1);
      }
      p.kind = Part::Diagonal;
      p.iota = add_slot(g1, g2, variant);
      return p;
    }
    const std::vector<std::string> items = split_top(text, 'x');
    if (g2.empty()) {
      if (items.size() != 1) throw GrammarError("product subalgebra '" + text + "' in a simple ambient");
      p.kind = Part::Simple;
      p.left = item(items[0], g1);
      return p;
    }
    if (items.size() != 2) throw GrammarError("a subalgebra of " + g1 + " x " + g2 + " is written a x b or delta(...)");
    p.kind = Part::Product;
    p.left = item(items[0], g1);
    p.right = item(items[1], g2);
    return p;
  }
};

}  // namespace

ParsedTriple parse_triple(const std::string& raw) {
  const std::string text = strip(raw);
  const std::vector<std::string> top = split_top(text, ':');
  if (top.size() < 2) throw GrammarError("expected <g>:<h>+<l>, got '" + raw + "'");
  std::string rest = top[1];
  for (std::size_t i = 2; i < top.size(); ++i) rest += ":" + top[i];
  const std::vector<std::string> amb = split_top(top[0], 'x');
  if (amb.size() > 2) throw GrammarError("ambients have at most two factors: '" + top[0] + "'");
  const std::string g1 = algebra_name(amb[0]), g2 = amb.size() == 2 ? algebra_name(amb[1]) : "";
  const std::vector<std::string> hl = split_top(rest, '+');
  if (hl.size() != 2) throw GrammarError("expected exactly one '+' between h and l in '" + raw + "'");

  Parser ps;
  const Part h = ps.part(hl[0], g1, g2), l = ps.part(hl[1], g1, g2);
  const AlgebraPtr a1 = catalog_algebra(g1), a2 = g2.empty() ? nullptr : catalog_algebra(g2);

  std::vector<std::size_t> choice(ps.slots.size(), 0);
  auto embedding = [&](std::size_t slot) -> const Embedding& {
    const Slot& s = ps.slots[slot];
    return default_catalog().lookup(Catalog::make_key(s.ambient, s.sub, s.variants[choice[slot]]));
  };
  auto opt = [&](const Item& it) -> std::optional<Embedding> {
    if (it.zero) return std::nullopt;
    return embedding(it.slot);
  };
  auto build = [&](const Part& p) {
    switch (p.kind) {
      case Part::Zero: return zero_embedding(a1, a2);
      case Part::Simple: return simple_embedding(embedding(p.left.slot));
      case Part::Product: return product_embedding(opt(p.left), opt(p.right), a1, a2);
      case Part::Diagonal: return diagonal_embedding(embedding(p.iota), a2);
    }
    return zero_embedding(a1, a2);
  };
  auto current = [&] {
    ParsedTriple r;
    r.triple = make_triple(build(h), build(l));
    for (std::size_t i = 0; i < ps.slots.size(); ++i)
      r.keys.push_back(Catalog::make_key(ps.slots[i].ambient, ps.slots[i].sub, ps.slots[i].variants[choice[i]]));
    return r;
  };

  const bool open = std::any_of(ps.slots.begin(), ps.slots.end(), [](const Slot& s) { return s.variants.size() > 1; });
  if (!open) return current();
  // Odometer over the open slots, first slot slowest.
  std::optional<ParsedTriple> first;
  for (;;) {
    ParsedTriple r = current();
    r.resolved = true;
    if (check_sum(r.triple).holds && check_compact_intersection(r.triple).compact) return r;
    if (!first) first = std::move(r);
    std::size_t i = ps.slots.size();
    while (i > 0) {
      --i;
      if (++choice[i] < ps.slots[i].variants.size()) break;
      choice[i] = 0;
      if (i == 0) return *first;
    }
  }
}

}  // namespace ckf
