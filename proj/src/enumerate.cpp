#include "ckforms/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <regex>
#include <sstream>
#include <thread>

namespace ckf {

namespace {

Catalog& cat() { return default_catalog(); }

std::string family_prefix(const std::string& name) { return name.substr(0, name.find('(')); }

const Embedding& identity_of(const std::string& g) { return cat().lookup(g, g, "identity"); }

std::string source_name(const std::string& key) {
  const auto first = key.find(':'), last = key.rfind(':');
  return key.substr(first + 1, last - first - 1);
}

std::size_t algebra_dim(const std::string& name) { return parse_real_form(name).dim(); }

// Spinor targets of the spin entries, computed once.
const std::vector<std::pair<RealFormSpec, RealFormSpec>>& spin_entries() {
  static const std::vector<std::pair<RealFormSpec, RealFormSpec>> entries = [] {
    std::vector<std::pair<RealFormSpec, RealFormSpec>> out;
    std::vector<RealFormSpec> sources;
    for (int q = 2; q <= 8; ++q) sources.push_back({Family::SO, 1, q});
    sources.push_back({Family::SO, 3, 4});
    for (const auto& s : sources) {
      try {
        out.push_back({s, spin_target(s.p, s.q)});
      } catch (const std::exception&) {
      }
    }
    return out;
  }();
  return entries;
}

bool semisimple_noncompact(const RealFormSpec& s) {
  switch (s.family) {
    case Family::SO: return s.p >= 1 && s.p + s.q >= 3;
    case Family::SU: return s.p >= 1 && s.p + s.q >= 2;
    case Family::SP: return s.p >= 1;
    case Family::G2: return true;
  }
  return false;
}

int parse_int(const std::string& s) { return s.empty() ? 1 : std::stoi(s); }

}  // namespace

bool absolutely_simple(const std::string& name) {
  const RealFormSpec s = parse_real_form(name);
  if (!semisimple_noncompact(s)) return false;
  if (s.family == Family::SO) return !(s.p == 1 && s.q == 3) && !(s.p == 2 && s.q == 2);
  return true;
}

std::vector<std::string> subalgebra_keys(const std::string& ambient, std::vector<std::string>* notes) {
  const RealFormSpec a = parse_real_form(ambient);
  std::vector<std::pair<RealFormSpec, std::string>> pot;
  auto add = [&](const RealFormSpec& s, const char* variant) {
    if (!(s == a) && semisimple_noncompact(s)) pot.push_back({s, variant});
  };
  switch (a.family) {
    case Family::SO:
      for (int p = 1; p <= a.p; ++p)
        for (int q = p; q <= a.q; ++q) add({Family::SO, p, q}, "block");
      if (a.p % 2 == 0 && a.q % 2 == 0) add({Family::SU, a.p / 2, a.q / 2}, "complexstruct");
      if (a.p % 4 == 0 && a.q % 4 == 0) add({Family::SP, a.p / 4, a.q / 4}, "quaternionic");
      if (a == RealFormSpec{Family::SO, 3, 4}) add({Family::G2, 0, 0}, "g2in7");
      for (const auto& [s, t] : spin_entries())
        if (t == a) add(s, "spin");
      break;
    case Family::SU:
      for (int p = 1; p <= a.p; ++p)
        for (int q = p; q <= a.q; ++q) add({Family::SU, p, q}, "block");
      if (a.p % 2 == 0 && a.q % 2 == 0) add({Family::SP, a.p / 2, a.q / 2}, "quaternionic");
      break;
    case Family::SP:
      for (int p = 1; p <= a.p; ++p)
        for (int q = p; q <= a.q; ++q) add({Family::SP, p, q}, "block");
      break;
    case Family::G2: break;
  }
  std::vector<std::string> keys;
  for (const auto& [s, variant] : pot) {
    const std::string key = Catalog::make_key(a.name(), s.name(), variant);
    if (cat().disabled(key)) {
      if (notes) notes->push_back("catalog entry disabled: " + key);
    } else if (cat().available(a.name(), s.name(), variant)) {
      keys.push_back(key);
    }
  }
  return keys;
}

const std::vector<std::string>& simple_ambient_templates() {
  static const std::vector<std::string> t{"su(2,2n)", "so(2,2n)", "so(4,4n)", "so(4,4)", "so(3,4)", "so(8,8)"};
  return t;
}

const std::vector<std::string>& control_ambients() {
  static const std::vector<std::string> c{"so(1,2)", "so(1,4)", "so(2,3)", "so(1,5)", "so(3,3)", "so(1,6)",
                                          "so(2,5)", "so(3,5)", "so(1,7)", "su(1,2)", "su(1,3)",
                                          "sp(1,1)", "sp(1,2)", "g2(2)"};
  return c;
}

const std::vector<std::string>& free_factors() {
  static const std::vector<std::string> f{"so(1,2)", "so(2,4)", "g2(2)"};
  return f;
}

std::string instantiate_label(const std::string& name, int n) {
  static const std::regex re(R"(^([a-z0-9]+)\((\d+),(\d*)n\)$)");
  std::smatch m;
  if (!std::regex_match(name, m, re)) return name;
  return m[1].str() + "(" + m[2].str() + "," + std::to_string(parse_int(m[3].str()) * n) + ")";
}

std::string symbolize_label(const std::string& name, int n) {
  const RealFormSpec s = parse_real_form(name);
  if (s.family == Family::G2 || n <= 0 || s.q % n != 0) return name;
  const int k = s.q / n;
  return family_prefix(name) + "(" + std::to_string(s.p) + "," + (k == 1 ? "" : std::to_string(k)) + "n)";
}

// ---------------------------------------------------------------------------
// Generation

std::vector<Candidate> simple_candidates(int n_bound, std::vector<std::string>* notes) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::pair<std::string, int>>> params;
  std::map<std::string, std::string> origin;
  auto note_ambient = [&](const std::string& name, const std::string& from, std::optional<std::pair<std::string, int>> p) {
    if (!params.count(name)) {
      order.push_back(name);
      params[name];
      origin[name] = from;
    }
    if (p) params[name].push_back(*p);
  };
  for (const auto& t : simple_ambient_templates()) {
    if (t.find('n') == std::string::npos) {
      note_ambient(t, t, std::pair{t, 0});
      continue;
    }
    for (int n = 1; n <= n_bound; ++n) {
      const std::string name = instantiate_label(t, n);
      if (absolutely_simple(name)) note_ambient(name, t, std::pair{t, n});
    }
  }
  for (const auto& c : control_ambients()) note_ambient(parse_real_form(c).name(), "control", std::nullopt);

  std::vector<Candidate> out;
  for (const auto& g : order) {
    const std::size_t dg = algebra_dim(g);
    const std::vector<std::string> keys = subalgebra_keys(g, notes);
    for (std::size_t i = 0; i < keys.size(); ++i)
      for (std::size_t j = i + 1; j < keys.size(); ++j) {
        const Embedding &a = cat().lookup(keys[i]), &b = cat().lookup(keys[j]);
        if (a.source->dim() + b.source->dim() < dg) continue;
        Candidate c;
        c.triple = make_triple(simple_embedding(a), simple_embedding(b));
        c.rule = 0;
        c.origin = origin[g];
        c.labels = {g, a.source->name(), b.source->name()};
        c.params = params[g];
        out.push_back(std::move(c));
      }
  }
  return out;
}

Candidate case1_candidate(const std::string& g1, const std::string& g2) {
  const AlgebraPtr a = catalog_algebra(g1), b = catalog_algebra(g2);
  Candidate c;
  c.triple = make_triple(product_embedding(identity_of(a->name()), std::nullopt, a, b),
                         product_embedding(std::nullopt, identity_of(b->name()), a, b));
  c.rule = 1;
  c.origin = a->name() + " (+) " + b->name();
  c.labels = {a->name(), b->name()};
  return c;
}

namespace {

// One verified instance per Table 1 key, in sweep order.
std::vector<const CheckedCandidate*> representatives(const std::vector<CheckedCandidate>& simple, int max_n) {
  std::vector<const CheckedCandidate*> reps;
  std::set<std::string> seen;
  for (const auto& cc : simple) {
    if (!cc.standard()) continue;
    const auto& ps = cc.candidate.params;
    const bool in_bounds =
        ps.empty() || std::any_of(ps.begin(), ps.end(), [&](const auto& p) { return p.second <= max_n; });
    if (!in_bounds) continue;
    if (seen.insert(row_key(TableKind::Table1, cc.candidate.labels)).second) reps.push_back(&cc);
  }
  return reps;
}

const Embedding& part(const CheckedCandidate& cc, int which) {
  return which == 0 ? *cc.candidate.triple.h.left : *cc.candidate.triple.l.left;
}

}  // namespace

std::vector<Candidate> case_candidates(int which_case, const std::vector<CheckedCandidate>& simple, int max_n,
                                       std::vector<std::string>* notes) {
  std::vector<Candidate> out;
  const std::vector<std::string>& ff = free_factors();
  switch (which_case) {
    case 1:
      for (std::size_t i = 0; i < ff.size(); ++i)
        for (std::size_t j = i; j < ff.size(); ++j) out.push_back(case1_candidate(ff[i], ff[j]));
      break;
    case 2:
      for (const CheckedCandidate* r : representatives(simple, max_n))
        for (int o = 0; o < 2; ++o)
          for (const auto& f : ff) {
            const AlgebraPtr g1 = r->candidate.triple.g1, g2 = catalog_algebra(f);
            Candidate c;
            c.triple = make_triple(product_embedding(part(*r, o), std::nullopt, g1, g2),
                                   product_embedding(part(*r, 1 - o), identity_of(g2->name()), g1, g2));
            c.rule = 2;
            c.origin = r->candidate.triple.name + " with " + g2->name();
            c.labels = {g1->name(), g2->name()};
            out.push_back(std::move(c));
          }
      break;
    case 3: {
      const auto reps = representatives(simple, max_n);
      for (std::size_t i = 0; i < reps.size(); ++i)
        for (std::size_t j = i; j < reps.size(); ++j)
          for (int o = 0; o < 2; ++o) {
            const AlgebraPtr g1 = reps[i]->candidate.triple.g1, g2 = reps[j]->candidate.triple.g1;
            Candidate c;
            c.triple = make_triple(product_embedding(part(*reps[i], 0), part(*reps[j], o), g1, g2),
                                   product_embedding(part(*reps[i], 1), part(*reps[j], 1 - o), g1, g2));
            c.rule = 3;
            c.origin = reps[i]->candidate.triple.name + " with " + reps[j]->candidate.triple.name;
            c.labels = {g1->name(), g2->name()};
            out.push_back(std::move(c));
          }
      break;
    }
    case 4: {
      std::vector<std::string> ambients = ff;
      for (const CheckedCandidate* r : representatives(simple, max_n)) {
        const std::string g = r->candidate.triple.g1->name();
        // Case 4 stays on the smaller catalog ambients; so(8,8) would dominate the run time.
        if (algebra_dim(g) <= 66 && std::find(ambients.begin(), ambients.end(), g) == ambients.end())
          ambients.push_back(g);
      }
      for (const auto& g : ambients)
        for (const auto& key : subalgebra_keys(g, notes)) {
          const Embedding& iota = cat().lookup(key);
          const AlgebraPtr g1 = iota.target, g2 = iota.source;
          Candidate c;
          c.triple = make_triple(product_embedding(identity_of(g1->name()), std::nullopt, g1, g2),
                                 diagonal_embedding(iota, g2));
          c.rule = 4;
          c.origin = key;
          c.labels = {g1->name(), g2->name()};
          out.push_back(std::move(c));
        }
      break;
    }
    case 5: {
      std::map<std::string, std::vector<std::string>> keys_of;
      auto keys = [&](const std::string& g) -> const std::vector<std::string>& {
        auto it = keys_of.find(g);
        if (it == keys_of.end()) it = keys_of.emplace(g, subalgebra_keys(g, notes)).first;
        return it->second;
      };
      for (const auto& cc : simple) {
        if (!cc.standard()) continue;
        const auto& ps = cc.candidate.params;
        if (!ps.empty() && std::none_of(ps.begin(), ps.end(), [&](const auto& p) { return p.second <= max_n; }))
          continue;
        const AlgebraPtr g1 = cc.candidate.triple.g1;
        for (int o = 0; o < 2; ++o) {
          const Embedding &a = part(cc, o), &b = part(cc, 1 - o);
          // Chains g'' < g2 <= g1: the diagonal via iota, g'' inside g2 via j.
          std::vector<std::string> iotas{Catalog::make_key(g1->name(), g1->name(), "identity")};
          for (const auto& k : keys(g1->name())) iotas.push_back(k);
          for (const auto& ik : iotas) {
            const Embedding& iota = cat().lookup(ik);
            const AlgebraPtr g2 = iota.source;
            if (g2->dim() <= b.source->dim()) continue;
            std::vector<const Embedding*> js;
            if (ik == iotas.front()) {
              js.push_back(&b);
            } else {
              for (const auto& jk : keys(g2->name()))
                if (source_name(jk) == b.source->name()) js.push_back(&cat().lookup(jk));
            }
            for (const Embedding* j : js) {
              Candidate c;
              c.triple = make_triple(product_embedding(a, *j, g1, g2), diagonal_embedding(iota, g2));
              c.rule = 5;
              c.origin = cc.candidate.triple.name + " via " + ik;
              c.labels = {g1->name(), g2->name(), a.source->name(), b.source->name(), g2->name()};
              c.params = cc.candidate.params;
              out.push_back(std::move(c));
            }
          }
        }
      }
      break;
    }
    default: throw std::invalid_argument("case_candidates: no case " + std::to_string(which_case));
  }
  return out;
}

std::vector<CheckedCandidate> verify_batch(std::vector<Candidate> cs, const ClassifyOptions& opts) {
  std::vector<CheckedCandidate> out(cs.size());
  ClassifyOptions inner = opts;
  const unsigned workers = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(cs.size())));
  if (workers > 1) inner.threads = 1;
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](unsigned w) {
    try {
      for (std::size_t i; (i = next.fetch_add(1)) < cs.size();) {
        out[i].verdict = classify_triple(cs[i].triple, inner);
        out[i].candidate = std::move(cs[i]);
      }
    } catch (...) {
      errors[w] = std::current_exception();
      next = cs.size();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

namespace {

ClassifyOptions classify_options(const GenerationSpec& spec) {
  ClassifyOptions o;
  o.weyl_cutoff = spec.weyl_cutoff;
  o.threads = spec.threads;
  o.weyl_without_sum = false;
  return o;
}

std::vector<Candidate> generate_with(const GenerationSpec& spec, const std::vector<CheckedCandidate>& simple,
                                     std::vector<std::string>* notes) {
  std::vector<Candidate> out;
  for (int k : spec.cases) {
    std::vector<Candidate> c = case_candidates(k, simple, spec.max_n, notes);
    std::move(c.begin(), c.end(), std::back_inserter(out));
  }
  return out;
}

void unique_notes(std::vector<std::string>& notes) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (auto& n : notes)
    if (seen.insert(n).second) out.push_back(std::move(n));
  notes = std::move(out);
}

}  // namespace

std::vector<Candidate> generate(const GenerationSpec& spec, std::vector<std::string>* notes) {
  if (spec.max_n < 1) throw std::invalid_argument("generate: max_n must be at least 1");
  std::vector<CheckedCandidate> simple;
  if (spec.cases.count(2) || spec.cases.count(3) || spec.cases.count(4) || spec.cases.count(5))
    simple = verify_batch(simple_candidates(spec.max_n, notes), classify_options(spec));
  return generate_with(spec, simple, notes);
}

EnumerationReport enumerate(const GenerationSpec& spec) {
  EnumerationReport r;
  r.spec = spec;
  r.results = verify_batch(generate(spec, &r.notes), classify_options(spec));
  unique_notes(r.notes);
  return r;
}

namespace {

bool oracles_disagree(const Verdict& v) { return v.weyl && v.sum.holds && v.weyl->proper != v.compact.compact; }

nlohmann::ordered_json weyl_summary(const Verdict& v) {
  if (!v.weyl) return {{"skipped", v.weyl_note}};
  return {{"proper", v.weyl->proper}, {"group_order", v.weyl->group_order}};
}

std::string dims_text(const Verdict& v) {
  std::ostringstream s;
  s << "(" << v.sum.dim_g << ", " << v.sum.dim_h << ", " << v.sum.dim_l << ", " << v.sum.dim_intersection << ")";
  return s.str();
}

std::string weyl_text(const Verdict& v) {
  if (!v.weyl) return "skipped";
  return std::string(v.weyl->proper ? "proper" : "not proper") + ", |W| = " + std::to_string(v.weyl->group_order);
}

nlohmann::ordered_json instance_json(const CheckedCandidate& cc) {
  nlohmann::ordered_json j;
  int n = 0;
  for (const auto& p : cc.candidate.params) n = n ? n : p.second;
  if (n) j["n"] = n;
  j["triple"] = cc.verdict.triple;
  j["case"] = to_string(cc.verdict.label);
  j["standard_form"] = cc.verdict.standard_form();
  j["dims"] = {{"g", cc.verdict.sum.dim_g},
               {"h", cc.verdict.sum.dim_h},
               {"l", cc.verdict.sum.dim_l},
               {"intersection", cc.verdict.sum.dim_intersection}};
  j["weyl"] = weyl_summary(cc.verdict);
  return j;
}

}  // namespace

std::vector<std::string> EnumerationReport::failures() const {
  std::vector<std::string> out;
  for (const auto& cc : results) {
    if (cc.candidate.rule >= 1 && cc.candidate.rule <= 4 && !cc.standard())
      out.push_back("rule " + std::to_string(cc.candidate.rule) + ": " + cc.verdict.triple + ": " + cc.verdict.reason);
    if (oracles_disagree(cc.verdict)) out.push_back("oracle disagreement: " + cc.verdict.triple);
  }
  return out;
}

nlohmann::ordered_json EnumerationReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["max_n"] = spec.max_n;
  j["cases"] = spec.cases;
  j["weyl_cutoff"] = spec.weyl_cutoff;
  std::size_t standard = 0;
  nlohmann::ordered_json triples = nlohmann::ordered_json::array();
  for (const auto& cc : results) {
    standard += cc.standard();
    nlohmann::ordered_json t = instance_json(cc);
    t["rule"] = cc.candidate.rule;
    t["origin"] = cc.candidate.origin;
    if (!cc.verdict.reason.empty()) t["reason"] = cc.verdict.reason;
    triples.push_back(std::move(t));
  }
  j["generated"] = results.size();
  j["standard"] = standard;
  j["triples"] = std::move(triples);
  j["failures"] = failures();
  j["notes"] = notes;
  return j;
}

std::string EnumerationReport::to_markdown() const {
  std::ostringstream s;
  s << "| rule | triple | dims | verdict | Weyl oracle |\n|---|---|---|---|---|\n";
  for (const auto& cc : results)
    s << "| " << cc.candidate.rule << " | `" << cc.verdict.triple << "` | " << dims_text(cc.verdict) << " | "
      << to_string(cc.verdict.label) << " | " << weyl_text(cc.verdict) << " |\n";
  for (const auto& f : failures()) s << "\nFailure: " << f << "\n";
  for (const auto& n : notes) s << "\nNote: " << n << "\n";
  return s.str();
}

// ---------------------------------------------------------------------------
// Tables

TableKind parse_table_kind(const std::string& s) {
  if (s == "table1") return TableKind::Table1;
  if (s == "table2") return TableKind::Table2;
  throw std::invalid_argument("unknown table '" + s + "' (expected table1 or table2)");
}

TableError::TableError(const std::string& what, std::vector<std::string> diagnostics)
    : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}

const std::vector<std::vector<std::string>>& reference_rows(TableKind which) {
  // Columns: g, g', g'' for the first table; g1, g2, g', g'', diagonal g2 for the second.
  static const std::vector<std::vector<std::string>> t1{
      {"su(2,2n)", "sp(1,n)", "su(1,2n)"}, {"so(2,2n)", "su(1,n)", "so(1,2n)"}, {"so(4,4n)", "so(3,4n)", "sp(1,n)"},
      {"so(4,4)", "so(1,4)", "so(3,4)"},   {"so(3,4)", "so(1,4)", "g2(2)"},     {"so(8,8)", "so(7,8)", "so(1,8)"}};
  static const std::vector<std::vector<std::string>> t2{
      {"su(2,2n)", "su(2,2n)", "sp(1,n)", "su(1,2n)", "su(2,2n)"},
      {"so(2,2n)", "so(2,2n)", "su(1,n)", "so(1,2n)", "so(2,2n)"},
      {"so(4,4n)", "so(4,4n)", "so(3,4n)", "sp(1,n)", "so(4,4n)"},
      {"so(4,4)", "so(4,4)", "so(3,4)", "so(1,4)", "so(4,4)"},
      {"so(4,4)", "so(3,4)", "so(3,4)", "so(1,4)", "so(3,4)"},
      {"so(4,4)", "so(2,4)", "so(3,4)", "so(1,4)", "so(2,4)"},
      {"so(3,4)", "so(3,4)", "g2(2)", "so(1,4)", "so(3,4)"},
      {"so(3,4)", "so(2,4)", "g2(2)", "so(1,4)", "so(2,4)"},
      {"so(8,8)", "so(8,8)", "so(7,8)", "so(1,8)", "so(8,8)"}};
  return which == TableKind::Table1 ? t1 : t2;
}

std::string row_key(TableKind which, const std::vector<std::string>& c) {
  if (which == TableKind::Table1) return c[0] + "|" + std::min(c[1], c[2]) + "|" + std::max(c[1], c[2]);
  const std::string k = c[0] + "+" + c[1] + "|" + c[2] + "+" + c[3] + "|" + c[4];
  if (c[0] != c[1]) return k;
  return std::min(k, c[0] + "+" + c[1] + "|" + c[3] + "+" + c[2] + "|" + c[4]);
}

namespace {

std::vector<std::string> display_columns(TableKind which, const std::vector<std::string>& c) {
  if (which == TableKind::Table1) return c;
  return {c[0] + " ⊕ " + c[1], c[2] + " ⊕ " + c[3], c[4]};
}

std::vector<std::string> instantiate_all(const std::vector<std::string>& c, int n) {
  std::vector<std::string> out;
  for (const auto& x : c) out.push_back(instantiate_label(x, n));
  return out;
}

std::vector<std::string> symbolize_all(const std::vector<std::string>& c, int n) {
  std::vector<std::string> out;
  for (const auto& x : c) out.push_back(symbolize_label(x, n));
  return out;
}

std::string oracle_text(const std::vector<CheckedCandidate>& inst) {
  const bool all_weyl = std::all_of(inst.begin(), inst.end(), [](const auto& cc) { return cc.verdict.weyl.has_value(); });
  if (all_weyl) return "sum, compact intersection, Weyl";
  return "sum, compact intersection (Weyl group above cutoff)";
}

}  // namespace

TableDocument emit_table(TableKind which, const GenerationSpec& spec) {
  if (spec.max_n < 1) throw std::invalid_argument("emit_table: max_n must be at least 1");
  TableDocument doc;
  doc.which = which;
  doc.max_n = spec.max_n;
  doc.column_names = which == TableKind::Table1
                         ? std::vector<std::string>{"g", "g'", "g''"}
                         : std::vector<std::string>{"g = g1 ⊕ g2", "product subalgebra g' ⊕ g''",
                                                    "diagonal subalgebra g2"};
  // Families need two data points to be told apart from fixed rows.
  const int bound = std::max(spec.max_n, 2);
  const ClassifyOptions opts = classify_options(spec);
  std::vector<CheckedCandidate> checked = verify_batch(simple_candidates(bound, &doc.notes), opts);
  if (which == TableKind::Table2) {
    GenerationSpec s5 = spec;
    s5.max_n = bound;
    s5.cases = {5};
    checked = verify_batch(generate_with(s5, checked, &doc.notes), opts);
  }
  unique_notes(doc.notes);

  const CaseLabel expected = which == TableKind::Table1 ? CaseLabel::SimpleDecomposition : CaseLabel::Case5;
  auto counts = [&](const CheckedCandidate& cc) { return cc.standard() && cc.verdict.label == expected; };
  std::vector<std::string> diagnostics;
  std::set<std::string> verified;
  for (const auto& cc : checked) {
    if (oracles_disagree(cc.verdict))
      diagnostics.push_back("oracle disagreement on " + cc.verdict.triple + ": Weyl says " +
                            (cc.verdict.weyl->proper ? "proper" : "not proper") + ", compactness says " +
                            (cc.verdict.compact.compact ? "compact" : "noncompact"));
    if (counts(cc)) verified.insert(row_key(which, cc.candidate.labels));
  }
  if (!diagnostics.empty()) throw TableError("verification oracles disagree", diagnostics);

  // Families: symbolic rows whose every instantiation in range is verified.
  struct Building {
    std::vector<std::string> columns;
    bool family = false;
    std::vector<const CheckedCandidate*> inst;
    std::vector<int> ns;
  };
  std::map<std::string, Building> rows;
  std::vector<std::string> order;
  auto consistent = [&](const std::string& tmpl, const std::vector<std::string>& sym) {
    for (int n = 1; n <= bound; ++n) {
      if (!absolutely_simple(instantiate_label(tmpl, n))) continue;
      if (!verified.count(row_key(which, instantiate_all(sym, n)))) return false;
    }
    return true;
  };
  std::vector<const CheckedCandidate*> uncovered;
  for (const auto& cc : checked) {
    if (!counts(cc)) continue;
    bool covered = false;
    for (const auto& [tmpl, n] : cc.candidate.params) {
      if (n == 0) continue;
      const std::vector<std::string> sym = symbolize_all(cc.candidate.labels, n);
      if (!consistent(tmpl, sym)) continue;
      covered = true;
      const std::string key = row_key(which, sym);
      auto [it, fresh] = rows.try_emplace(key);
      if (fresh) {
        order.push_back(key);
        it->second.columns = sym;
        it->second.family = true;
      }
      it->second.inst.push_back(&cc);
      it->second.ns.push_back(n);
    }
    if (!covered) uncovered.push_back(&cc);
  }
  for (const CheckedCandidate* cc : uncovered) {
    const auto& ps = cc->candidate.params;
    const bool in_bounds = ps.empty() || std::any_of(ps.begin(), ps.end(), [&](const auto& p) {
                             return p.second == 0 || p.second <= spec.max_n;
                           });
    if (!in_bounds) continue;
    const std::string key = row_key(which, cc->candidate.labels);
    auto [it, fresh] = rows.try_emplace(key);
    if (fresh) {
      order.push_back(key);
      it->second.columns = cc->candidate.labels;
    }
    it->second.inst.push_back(cc);
    it->second.ns.push_back(0);
  }

  // Match against the reference, in its order and orientation.
  std::set<std::string> matched;
  for (const auto& ref : reference_rows(which)) {
    const std::string key = row_key(which, ref);
    auto it = rows.find(key);
    if (it == rows.end()) {
      std::vector<std::string> why;
      for (const auto& cc : checked) {
        bool hit = row_key(which, cc.candidate.labels) == key;
        for (const auto& [tmpl, n] : cc.candidate.params)
          hit = hit || (n && row_key(which, symbolize_all(cc.candidate.labels, n)) == key);
        if (hit) why.push_back(cc.verdict.triple + ": " + (cc.verdict.reason.empty() ? to_string(cc.verdict.label)
                                                                                        : cc.verdict.reason));
      }
      if (why.empty()) why.push_back("no candidate generated");
      std::string row = key;
      for (const auto& w : why) diagnostics.push_back("missing row " + row + ": " + w);
      continue;
    }
    matched.insert(key);
    TableRow r;
    r.columns = display_columns(which, ref);
    r.key = key;
    r.family = it->second.family;
    r.in_reference = true;
    for (std::size_t i = 0; i < it->second.inst.size(); ++i) {
      const int n = it->second.ns[i];
      if (!r.family || n <= spec.max_n) r.instances.push_back(*it->second.inst[i]);
    }
    if (r.instances.empty()) {
      // Smallest in-scope instance of a family whose n = 1 member is not simple.
      std::size_t best = 0;
      for (std::size_t i = 1; i < it->second.inst.size(); ++i)
        if (it->second.ns[i] < it->second.ns[best]) best = i;
      r.instances.push_back(*it->second.inst[best]);
    }
    r.oracles = oracle_text(r.instances);
    doc.rows.push_back(std::move(r));
  }
  if (!diagnostics.empty())
    throw TableError("reference rows not reproduced: " + std::to_string(diagnostics.size()) + " diagnostic(s)",
                     diagnostics);

  std::vector<std::string> extra_keys;
  for (const auto& key : order)
    if (!matched.count(key)) extra_keys.push_back(key);
  std::sort(extra_keys.begin(), extra_keys.end());
  for (const auto& key : extra_keys) {
    const Building& b = rows.at(key);
    TableRow r;
    r.columns = display_columns(which, b.columns);
    r.key = key;
    r.family = b.family;
    for (std::size_t i = 0; i < b.inst.size(); ++i)
      if (!r.family || b.ns[i] <= spec.max_n) r.instances.push_back(*b.inst[i]);
    if (r.instances.empty()) r.instances.push_back(*b.inst.front());
    r.oracles = oracle_text(r.instances);
    doc.extra.push_back(key);
    doc.rows.push_back(std::move(r));
  }
  return doc;
}

nlohmann::ordered_json TableDocument::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["table"] = which == TableKind::Table1 ? "table1" : "table2";
  j["max_n"] = max_n;
  j["columns"] = column_names;
  nlohmann::ordered_json rs = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json x;
    x["columns"] = r.columns;
    x["family"] = r.family;
    x["in_reference"] = r.in_reference;
    x["oracles"] = r.oracles;
    nlohmann::ordered_json inst = nlohmann::ordered_json::array();
    for (const auto& cc : r.instances) inst.push_back(instance_json(cc));
    x["instances"] = std::move(inst);
    rs.push_back(std::move(x));
  }
  j["rows"] = std::move(rs);
  j["matches_reference"] = matches_reference();
  j["extra"] = extra;
  j["notes"] = notes;
  return j;
}

std::string TableDocument::to_markdown() const {
  std::ostringstream s;
  s << "| " << column_names[0] << " | " << column_names[1] << " | " << column_names[2]
    << " | instances | oracles | reference |\n|---|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    std::string inst;
    for (const auto& cc : r.instances) {
      int n = 0;
      for (const auto& p : cc.candidate.params) n = n ? n : p.second;
      const std::string item = r.family && n ? "n=" + std::to_string(n) : dims_text(cc.verdict);
      if (inst.find(item) == std::string::npos) inst += (inst.empty() ? "" : ", ") + item;
    }
    s << "| " << r.columns[0] << " | " << r.columns[1] << " | " << r.columns[2] << " | " << inst << " | " << r.oracles
      << " | " << (r.in_reference ? "yes" : "no") << " |\n";
  }
  if (!extra.empty()) {
    s << "\nVerified rows absent from the reference table:\n";
    for (const auto& e : extra) s << "- " << e << "\n";
  }
  return s.str();
}

}  // namespace ckf
