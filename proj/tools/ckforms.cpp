#include "CLI11.hpp"
#include "ckforms/cartanproj.hpp"
#include "ckforms/enumerate.hpp"
#include "ckforms/grammar.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace ckf;

namespace {

constexpr int kOk = 0, kOutcome = 1, kUsage = 2, kInternal = 3;

struct Output {
  std::string format = "json";
  bool json = false;
  bool md = false;
  std::string path;

  std::string kind() const { return json ? "json" : md ? "md" : format; }
};

void add_output(CLI::App* app, Output& o) {
  auto* f = app->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "md"}));
  auto* j = app->add_flag("--json", o.json, "Same as --format json");
  auto* m = app->add_flag("--md", o.md, "Same as --format md");
  f->excludes(j)->excludes(m);
  j->excludes(m);
  app->add_option("--out", o.path, "Write the document to this file instead of stdout");
}

void emit(const Output& o, const std::string& doc) {
  if (o.path.empty()) {
    std::cout << doc;
    return;
  }
  std::ofstream f(o.path, std::ios::binary);
  f << doc;
  if (!f) throw std::runtime_error("cannot write " + o.path);
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

std::string verdict_markdown(const Verdict& v) {
  std::ostringstream s;
  s << "## `" << v.triple << "`\n\n";
  s << "- dims (g, h, l, h ∩ l): (" << v.sum.dim_g << ", " << v.sum.dim_h << ", " << v.sum.dim_l << ", "
    << v.sum.dim_intersection << ")\n";
  s << "- g = h + l: " << (v.sum.holds ? "yes" : "no") << "\n";
  s << "- h ∩ l compactly embedded: " << (v.compact.compact ? "yes" : "no") << ", signature "
    << to_string(v.compact.signature) << "\n";
  if (v.weyl)
    s << "- Weyl oracle: " << (v.weyl->proper ? "proper" : "not proper") << " (|W| = " << v.weyl->group_order << ")\n";
  else
    s << "- Weyl oracle: skipped (" << v.weyl_note << ")\n";
  s << "- case: " << to_string(v.label) << "\n";
  if (!v.reason.empty()) s << "- reason: " << v.reason << "\n";
  for (const auto& e : v.evidence) s << "- evidence: " << e << "\n";
  return s.str();
}

nlohmann::ordered_json algebra_info(const std::string& name) {
  const std::vector<std::string> parts = [&] {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : name) {
      depth += c == '(' ? 1 : c == ')' ? -1 : 0;
      if (c == 'x' && depth == 0) {
        out.push_back(cur);
        cur.clear();
      } else if (!std::isspace(static_cast<unsigned char>(c))) {
        cur.push_back(c);
      }
    }
    out.push_back(cur);
    return out;
  }();
  if (parts.size() > 2) throw std::invalid_argument("at most two factors: " + name);
  AlgebraPtr g = catalog_algebra(parts[0]);
  if (parts.size() == 2) g = catalog_sum(g, catalog_algebra(parts[1]));
  const SplitData sd = split_data(*g);
  const WeylGroup w(sd);
  const std::size_t dk = compact_part(*g).dim();
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["algebra"] = g->name();
  j["dim"] = g->dim();
  j["dim_k"] = dk;
  j["dim_p"] = g->dim() - dk;
  j["real_rank"] = sd.rank();
  j["restricted_roots"] = sd.root_type();
  const Signature s = signature(g->killing());
  j["killing_signature"] = {s.positive, s.negative, s.null};
  j["weyl_order"] = w.order();
  if (parts.size() == 1) j["subalgebras"] = subalgebra_keys(g->name());
  return j;
}

std::string info_markdown(const nlohmann::ordered_json& j) {
  std::ostringstream s;
  s << "## " << j["algebra"].get<std::string>() << "\n\n";
  s << "- dim " << j["dim"] << " (k: " << j["dim_k"] << ", p: " << j["dim_p"] << ")\n";
  s << "- real rank " << j["real_rank"] << ", restricted roots " << j["restricted_roots"].get<std::string>() << "\n";
  s << "- Killing signature " << j["killing_signature"].dump() << "\n";
  s << "- |W| = " << j["weyl_order"] << "\n";
  if (j.contains("subalgebras"))
    for (const auto& k : j["subalgebras"]) s << "- catalog subalgebra `" << k.get<std::string>() << "`\n";
  return s.str();
}

std::string gap_markdown(const GapReport& r) {
  const auto j = r.to_json();
  std::ostringstream s;
  s << "| field | value |\n|---|---|\n";
  for (const auto& [k, v] : j.items()) s << "| " << k << " | " << v.dump() << " |\n";
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decompositions g = h + l of real Lie algebras and compact Clifford-Klein forms", "ckforms"};
  app.require_subcommand(1);

  std::string triple;
  std::uint64_t weyl_cutoff = 10'000'000;
  unsigned threads = 1;
  int max_n = 1;
  std::vector<int> cases{1, 2, 3, 4, 5};
  std::string which, space, algebra;
  std::uint64_t samples = 10'000, seed = 0;
  Output out;

  auto common = [&](CLI::App* sub, bool weyl) {
    add_output(sub, out);
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 256u));
    if (weyl) sub->add_option("--weyl-cutoff", weyl_cutoff, "Largest Weyl group the oracle enumerates");
  };

  CLI::App* verify = app.add_subcommand("verify", "Verify one triple");
  verify->add_option("--triple", triple, "Triple, e.g. \"so(4,4):so(3,4)+so(1,4)\"")->required();
  common(verify, true);

  CLI::App* enumerate_cmd = app.add_subcommand("enumerate", "Generate and verify triples of the selected cases");
  enumerate_cmd->add_option("--max-n", max_n, "Bound on n for the parameterized families")->check(CLI::Range(1, 8));
  enumerate_cmd->add_option("--cases", cases, "Cases to generate")->delimiter(',')->check(CLI::Range(1, 5));
  common(enumerate_cmd, true);

  CLI::App* table = app.add_subcommand("table", "Emit a decomposition table and compare it with the reference");
  table->add_option("--which", which, "table1 or table2")->required()->check(CLI::IsMember({"table1", "table2"}));
  table->add_option("--max-n", max_n, "Bound on n for the parameterized families")->check(CLI::Range(1, 8));
  common(table, true);

  CLI::App* gap = app.add_subcommand("gap", "Sample Cartan projections and fit the gap constants");
  gap->add_option("--space", space, "Homogeneous space")->required()->check(CLI::IsMember(gap_space_keys()));
  gap->add_option("--samples", samples, "Number of samples")->check(CLI::PositiveNumber);
  gap->add_option("--seed", seed, "Seed of the sample streams")->required();
  common(gap, false);

  CLI::App* info = app.add_subcommand("info", "Structure data of a catalog algebra");
  info->add_option("--algebra", algebra, "Algebra, e.g. so(3,4) or so(4,4)xso(2,4)")->required();
  common(info, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const bool md = out.kind() == "md";
  try {
    if (*verify) {
      const ParsedTriple p = parse_triple(triple);
      ClassifyOptions o;
      o.weyl_cutoff = weyl_cutoff;
      o.threads = threads;
      const Verdict v = classify_triple(p.triple, o);
      emit(out, md ? verdict_markdown(v) : dump(v.to_json()));
      return v.label == CaseLabel::Reject ? kOutcome : kOk;
    }
    GenerationSpec spec;
    spec.max_n = max_n;
    spec.cases = std::set<int>(cases.begin(), cases.end());
    spec.weyl_cutoff = weyl_cutoff;
    spec.threads = threads;
    if (*enumerate_cmd) {
      const EnumerationReport r = enumerate(spec);
      emit(out, md ? r.to_markdown() : dump(r.to_json()));
      for (const auto& f : r.failures()) std::cerr << "failure: " << f << "\n";
      return r.failures().empty() ? kOk : kOutcome;
    }
    if (*table) {
      const TableDocument d = emit_table(parse_table_kind(which), spec);
      emit(out, md ? d.to_markdown() : dump(d.to_json()));
      for (const auto& e : d.extra) std::cerr << "mismatch: verified row not in the reference table: " << e << "\n";
      return d.matches_reference() ? kOk : kOutcome;
    }
    if (*gap) {
      const GapReport r = gap_experiment(space, samples, seed, threads);
      emit(out, md ? gap_markdown(r) : dump(r.to_json()));
      return kOk;
    }
    if (*info) {
      const auto j = algebra_info(algebra);
      emit(out, md ? info_markdown(j) : dump(j));
      return kOk;
    }
  } catch (const NotInCatalog& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (!e.suggestions().empty()) {
      std::cerr << "did you mean:\n";
      for (const auto& s : e.suggestions()) std::cerr << "  " << s << "\n";
    }
    return kUsage;
  } catch (const TableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& d : e.diagnostics()) std::cerr << "  " << d << "\n";
    return kOutcome;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
