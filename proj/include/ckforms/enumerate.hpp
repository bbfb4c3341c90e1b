#pragma once

// Generation of candidate triples from the classification's construction
// rules, batch verification, and emission of the two decomposition tables.

#include "ckforms/criteria.hpp"

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace ckf {

struct GenerationSpec {
  int max_n = 1;
  std::set<int> cases{1, 2, 3, 4, 5};
  std::uint64_t weyl_cutoff = 10'000'000;
  unsigned threads = 1;
};

/// Catalog keys "<ambient>:<sub>:<variant>" of the proper, noncompact, simple
/// subalgebras the catalog realizes inside `ambient`. Disabled entries are
/// skipped and reported in `notes`.
std::vector<std::string> subalgebra_keys(const std::string& ambient, std::vector<std::string>* notes = nullptr);

/// Parameterized ambients of the simple sweep ("su(2,2n)", ...) and the fixed ones.
const std::vector<std::string>& simple_ambient_templates();
/// Small catalog algebras swept as controls.
const std::vector<std::string>& control_ambients();
/// Simple factors used freely by Cases 1, 2 and 4.
const std::vector<std::string>& free_factors();

/// "so(4,4n)" at n = 2 is "so(4,8)". Names without n are returned unchanged.
std::string instantiate_label(const std::string& name, int n);
/// Inverse of instantiate_label for the second parameter: so(3,8) at n = 2 is "so(3,4n)".
std::string symbolize_label(const std::string& name, int n);
/// Whether `name` is an absolutely simple noncompact catalog algebra.
bool absolutely_simple(const std::string& name);

struct Candidate {
  Triple triple;
  int rule = 0;                     // 0: simple sweep; 1..5: construction of that case
  std::string origin;               // ambient template or free factors used
  std::vector<std::string> labels;  // rule 0: g, h, l; rule 5: g1, g2, g', g'', g2 (diagonal)
  std::vector<std::pair<std::string, int>> params;  // (template, n) the ambient instantiates
};

struct CheckedCandidate {
  Candidate candidate;
  Verdict verdict;
  bool standard() const { return verdict.standard_form() && verdict.label != CaseLabel::Reject; }
};

/// Simple decompositions of every ambient, templates instantiated for n <= n_bound.
std::vector<Candidate> simple_candidates(int n_bound, std::vector<std::string>* notes = nullptr);
/// Triples built by the rule of `which_case` from verified simple decompositions.
std::vector<Candidate> case_candidates(int which_case, const std::vector<CheckedCandidate>& simple, int max_n,
                                       std::vector<std::string>* notes = nullptr);
/// The single Case 1 triple (g1 (+) g2, g1 (+) 0, 0 (+) g2).
Candidate case1_candidate(const std::string& g1, const std::string& g2);

std::vector<CheckedCandidate> verify_batch(std::vector<Candidate> cs, const ClassifyOptions& opts);

/// All candidates of the selected cases (simple decompositions feeding Cases 2, 3 and 5 are verified on the way).
std::vector<Candidate> generate(const GenerationSpec& spec, std::vector<std::string>* notes = nullptr);

struct EnumerationReport {
  GenerationSpec spec;
  std::vector<CheckedCandidate> results;
  std::vector<std::string> notes;
  /// Candidates of rules 1-4 are standard by construction; any failure is an error.
  std::vector<std::string> failures() const;
  nlohmann::ordered_json to_json() const;
  std::string to_markdown() const;
};

EnumerationReport enumerate(const GenerationSpec& spec);

enum class TableKind { Table1, Table2 };
TableKind parse_table_kind(const std::string& s);

struct TableRow {
  std::vector<std::string> columns;
  std::string key;
  bool family = false;       // collapsed over n
  bool in_reference = false;
  std::vector<CheckedCandidate> instances;
  std::string oracles;       // which oracles certified every instance
};

struct TableDocument {
  TableKind which = TableKind::Table1;
  int max_n = 1;
  std::vector<std::string> column_names;
  std::vector<TableRow> rows;
  std::vector<std::string> extra;  // verified rows absent from the reference
  std::vector<std::string> notes;
  bool matches_reference() const { return extra.empty(); }
  nlohmann::ordered_json to_json() const;
  std::string to_markdown() const;
};

/// Reference rows of the two classification tables.
const std::vector<std::vector<std::string>>& reference_rows(TableKind which);
/// Order-insensitive key of a row (Table 2 rows of g (+) g are also swap-insensitive).
std::string row_key(TableKind which, const std::vector<std::string>& columns);

/// Raised when a reference row is not reproduced; carries the failing certificates.
class TableError : public std::runtime_error {
public:
  TableError(const std::string& what, std::vector<std::string> diagnostics);
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

private:
  std::vector<std::string> diagnostics_;
};

TableDocument emit_table(TableKind which, const GenerationSpec& spec);

}  // namespace ckf
