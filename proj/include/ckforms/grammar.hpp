#pragma once

// Text form of triples used by the command line:
//
//   triple  := ambient ':' part '+' part
//   ambient := alg | alg 'x' alg
//   part    := '0' | item | item 'x' item | 'delta(' alg ',' iota ')'
//   item    := '0' | alg [ '@' variant ]
//   iota    := variant | catalog key "<g1>:<alg>:<variant>"
//
// Items without a variant are resolved against the catalog: the first
// combination (in catalog variant order) giving a standard form is used,
// otherwise the first available combination.

#include "ckforms/criteria.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace ckf {

class GrammarError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct ParsedTriple {
  Triple triple;
  std::vector<std::string> keys;  // catalog keys used, after resolution
  bool resolved = false;          // some variant was chosen by the resolver
};

ParsedTriple parse_triple(const std::string& text);

}  // namespace ckf
