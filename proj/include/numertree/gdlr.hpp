#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "numertree/relations.hpp"

namespace numertree {

// Graph-directed linear representation of an h-linear decorated tree.
// Evaluating x_n walks rep(n) once: each step multiplies the current
// coding vector (decorations of a height-(h-1) prefix, indexed by D) by a
// step matrix; a characteristic output row reads off the final decoration.
//
// Step selection comes in two modes:
//   window: rational bases; the sliding h-letter window picks the matrix
//           (the window fixes the residue type of the node it hangs from).
//   typed:  regular systems and integer bases; the pair (current type,
//           next letter) picks the matrix, with the type advanced through
//           a finite transition table.
class Gdlr {
 public:
  enum class Mode { Window, Typed };

  struct StepKey {
    int type = -1;      // typed mode
    Digit digit = -1;   // typed mode
    Word window;        // window mode
    bool operator<(const StepKey& o) const {
      if (type != o.type) return type < o.type;
      if (digit != o.digit) return digit < o.digit;
      return window < o.window;
    }
  };

  Mode mode;
  int h = 0;
  std::string system;
  std::vector<Word> index_words;  // D in radix order, epsilon first
  RatVector initial;              // coding vector of the height-(h-1) prefix
  std::map<StepKey, RatMatrix> steps;
  std::map<std::pair<int, Digit>, int> type_transition;  // typed mode
  int root_type = -1;                                    // typed mode
  std::map<Word, RatVector> outputs;  // suffix of length <= h-1 -> 0/1 row

  std::size_t index_of(const Word& w) const;  // throws when absent

  nlohmann::ordered_json to_json(const NumerationSystem& sys) const;
  static Gdlr from_json(const nlohmann::ordered_json& j, const NumerationSystem& sys);
};

// Compiles a verified relation set; throws when verify() reports violations
// or a needed (type, leaf) relation is missing.
Gdlr build_gdlr(const NumerationSystem& sys, const RelationSet& relset, const TreePrefix& tree);

struct EvalResult {
  Rat value;
  std::size_t matrix_products = 0;
};

EvalResult eval_word_counted(const Gdlr& g, const NumerationSystem& sys, const Word& w);
Rat eval_word(const Gdlr& g, const NumerationSystem& sys, const Word& w);
Rat eval(const Gdlr& g, const NumerationSystem& sys, const Int& n);

}  // namespace numertree
