#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "numertree/words.hpp"

namespace numertree {

// Deterministic finite automaton with a partial transition map, all states
// accepting. Recognizes a prefix-closed language. Trim = every state
// reachable (co-accessibility is trivial when every state accepts).
struct Dfa {
  std::vector<Digit> alphabet;         // ascending
  int initial = 0;
  std::vector<std::vector<int>> next;  // [state][alphabet index] -> state or -1

  int states() const { return static_cast<int>(next.size()); }
  int alphabet_index(Digit d) const;   // -1 when the digit is not in the alphabet
  int step(int state, Digit d) const;  // -1 when undefined
  bool accepts_prefixes(const Word& w) const;  // full run stays defined

  // Checks determinism bounds and reachability of every state.
  void validate() const;

  nlohmann::ordered_json to_json() const;
  static Dfa from_json(const nlohmann::ordered_json& j);
};

// Language-equivalent minimal trim DFA, states renumbered breadth-first from
// the initial state following alphabet order.
Dfa minimize(const Dfa& dfa);

}  // namespace numertree
