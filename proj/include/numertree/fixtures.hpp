#pragma once

#include <string>
#include <vector>

#include "numertree/gdlr.hpp"
#include "numertree/relations.hpp"
#include "numertree/sequences.hpp"

namespace numertree {

// Built-in relation sets. Names:
//   count11-h3       base 2, h=3, occurrences of "11" in binary (A014081);
//                    root type included so the typed representation compiles.
//   fibrows-h2       Zeckendorf system, h=2, nonzero entries per row of the
//                    Fibonacci-based generalized Pascal triangle (A282717).
//   sumdigits-h2     base 3/2, h=2, digit-sum decorations; coefficients lean
//                    on the deepest internal level where a choice exists.
//   sumdigits-h2-alt base 3/2, h=2, same sequence, the root-leaning
//                    coefficient variant. Both verify exactly.
//   squares-h3       base 3/2, h=3, the 27 relations of (n^2).
RelationSet builtin_relations(const std::string& name);
NumerationSystem builtin_relations_system(const std::string& name);
std::vector<std::string> builtin_relation_names();

// Decorated prefixes matching the extension fixtures (whole levels).
std::vector<Rat> builtin_prefix(const std::string& name);

// Seven-state automaton over base 3/2 whose output sequence is automatic
// but provably not regular: two families of unary chains carry decorations
// (1..., leaves 2) and (3..., leaves 5), so no linear rule covers both.
Dfao sepchains_dfao();

// Sequence spec grammar:
//   builtin:sumdigits | builtin:power:D | builtin:poly:c0,c1,... |
//   builtin:count:W | builtin:sepchains |
//   builtin:ext-count11 | builtin:ext-fibrows | builtin:ext-sumdigits |
//   bfile:PATH | dfao:PATH | ext:RELSPEC,PREFIX_BFILE | cumulative:SPEC
SeqPtr parse_sequence(const std::string& spec, const NumerationSystem& sys);

// Relation spec grammar: builtin:NAME | PATH (JSON file).
RelationSet parse_relations(const std::string& spec, const NumerationSystem& sys);

}  // namespace numertree
