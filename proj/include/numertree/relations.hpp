#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "numertree/linalg.hpp"
#include "numertree/tree.hpp"

namespace numertree {

// One linear rule: in every occurrence of the type, the decoration at the
// height-h leaf word equals the coefficient combination of the decorations
// at internal words (|v| < h) of the same occurrence.
struct Relation {
  int type_id = -1;
  Word leaf;
  std::vector<std::pair<Word, Rat>> coeffs;  // radix-ordered, nonzero entries

  Rat coeff(const Word& v) const;
};

enum class RootPolicy { Exclude, Include };

struct RelationSet {
  int h = 0;
  std::string system;
  RootPolicy root_policy = RootPolicy::Exclude;
  struct TypeInfo {
    int id = -1;
    std::vector<Word> domain;  // radix order, prefix-closed, contains epsilon
    bool is_root = false;
  };
  std::vector<TypeInfo> types;
  std::vector<Relation> relations;

  const TypeInfo* find_type(int id) const;
  const TypeInfo* find_type_by_domain(const std::vector<Word>& domain) const;
  const Relation* find_relation(int type_id, const Word& leaf) const;
  // Remap of this set's type ids onto a tree classification, matching by
  // domain equality. Entries are -1 for tree types this set does not cover.
  std::vector<int> map_onto(const TypeTable& table) const;

  nlohmann::ordered_json to_json(const NumerationSystem& sys) const;
  static RelationSet from_json(const nlohmann::ordered_json& j, const NumerationSystem& sys);
};

// Breadth-first occurrence rows of one type: internal decorations, then leaf
// decorations, both in breadth-first order within the factor.
struct OccurrenceRows {
  std::vector<std::uint64_t> roots;
  std::vector<Word> internal_words;
  std::vector<Word> leaf_words;
  RatMatrix internals;  // |roots| x |internal_words|
  RatMatrix leaves;     // |roots| x |leaf_words|
};

OccurrenceRows occurrences(const TreePrefix& tree, const TypeTable& table, int type_id);
OccurrenceRows occurrences(const TreePrefix& tree, int h, int type_id);

struct GuessOptions {
  // Minimum occurrence rows per type before fitting; default 2*i_R + 2.
  std::optional<std::uint64_t> min_occurrences;
  // Fraction of rows held back to confirm a fitted relation.
  double holdout_fraction = 0.25;
  bool include_root = false;
};

enum class CellStatus { Solved, Underdetermined, Inconsistent, Insufficient };

std::string to_string(CellStatus s);

struct GuessCell {
  int type_id = -1;
  Word leaf;
  CellStatus status = CellStatus::Insufficient;
  // Solved / Underdetermined: the canonical candidate coefficients.
  std::vector<std::pair<Word, Rat>> coeffs;
  int free_dim = 0;            // free variables of the fitted system
  bool holdout_confirmed = false;
  std::uint64_t rows_used = 0;
  std::uint64_t rows_needed = 0;  // Insufficient only
  // Inconsistent: two occurrence roots whose rows already clash.
  std::optional<std::pair<std::uint64_t, std::uint64_t>> witness;
};

struct GuessReport {
  int h = 0;
  struct TypeStats {
    int type_id;
    bool is_root;
    std::uint64_t occurrence_count;
    std::size_t internal_count;  // i_R
    std::size_t leaf_count;      // k_R
  };
  std::vector<TypeStats> type_stats;
  std::vector<GuessCell> cells;

  bool all_solved() const;
  bool any_inconsistent() const;
  nlohmann::ordered_json to_json(const NumerationSystem& sys) const;
};

std::pair<RelationSet, GuessReport> guess(const TreePrefix& tree, int h,
                                          const GuessOptions& opts = {});

struct Violation {
  std::uint64_t occurrence_root;
  Word leaf;
  Rat expected;  // from the relation
  Rat actual;    // decoration in the tree
};

// Exhaustively checks every relation on every occurrence the tree can see.
std::vector<Violation> verify(const TreePrefix& tree, const RelationSet& relset);

// Height h -> h+1: every height-(h+1) leaf a.u lies in the height-h factor
// of the child reached by a, so its relation is that child-type relation
// with every word prefixed by a.
RelationSet lift(const RelationSet& relset, const TreePrefix& tree);

// Regenerates a decorated tree from the first levels of `prefix` plus the
// relations: a node at level m >= first computed level takes the relation of
// its ancestor at level m-h. The prefix must decorate levels 0..h when the
// root type is not covered (0..h-1 otherwise).
TreePrefix extend(const TreePrefix& prefix, const RelationSet& relset, int target_levels,
                  const BuildOptions& opts = {});

nlohmann::ordered_json violations_to_json(const std::vector<Violation>& violations,
                                          const NumerationSystem& sys);

}  // namespace numertree
