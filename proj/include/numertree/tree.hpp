#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "numertree/numeration.hpp"
#include "numertree/seqsource.hpp"

namespace numertree {

struct BuildOptions {
  std::uint64_t node_budget = 5'000'000;
};

// Finitely many levels of the numeration tree, nodes in breadth-first order.
// Node i represents the (i+1)-st word of the language, so its value is i.
// Children of a node are contiguous and ordered by edge digit.
class TreePrefix {
 public:
  static constexpr std::uint64_t npos = std::numeric_limits<std::uint64_t>::max();

  const NumerationSystem& system() const { return sys_; }
  int levels() const { return static_cast<int>(level_offset_.size()) - 2; }
  std::uint64_t size() const { return parent_.size(); }

  std::uint64_t level_begin(int l) const { return level_offset_[l]; }
  std::uint64_t level_end(int l) const { return level_offset_[l + 1]; }
  int level_of(std::uint64_t node) const;

  std::uint64_t parent(std::uint64_t node) const { return parent_[node]; }
  Digit edge(std::uint64_t node) const { return edge_[node]; }
  std::uint64_t first_child(std::uint64_t node) const { return first_child_[node]; }
  std::uint32_t child_count(std::uint64_t node) const { return child_count_[node]; }
  std::uint64_t child_by_digit(std::uint64_t node, Digit d) const;  // npos if absent
  std::uint64_t descend(std::uint64_t node, const Word& path) const;  // npos if absent

  Word word_of(std::uint64_t node) const;
  std::uint64_t node_at(const Word& w) const;  // npos if absent

  bool decorated() const { return decorated_; }
  const Rat& decoration(std::uint64_t node) const { return decoration_[node]; }
  void set_decoration(std::uint64_t node, Rat r) { decoration_[node] = std::move(r); }
  void mark_decorated() { decorated_ = true; }

 private:
  explicit TreePrefix(NumerationSystem sys) : sys_(std::move(sys)) {}
  friend TreePrefix build_tree(const NumerationSystem&, const SequenceSource*, int,
                               const BuildOptions&);
  NumerationSystem sys_;
  std::vector<std::uint64_t> parent_;
  std::vector<Digit> edge_;
  std::vector<std::uint64_t> first_child_;
  std::vector<std::uint32_t> child_count_;
  std::vector<std::uint64_t> level_offset_;  // levels()+2 entries, sentinel at end
  std::vector<Rat> decoration_;
  bool decorated_ = false;
};

// Builds levels 0..levels. With a sequence the decorations are x_0, x_1, ...
// in breadth-first order; with nullptr the skeleton is left undecorated.
TreePrefix build_tree(const NumerationSystem& sys, const SequenceSource* seq, int levels,
                      const BuildOptions& opts = {});
inline TreePrefix build_tree(const NumerationSystem& sys, const SequenceSource& seq, int levels,
                             const BuildOptions& opts = {}) {
  return build_tree(sys, &seq, levels, opts);
}

// Number of levels a full prefix of at least `count` nodes needs.
int levels_for_count(const NumerationSystem& sys, std::uint64_t count);

// Height-h factor rooted at a node: relative words (radix order, which is
// also breadth-first order) and their decorations.
struct Factor {
  std::uint64_t root;
  int height;
  std::vector<Word> domain;
  std::vector<Rat> decorations;
  bool operator==(const Factor& o) const {
    return domain == o.domain && decorations == o.decorations;
  }
};

Factor factor(const TreePrefix& tree, std::uint64_t node, int h);
// Domain only; cheaper and defined for undecorated trees as well.
std::vector<Word> factor_domain(const TreePrefix& tree, std::uint64_t node, int h);

struct TypeTable {
  int h;
  struct Type {
    std::vector<Word> domain;
    bool is_root_type;  // assigned to the root and nowhere else
  };
  std::vector<Type> types;          // ids in order of first appearance
  std::vector<int> assignment;      // node -> type id, -1 beyond classified range
  std::uint64_t classified_end;     // nodes [0, classified_end) have ids
  int type_of(std::uint64_t node) const { return assignment[node]; }
};

// Assigns type ids by undecorated-domain equality to every node whose full
// height-h factor fits in the built levels.
TypeTable classify(const TreePrefix& tree, int h);

int count_types(const TreePrefix& tree, int h);

// Rational bases: the residue class R mod q^h fixes the undecorated factor
// domain of every non-root node with value = R (mod q^h).
std::vector<Word> residue_domain(const NumerationSystem& sys, long long residue, int h);
// Every word of A_p^h below a non-root node belongs to exactly one residue
// domain; maps each of the p^h window words to that residue.
std::map<Word, long long> window_type_map(const NumerationSystem& sys, int h);

std::string render_dot(const TreePrefix& tree);
std::string render_text(const TreePrefix& tree);

}  // namespace numertree
