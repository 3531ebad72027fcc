#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "numertree/dfa.hpp"
#include "numertree/rational.hpp"
#include "numertree/words.hpp"

namespace numertree {

// Periodic child-digit words of a rational-base tree: word r lists the
// digits a with p*r + a divisible by q, ascending. Exactly one word
// (the one for r = 0) contains the digit 0.
struct Signature {
  std::vector<Word> words;  // indexed by residue mod q
};

// Integer base k, rational base p/q, or a regular abstract numeration
// system given by a prefix-closed DFA. Immutable; operations are pure.
class NumerationSystem {
 public:
  enum class Kind { IntegerBase, RationalBase, Regular };

  static NumerationSystem integer(int k);
  static NumerationSystem rational(int p, int q);
  static NumerationSystem regular(Dfa dfa);
  static NumerationSystem fibonacci();
  // "2" | "3/2" | "fib" | "dfa:FILE"
  static NumerationSystem parse(const std::string& spec);

  Kind kind() const { return kind_; }
  bool is_rational() const { return kind_ == Kind::RationalBase; }
  bool is_regular() const { return kind_ == Kind::Regular; }
  int p() const { return p_; }
  int q() const { return q_; }
  const Dfa& dfa() const { return *dfa_; }
  // Canonical DFA view: integer bases expose their 2-state automaton.
  // Rational bases have none (the language is not regular).
  const Dfa& automaton() const;

  const std::string& spec() const { return spec_; }
  std::vector<Digit> alphabet() const;
  bool compact_words() const;  // alphabet small enough for 1-char digits

  Word rep(const Int& n) const;
  Int val(const Word& w) const;  // throws WordError at the first bad position
  bool is_valid(const Word& w) const;

  // First `count` words of the language in radix order.
  std::vector<Word> enumerate(std::uint64_t count) const;

  // Rational base only.
  std::vector<Digit> children_digits(const Int& value) const;
  Signature signature() const;
  // Sufficient criterion: every signature word has length >= 2.
  bool is_expanding() const;

  std::string word_str(const Word& w) const { return numertree::word_str(w, compact_words()); }
  Word word_parse(const std::string& s) const;

 private:
  NumerationSystem() = default;

  Word rep_regular(const Int& n) const;
  Int val_regular(const Word& w) const;
  // counts[len][state] = number of words of that length readable from the
  // state. Grown on demand under the cache lock; semantically invisible.
  struct CountCache {
    std::mutex mutex;
    std::vector<std::vector<Int>> counts;
  };
  const Int& word_count(std::size_t len, int state) const;
  void ensure_counts(std::size_t len) const;

  Kind kind_ = Kind::IntegerBase;
  int p_ = 2, q_ = 1;  // integer base stored as p_ with q_ = 1
  std::shared_ptr<const Dfa> dfa_;
  std::string spec_;
  std::shared_ptr<CountCache> cache_;  // shared across copies
};

}  // namespace numertree
