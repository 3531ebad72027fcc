#pragma once

#include <iosfwd>
#include <vector>

#include "json.hpp"
#include "numertree/relations.hpp"
#include "numertree/seqsource.hpp"

namespace numertree {

// Deterministic finite automaton with output: reading rep(n) most
// significant digit first yields term n.
struct Dfao {
  std::vector<Digit> alphabet;
  int initial = 0;
  std::vector<std::vector<int>> next;  // [state][alphabet index] -> state or -1
  std::vector<Rat> output;             // per state

  int states() const { return static_cast<int>(next.size()); }
  nlohmann::ordered_json to_json() const;
  static Dfao from_json(const nlohmann::ordered_json& j);
};

Int sum_digits(const NumerationSystem& sys, const Int& n);
// Overlapping occurrences of `pattern` in rep(n).
Int count_factor(const NumerationSystem& sys, const Word& pattern, const Int& n);
Rat dfao_run(const Dfao& machine, const NumerationSystem& sys, const Int& n);
// Sum of the decorations along the path to rep(n), endpoints included.
Rat cumulative(const NumerationSystem& sys, const SequenceSource& seq, const Int& n);
Int power_seq(int d, const Int& n);
Rat poly_seq(const std::vector<Rat>& coeffs, const Int& n);  // coeffs[i] on n^i

SeqPtr make_sum_digits(const NumerationSystem& sys);
SeqPtr make_count_factor(const NumerationSystem& sys, Word pattern);
SeqPtr make_power(int d);
SeqPtr make_poly(std::vector<Rat> coeffs);
SeqPtr make_dfao(Dfao machine, const NumerationSystem& sys);
SeqPtr make_cumulative(SeqPtr inner, const NumerationSystem& sys);
// Regenerates terms from a decorated prefix plus relations, growing the
// underlying tree on demand.
SeqPtr make_extension(const NumerationSystem& sys, std::vector<Rat> prefix_terms,
                      RelationSet relset, const BuildOptions& opts = {});

// b-file lines "n value", n contiguous from 0; '#' comments ignored.
std::vector<Rat> read_bfile(std::istream& in, const std::string& name);
SeqPtr read_bfile(const std::string& path);
void write_bfile(std::ostream& out, const SequenceSource& seq, std::uint64_t count);
void write_bfile(const std::string& path, const SequenceSource& seq, std::uint64_t count);

}  // namespace numertree
