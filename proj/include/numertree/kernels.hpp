#pragma once

#include <cstdint>
#include <vector>

#include "numertree/seqsource.hpp"
#include "numertree/tree.hpp"

namespace numertree {

// Subsequence x_{k^j n + r}, n = 0..count-1.
std::vector<Rat> k_kernel_element(const SequenceSource& seq, int k, int j, std::uint64_t r,
                                  std::uint64_t count);

// tau(x, u): term n is x_{val(rep(n) u)} when rep(n) u stays in the
// language, 0 otherwise.
std::vector<Rat> s_kernel_element(const NumerationSystem& sys, const SequenceSource& seq,
                                  const Word& u, std::uint64_t count);

// Indicator of "the height-h factor at rep(n) has this type", using the
// type ids of classify() on a tree grown to cover `count` nodes.
std::vector<int> chi(const NumerationSystem& sys, int h, int type_id, std::uint64_t count);

// tau(x, u) filtered by type: the pointwise product of the two above.
std::vector<Rat> filtered_element(const NumerationSystem& sys, const SequenceSource& seq,
                                  const Word& u, int h, int type_id, std::uint64_t count);

struct RankProfile {
  // entries[l] = (suffix length bound l, rank over Q of the span of all
  // tau(x, u) with |u| <= l, truncated to `count` terms).
  std::vector<std::pair<int, std::size_t>> entries;
  std::vector<Word> zero_suffixes;  // skipped: identically zero on [0, count)
  bool truncation_warning = false;  // some suffix of max length had no nonzero column
};

RankProfile rank_profile(const NumerationSystem& sys, const SequenceSource& seq,
                         int max_suffix_len, std::uint64_t count);

// Tree with enough full levels to cover `count` nodes plus `extra` levels.
TreePrefix tree_covering(const NumerationSystem& sys, const SequenceSource* seq,
                         std::uint64_t count, int extra,
                         const BuildOptions& opts = {});

std::string rank_profile_csv(const RankProfile& profile);

}  // namespace numertree
