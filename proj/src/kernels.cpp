#include "numertree/kernels.hpp"

#include <sstream>

#include "numertree/linalg.hpp"

#include "numertree/errors.hpp"

namespace numertree {

std::vector<Rat> k_kernel_element(const SequenceSource& seq, int k, int j, std::uint64_t r,
                                  std::uint64_t count) {
  if (k < 2 || j < 0) throw ParseError("k-kernel: need k >= 2 and j >= 0");
  Int power(1);
  for (int i = 0; i < j; ++i) power *= k;
  if (Int(static_cast<unsigned long>(r)) >= power)
    throw ParseError("k-kernel: residue " + std::to_string(r) + " out of range for k^j");
  std::vector<Rat> out;
  out.reserve(count);
  for (std::uint64_t n = 0; n < count; ++n) {
    Int idx = power * static_cast<unsigned long>(n) + static_cast<unsigned long>(r);
    out.push_back(seq.term(to_uint64(idx)));
  }
  return out;
}

std::vector<Rat> s_kernel_element(const NumerationSystem& sys, const SequenceSource& seq,
                                  const Word& u, std::uint64_t count) {
  std::vector<Rat> out;
  out.reserve(count);
  for (std::uint64_t n = 0; n < count; ++n) {
    Word w = sys.rep(Int(static_cast<unsigned long>(n)));
    w.insert(w.end(), u.begin(), u.end());
    if (sys.is_valid(w))
      out.push_back(seq.term(to_uint64(sys.val(w))));
    else
      out.push_back(Rat(0));
  }
  return out;
}

TreePrefix tree_covering(const NumerationSystem& sys, const SequenceSource* seq,
                         std::uint64_t count, int extra, const BuildOptions& opts) {
  int levels = levels_for_count(sys, count) + extra;
  return build_tree(sys, seq, levels, opts);
}

std::vector<int> chi(const NumerationSystem& sys, int h, int type_id, std::uint64_t count) {
  TreePrefix tree = tree_covering(sys, nullptr, count, h);
  TypeTable table = classify(tree, h);
  if (type_id < 0 || type_id >= static_cast<int>(table.types.size()))
    throw ParseError("chi: unknown type id for this height");
  if (table.classified_end < count)
    throw InsufficientError("chi: tree classification does not reach the requested length");
  std::vector<int> out(count);
  for (std::uint64_t n = 0; n < count; ++n) out[n] = table.assignment[n] == type_id ? 1 : 0;
  return out;
}

std::vector<Rat> filtered_element(const NumerationSystem& sys, const SequenceSource& seq,
                                  const Word& u, int h, int type_id, std::uint64_t count) {
  std::vector<Rat> tau = s_kernel_element(sys, seq, u, count);
  std::vector<int> mask = chi(sys, h, type_id, count);
  for (std::uint64_t n = 0; n < count; ++n)
    if (!mask[n]) tau[n] = 0;
  return tau;
}

RankProfile rank_profile(const NumerationSystem& sys, const SequenceSource& seq,
                         int max_suffix_len, std::uint64_t count) {
  RankProfile profile;
  RowBasis basis(count);
  // Suffixes by length; radix order inside a length for determinism.
  std::vector<Word> frontier{{}};
  for (int len = 0; len <= max_suffix_len; ++len) {
    if (len > 0) {
      std::vector<Word> next;
      for (const Word& w : frontier)
        for (Digit a : sys.alphabet()) {
          Word ext = w;
          ext.push_back(a);
          next.push_back(std::move(ext));
        }
      frontier = std::move(next);
    }
    for (const Word& u : frontier) {
      auto column = s_kernel_element(sys, seq, u, count);
      bool all_zero = true;
      for (const Rat& r : column)
        if (r != 0) {
          all_zero = false;
          break;
        }
      if (all_zero) {
        profile.zero_suffixes.push_back(u);
        if (len == max_suffix_len) profile.truncation_warning = true;
        continue;
      }
      basis.add(std::move(column));
    }
    profile.entries.emplace_back(len, basis.rank());
  }
  return profile;
}

std::string rank_profile_csv(const RankProfile& profile) {
  std::ostringstream out;
  out << "suffix_len,rank\n";
  for (const auto& [len, rank] : profile.entries) out << len << "," << rank << "\n";
  return out.str();
}

}  // namespace numertree
