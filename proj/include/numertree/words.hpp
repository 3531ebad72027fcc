#pragma once

#include <string>
#include <vector>

namespace numertree {

using Digit = int;
// Digit sequence, most significant first. Empty word represents zero.
using Word = std::vector<Digit>;

// Radix order: length first, then lexicographic.
bool radix_less(const Word& a, const Word& b);

// Alphabets of at most 10 digits print one character per digit ("2101");
// larger alphabets print comma-separated integers ("12,0,7").
std::string word_str(const Word& w, bool compact = true);
Word word_parse(const std::string& s, bool compact = true);

}  // namespace numertree
