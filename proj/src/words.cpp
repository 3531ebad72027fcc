#include "numertree/words.hpp"

#include <algorithm>

#include "numertree/errors.hpp"

namespace numertree {

bool radix_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::string word_str(const Word& w, bool compact) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (compact) {
      out += static_cast<char>('0' + w[i]);
    } else {
      if (i) out += ',';
      out += std::to_string(w[i]);
    }
  }
  return out;
}

Word word_parse(const std::string& s, bool compact) {
  Word w;
  if (s.empty()) return w;
  if (compact) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9')
        throw WordError("invalid digit character at position " + std::to_string(i), i);
      w.push_back(s[i] - '0');
    }
    return w;
  }
  std::size_t pos = 0;
  std::size_t idx = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      if (tok.empty()) throw std::invalid_argument("empty");
      w.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw WordError("invalid digit token at position " + std::to_string(idx), idx);
    }
    ++idx;
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return w;
}

}  // namespace numertree
