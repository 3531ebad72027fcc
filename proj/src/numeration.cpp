#include "numertree/numeration.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <numeric>

#include "numertree/errors.hpp"

namespace numertree {

namespace {

Dfa integer_base_dfa(int k) {
  Dfa d;
  d.alphabet.resize(k);
  std::iota(d.alphabet.begin(), d.alphabet.end(), 0);
  d.initial = 0;
  d.next.assign(2, std::vector<int>(k, 1));
  d.next[0][0] = -1;  // no leading zero
  return d;
}

}  // namespace

NumerationSystem NumerationSystem::integer(int k) {
  if (k < 2) throw ParseError("integer base must be >= 2");
  NumerationSystem s;
  s.kind_ = Kind::IntegerBase;
  s.p_ = k;
  s.q_ = 1;
  s.dfa_ = std::make_shared<Dfa>(integer_base_dfa(k));
  s.spec_ = std::to_string(k);
  s.cache_ = std::make_shared<CountCache>();
  return s;
}

NumerationSystem NumerationSystem::rational(int p, int q) {
  if (!(p > q && q > 1)) throw ParseError("rational base requires p > q > 1");
  if (std::gcd(p, q) != 1) throw ParseError("rational base requires coprime p, q");
  NumerationSystem s;
  s.kind_ = Kind::RationalBase;
  s.p_ = p;
  s.q_ = q;
  s.spec_ = std::to_string(p) + "/" + std::to_string(q);
  return s;
}

NumerationSystem NumerationSystem::regular(Dfa dfa) {
  dfa.validate();
  NumerationSystem s;
  s.kind_ = Kind::Regular;
  s.p_ = static_cast<int>(dfa.alphabet.size());
  s.q_ = 1;
  s.dfa_ = std::make_shared<Dfa>(std::move(dfa));
  s.spec_ = "dfa";
  s.cache_ = std::make_shared<CountCache>();
  return s;
}

NumerationSystem NumerationSystem::fibonacci() {
  Dfa d;
  d.alphabet = {0, 1};
  d.initial = 0;
  // state 0: start; state 1: last digit 1; state 2: last digit 0.
  d.next = {{-1, 1}, {2, -1}, {2, 1}};
  NumerationSystem s = regular(std::move(d));
  s.spec_ = "fib";
  return s;
}

NumerationSystem NumerationSystem::parse(const std::string& spec) {
  if (spec == "fib") return fibonacci();
  if (spec.rfind("dfa:", 0) == 0) {
    std::string path = spec.substr(4);
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open dfa file: " + path);
    nlohmann::ordered_json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("dfa file " + path + ": " + e.what());
    }
    NumerationSystem s = regular(Dfa::from_json(j));
    s.spec_ = spec;
    return s;
  }
  auto slash = spec.find('/');
  try {
    if (slash != std::string::npos) {
      int p = std::stoi(spec.substr(0, slash));
      int q = std::stoi(spec.substr(slash + 1));
      return rational(p, q);
    }
    return integer(std::stoi(spec));
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("unrecognized system spec: '" + spec + "'");
  }
}

const Dfa& NumerationSystem::automaton() const {
  if (!dfa_) throw ParseError("rational-base system has no finite automaton");
  return *dfa_;
}

std::vector<Digit> NumerationSystem::alphabet() const {
  if (kind_ == Kind::Regular) return dfa_->alphabet;
  std::vector<Digit> a(p_);
  std::iota(a.begin(), a.end(), 0);
  return a;
}

bool NumerationSystem::compact_words() const {
  auto a = alphabet();
  return a.size() <= 10 && a.back() <= 9;
}

Word NumerationSystem::word_parse(const std::string& s) const {
  return numertree::word_parse(s, compact_words());
}

Word NumerationSystem::rep(const Int& n) const {
  if (n < 0) throw ParseError("rep: negative index");
  switch (kind_) {
    case Kind::IntegerBase: {
      Word w;
      Int m = n;
      while (m > 0) {
        Int rem = m % p_;
        w.push_back(static_cast<Digit>(rem.get_si()));
        m /= p_;
      }
      std::reverse(w.begin(), w.end());
      return w;
    }
    case Kind::RationalBase: {
      // Least-significant-first digit loop: a = (q n) mod p, n' = (q n - a)/p.
      Word w;
      Int m = n;
      while (m > 0) {
        Int t = m * q_;
        Int rem = t % p_;
        w.push_back(static_cast<Digit>(rem.get_si()));
        m = (t - rem) / p_;
      }
      std::reverse(w.begin(), w.end());
      return w;
    }
    case Kind::Regular:
      return rep_regular(n);
  }
  throw ParseError("rep: bad system kind");
}

Int NumerationSystem::val(const Word& w) const {
  switch (kind_) {
    case Kind::IntegerBase: {
      Int v = 0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] < 0 || w[i] >= p_)
          throw WordError("digit out of range at position " + std::to_string(i), i);
        if (i == 0 && w[i] == 0) throw WordError("leading zero at position 0", 0);
        v = v * p_ + w[i];
      }
      return v;
    }
    case Kind::RationalBase: {
      // Horner step v' = (p v + a)/q; every intermediate must be integral.
      Int v = 0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] < 0 || w[i] >= p_)
          throw WordError("digit out of range at position " + std::to_string(i), i);
        if (i == 0 && w[i] == 0) throw WordError("leading zero at position 0", 0);
        Int t = v * p_ + w[i];
        if (t % q_ != 0)
          throw WordError("word leaves the numeration language at position " + std::to_string(i),
                          i);
        v = t / q_;
      }
      return v;
    }
    case Kind::Regular:
      return val_regular(w);
  }
  throw ParseError("val: bad system kind");
}

bool NumerationSystem::is_valid(const Word& w) const {
  try {
    val(w);
    return true;
  } catch (const WordError&) {
    return false;
  }
}

void NumerationSystem::ensure_counts(std::size_t len) const {
  auto& cache = *cache_;
  if (cache.counts.empty()) cache.counts.push_back(std::vector<Int>(dfa_->states(), Int(1)));
  while (cache.counts.size() <= len) {
    const auto& prev = cache.counts.back();
    std::vector<Int> cur(dfa_->states(), Int(0));
    for (int s = 0; s < dfa_->states(); ++s)
      for (std::size_t a = 0; a < dfa_->alphabet.size(); ++a) {
        int t = dfa_->next[s][a];
        if (t >= 0) cur[s] += prev[t];
      }
    cache.counts.push_back(std::move(cur));
  }
}

Word NumerationSystem::rep_regular(const Int& n) const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  Int remaining = n;
  std::size_t len = 0;
  int zero_run = 0;
  for (;;) {
    ensure_counts(len);
    const Int& c = cache_->counts[len][dfa_->initial];
    if (remaining < c) break;
    remaining -= c;
    zero_run = (c == 0) ? zero_run + 1 : 0;
    if (zero_run > dfa_->states())
      throw ParseError("rep: index beyond the (finite) numeration language");
    ++len;
  }
  Word w;
  int state = dfa_->initial;
  for (std::size_t i = 0; i < len; ++i) {
    bool advanced = false;
    for (std::size_t a = 0; a < dfa_->alphabet.size(); ++a) {
      int t = dfa_->next[state][a];
      if (t < 0) continue;
      const Int& c = cache_->counts[len - i - 1][t];
      if (remaining < c) {
        w.push_back(dfa_->alphabet[a]);
        state = t;
        advanced = true;
        break;
      }
      remaining -= c;
    }
    if (!advanced) throw ParseError("rep: unranking failed (inconsistent counts)");
  }
  return w;
}

Int NumerationSystem::val_regular(const Word& w) const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  ensure_counts(w.size());
  Int rank = 0;
  for (std::size_t l = 0; l < w.size(); ++l) rank += cache_->counts[l][dfa_->initial];
  int state = dfa_->initial;
  for (std::size_t i = 0; i < w.size(); ++i) {
    int ai = dfa_->alphabet_index(w[i]);
    if (ai < 0) throw WordError("digit out of alphabet at position " + std::to_string(i), i);
    for (int a = 0; a < ai; ++a) {
      int t = dfa_->next[state][a];
      if (t >= 0) rank += cache_->counts[w.size() - i - 1][t];
    }
    int t = dfa_->next[state][ai];
    if (t < 0)
      throw WordError("word leaves the numeration language at position " + std::to_string(i), i);
    state = t;
  }
  return rank;
}

std::vector<Digit> NumerationSystem::children_digits(const Int& value) const {
  if (kind_ != Kind::RationalBase)
    throw ParseError("children_digits is defined for rational bases only");
  long r = mpz_fdiv_ui(value.get_mpz_t(), q_);
  std::vector<Digit> out;
  int first = static_cast<int>((q_ - (static_cast<long>(p_) * r) % q_) % q_);
  for (int a = first; a < p_; a += q_) out.push_back(a);
  if (value == 0 && !out.empty() && out.front() == 0) out.erase(out.begin());
  return out;
}

Signature NumerationSystem::signature() const {
  if (kind_ != Kind::RationalBase)
    throw ParseError("signature is defined for rational bases only");
  Signature sig;
  for (int r = 0; r < q_; ++r) {
    Word w;
    int first = static_cast<int>((q_ - (static_cast<long>(p_) * r) % q_) % q_);
    for (int a = first; a < p_; a += q_) w.push_back(a);
    sig.words.push_back(std::move(w));
  }
  return sig;
}

bool NumerationSystem::is_expanding() const {
  for (const Word& w : signature().words)
    if (w.size() < 2) return false;
  return true;
}

std::vector<Word> NumerationSystem::enumerate(std::uint64_t count) const {
  std::vector<Word> out;
  if (count == 0) return out;
  out.push_back({});  // the empty word represents 0
  // Breadth-first traversal; queue entries carry the value (integer and
  // rational bases) or the DFA state (regular systems).
  struct Entry {
    Word word;
    Int value;
    int state;
  };
  std::deque<Entry> queue;
  queue.push_back({{}, Int(0), kind_ == Kind::Regular ? dfa_->initial : 0});
  while (out.size() < count && !queue.empty()) {
    Entry e = std::move(queue.front());
    queue.pop_front();
    switch (kind_) {
      case Kind::IntegerBase: {
        for (Digit a = (e.value == 0 ? 1 : 0); a < p_; ++a) {
          Word w = e.word;
          w.push_back(a);
          queue.push_back({w, e.value * p_ + a, 0});
          out.push_back(std::move(w));
          if (out.size() == count) return out;
        }
        break;
      }
      case Kind::RationalBase: {
        for (Digit a : children_digits(e.value)) {
          Word w = e.word;
          w.push_back(a);
          queue.push_back({w, (e.value * p_ + a) / q_, 0});
          out.push_back(std::move(w));
          if (out.size() == count) return out;
        }
        break;
      }
      case Kind::Regular: {
        for (std::size_t a = 0; a < dfa_->alphabet.size(); ++a) {
          int t = dfa_->next[e.state][a];
          if (t < 0) continue;
          Word w = e.word;
          w.push_back(dfa_->alphabet[a]);
          queue.push_back({w, Int(0), t});
          out.push_back(std::move(w));
          if (out.size() == count) return out;
        }
        break;
      }
    }
  }
  if (out.size() < count) throw ParseError("enumerate: language has fewer words than requested");
  return out;
}

}  // namespace numertree
