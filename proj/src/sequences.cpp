#include "numertree/sequences.hpp"

#include <fstream>
#include <mutex>
#include <sstream>

#include "numertree/errors.hpp"

namespace numertree {

nlohmann::ordered_json Dfao::to_json() const {
  nlohmann::ordered_json j;
  j["alphabet"] = alphabet;
  j["states"] = states();
  j["initial"] = initial;
  auto& tr = j["transitions"] = nlohmann::ordered_json::array();
  for (int s = 0; s < states(); ++s)
    for (std::size_t a = 0; a < alphabet.size(); ++a)
      if (next[s][a] >= 0) tr.push_back({s, alphabet[a], next[s][a]});
  auto& outs = j["outputs"] = nlohmann::ordered_json::array();
  for (const Rat& r : output) outs.push_back(rat_str(r));
  return j;
}

Dfao Dfao::from_json(const nlohmann::ordered_json& j) {
  Dfao d;
  try {
    d.alphabet = j.at("alphabet").get<std::vector<Digit>>();
    int states = j.at("states").get<int>();
    d.initial = j.at("initial").get<int>();
    d.next.assign(states, std::vector<int>(d.alphabet.size(), -1));
    for (const auto& t : j.at("transitions")) {
      int from = t.at(0).get<int>();
      Digit digit = t.at(1).get<Digit>();
      int to = t.at(2).get<int>();
      auto it = std::find(d.alphabet.begin(), d.alphabet.end(), digit);
      if (from < 0 || from >= states || to < 0 || to >= states || it == d.alphabet.end())
        throw ParseError("dfao json: bad transition");
      d.next[from][it - d.alphabet.begin()] = to;
    }
    for (const auto& o : j.at("outputs")) d.output.push_back(rat_parse(o.get<std::string>()));
    if (static_cast<int>(d.output.size()) != states)
      throw ParseError("dfao json: one output per state required");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("dfao json: ") + e.what());
  }
  return d;
}

Int sum_digits(const NumerationSystem& sys, const Int& n) {
  Int total = 0;
  for (Digit d : sys.rep(n)) total += d;
  return total;
}

Int count_factor(const NumerationSystem& sys, const Word& pattern, const Int& n) {
  if (pattern.empty()) throw ParseError("count_factor: empty pattern");
  Word w = sys.rep(n);
  if (w.size() < pattern.size()) return 0;
  Int count = 0;
  for (std::size_t i = 0; i + pattern.size() <= w.size(); ++i)
    if (std::equal(pattern.begin(), pattern.end(), w.begin() + i)) ++count;
  return count;
}

Rat dfao_run(const Dfao& machine, const NumerationSystem& sys, const Int& n) {
  Word w = sys.rep(n);
  int state = machine.initial;
  for (std::size_t i = 0; i < w.size(); ++i) {
    auto it = std::find(machine.alphabet.begin(), machine.alphabet.end(), w[i]);
    int a = it == machine.alphabet.end() ? -1 : static_cast<int>(it - machine.alphabet.begin());
    int to = a < 0 ? -1 : machine.next[state][a];
    if (to < 0)
      throw ParseError("dfao: missing transition after prefix " +
                       sys.word_str(Word(w.begin(), w.begin() + i + 1)));
    state = to;
  }
  return machine.output[state];
}

Rat cumulative(const NumerationSystem& sys, const SequenceSource& seq, const Int& n) {
  Word w = sys.rep(n);
  // Every prefix of rep(n) is valid; accumulate its value with one Horner
  // step per digit.
  Rat total = seq.term(0);
  Int value = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (sys.kind() == NumerationSystem::Kind::RationalBase)
      value = (value * sys.p() + w[i]) / sys.q();
    else if (sys.kind() == NumerationSystem::Kind::IntegerBase)
      value = value * sys.p() + w[i];
    else
      value = sys.val(Word(w.begin(), w.begin() + i + 1));
    total += seq.term(to_uint64(value));
  }
  return total;
}

Int power_seq(int d, const Int& n) {
  if (d < 0) throw ParseError("power_seq: negative exponent");
  Int out;
  mpz_pow_ui(out.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(d));
  return out;
}

Rat poly_seq(const std::vector<Rat>& coeffs, const Int& n) {
  Rat acc(0);
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * Rat(n) + coeffs[i];
  return acc;
}

Rat VectorSequence::term(std::uint64_t n) const {
  if (n >= terms_.size())
    throw InsufficientError(name_ + ": index " + std::to_string(n) + " beyond " +
                            std::to_string(terms_.size()) + " stored terms");
  return terms_[n];
}

std::vector<Rat> take_terms(const SequenceSource& seq, std::uint64_t count) {
  std::vector<Rat> out;
  out.reserve(count);
  for (std::uint64_t n = 0; n < count; ++n) out.push_back(seq.term(n));
  return out;
}

namespace {

class SumDigitsSequence final : public SequenceSource {
 public:
  explicit SumDigitsSequence(NumerationSystem sys) : sys_(std::move(sys)) {}
  Rat term(std::uint64_t n) const override {
    return Rat(sum_digits(sys_, Int(static_cast<unsigned long>(n))));
  }
  std::string describe() const override { return "sumdigits[" + sys_.spec() + "]"; }

 private:
  NumerationSystem sys_;
};

class CountFactorSequence final : public SequenceSource {
 public:
  CountFactorSequence(NumerationSystem sys, Word pattern)
      : sys_(std::move(sys)), pattern_(std::move(pattern)) {}
  Rat term(std::uint64_t n) const override {
    return Rat(count_factor(sys_, pattern_, Int(static_cast<unsigned long>(n))));
  }
  std::string describe() const override {
    return "count:" + sys_.word_str(pattern_) + "[" + sys_.spec() + "]";
  }

 private:
  NumerationSystem sys_;
  Word pattern_;
};

class PowerSequence final : public SequenceSource {
 public:
  explicit PowerSequence(int d) : d_(d) {}
  Rat term(std::uint64_t n) const override {
    return Rat(power_seq(d_, Int(static_cast<unsigned long>(n))));
  }
  std::string describe() const override { return "power:" + std::to_string(d_); }

 private:
  int d_;
};

class PolySequence final : public SequenceSource {
 public:
  explicit PolySequence(std::vector<Rat> coeffs) : coeffs_(std::move(coeffs)) {}
  Rat term(std::uint64_t n) const override {
    return poly_seq(coeffs_, Int(static_cast<unsigned long>(n)));
  }
  std::string describe() const override {
    std::string s = "poly:";
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      s += (i ? "," : "") + rat_str(coeffs_[i]);
    return s;
  }

 private:
  std::vector<Rat> coeffs_;
};

class DfaoSequence final : public SequenceSource {
 public:
  DfaoSequence(Dfao machine, NumerationSystem sys)
      : machine_(std::move(machine)), sys_(std::move(sys)) {}
  Rat term(std::uint64_t n) const override {
    return dfao_run(machine_, sys_, Int(static_cast<unsigned long>(n)));
  }
  std::string describe() const override { return "dfao[" + sys_.spec() + "]"; }

 private:
  Dfao machine_;
  NumerationSystem sys_;
};

class CumulativeSequence final : public SequenceSource {
 public:
  CumulativeSequence(SeqPtr inner, NumerationSystem sys)
      : inner_(std::move(inner)), sys_(std::move(sys)) {}
  Rat term(std::uint64_t n) const override {
    return cumulative(sys_, *inner_, Int(static_cast<unsigned long>(n)));
  }
  std::string describe() const override { return "cumulative:" + inner_->describe(); }
  std::optional<std::uint64_t> length() const override { return inner_->length(); }

 private:
  SeqPtr inner_;
  NumerationSystem sys_;
};

// Extension terms come from extend(); the materialized serialization grows
// by whole levels under a lock, which stays invisible to callers.
class ExtensionSequence final : public SequenceSource {
 public:
  ExtensionSequence(NumerationSystem sys, std::vector<Rat> prefix_terms, RelationSet relset,
                    BuildOptions opts)
      : sys_(std::move(sys)),
        prefix_terms_(std::move(prefix_terms)),
        relset_(std::move(relset)),
        opts_(opts) {}

  Rat term(std::uint64_t n) const override {
    std::lock_guard<std::mutex> lock(mutex_);
    if (n >= terms_.size()) {
      int prefix_levels = levels_for_count(sys_, prefix_terms_.size());
      int levels = std::max({levels_for_count(sys_, n + 1) + 1, relset_.h, prefix_levels});
      TreePrefix prefix = build_tree(sys_, nullptr, prefix_levels, opts_);
      if (prefix.size() > prefix_terms_.size())
        throw InsufficientError(
            "extension prefix does not decorate whole levels: " +
            std::to_string(prefix_terms_.size()) + " terms, level boundary at " +
            std::to_string(prefix.size()));
      for (std::uint64_t i = 0; i < prefix.size(); ++i)
        prefix.set_decoration(i, prefix_terms_[i]);
      prefix.mark_decorated();
      TreePrefix full = extend(prefix, relset_, levels, opts_);
      terms_.clear();
      terms_.reserve(full.size());
      for (std::uint64_t i = 0; i < full.size(); ++i) terms_.push_back(full.decoration(i));
    }
    return terms_[n];
  }
  std::string describe() const override { return "extension[" + sys_.spec() + "]"; }

 private:
  NumerationSystem sys_;
  std::vector<Rat> prefix_terms_;
  RelationSet relset_;
  BuildOptions opts_;
  mutable std::mutex mutex_;
  mutable std::vector<Rat> terms_;
};

}  // namespace

SeqPtr make_sum_digits(const NumerationSystem& sys) {
  return std::make_shared<SumDigitsSequence>(sys);
}
SeqPtr make_count_factor(const NumerationSystem& sys, Word pattern) {
  return std::make_shared<CountFactorSequence>(sys, std::move(pattern));
}
SeqPtr make_power(int d) { return std::make_shared<PowerSequence>(d); }
SeqPtr make_poly(std::vector<Rat> coeffs) {
  return std::make_shared<PolySequence>(std::move(coeffs));
}
SeqPtr make_dfao(Dfao machine, const NumerationSystem& sys) {
  return std::make_shared<DfaoSequence>(std::move(machine), sys);
}
SeqPtr make_cumulative(SeqPtr inner, const NumerationSystem& sys) {
  return std::make_shared<CumulativeSequence>(std::move(inner), sys);
}
SeqPtr make_extension(const NumerationSystem& sys, std::vector<Rat> prefix_terms,
                      RelationSet relset, const BuildOptions& opts) {
  return std::make_shared<ExtensionSequence>(sys, std::move(prefix_terms), std::move(relset),
                                             opts);
}

std::vector<Rat> read_bfile(std::istream& in, const std::string& name) {
  std::vector<Rat> terms;
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    std::istringstream ls(line.substr(start));
    std::string idx_tok, val_tok, extra;
    if (!(ls >> idx_tok >> val_tok) || (ls >> extra))
      throw ParseError(name + ":" + std::to_string(lineno) + ": expected 'index value'");
    Int idx;
    Rat value;
    try {
      idx = int_parse(idx_tok);
      value = rat_parse(val_tok);
    } catch (const ParseError& e) {
      throw ParseError(name + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (idx != Int(static_cast<unsigned long>(terms.size())))
      throw ParseError(name + ":" + std::to_string(lineno) + ": index gap, expected " +
                       std::to_string(terms.size()) + " got " + idx.get_str());
    terms.push_back(std::move(value));
  }
  return terms;
}

SeqPtr read_bfile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open b-file: " + path);
  return std::make_shared<VectorSequence>(read_bfile(in, path), "bfile:" + path);
}

void write_bfile(std::ostream& out, const SequenceSource& seq, std::uint64_t count) {
  for (std::uint64_t n = 0; n < count; ++n) out << n << " " << rat_str(seq.term(n)) << "\n";
}

void write_bfile(const std::string& path, const SequenceSource& seq, std::uint64_t count) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open for writing: " + path);
  write_bfile(out, seq, count);
}

}  // namespace numertree
