#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "numertree/rational.hpp"

namespace numertree {

// Immutable descriptor of a sequence x_0, x_1, ...; term() is pure.
// Sources backed by finite data report their length and throw
// InsufficientError beyond it.
class SequenceSource {
 public:
  virtual ~SequenceSource() = default;
  virtual Rat term(std::uint64_t n) const = 0;
  virtual std::string describe() const = 0;
  virtual std::optional<std::uint64_t> length() const { return std::nullopt; }
};

using SeqPtr = std::shared_ptr<const SequenceSource>;

// Finite sequence given by explicit terms.
class VectorSequence final : public SequenceSource {
 public:
  VectorSequence(std::vector<Rat> terms, std::string name)
      : terms_(std::move(terms)), name_(std::move(name)) {}
  Rat term(std::uint64_t n) const override;
  std::string describe() const override { return name_; }
  std::optional<std::uint64_t> length() const override { return terms_.size(); }
  const std::vector<Rat>& terms() const { return terms_; }

 private:
  std::vector<Rat> terms_;
  std::string name_;
};

std::vector<Rat> take_terms(const SequenceSource& seq, std::uint64_t count);

}  // namespace numertree
