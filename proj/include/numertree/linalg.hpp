#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "numertree/rational.hpp"

namespace numertree {

using RatVector = std::vector<Rat>;

// Dense row-major matrix of exact rationals.
class RatMatrix {
 public:
  RatMatrix() : rows_(0), cols_(0) {}
  RatMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RatMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rat& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rat& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  RatVector row(std::size_t i) const;
  void set_row(std::size_t i, const RatVector& r);

  bool operator==(const RatMatrix& other) const = default;

 private:
  std::size_t rows_, cols_;
  std::vector<Rat> data_;
};

struct RrefResult {
  RatMatrix reduced;
  std::vector<std::size_t> pivots;  // strictly increasing column indices
};

// Reduced row echelon form with the usual left-to-right pivot scan.
RrefResult rref(const RatMatrix& m);

std::size_t rank(const RatMatrix& m);

RatMatrix mat_mul(const RatMatrix& a, const RatMatrix& b);
RatVector mat_vec(const RatMatrix& a, const RatVector& v);

// Solves A x = b and returns the canonical solution, or nullopt when the
// system is inconsistent. Canonical means: eliminate with pivots preferred
// on the highest column indices (so the free variables, which are set to 0,
// sit on the lowest column indices). This is the tie-break that matches the
// relation coefficients this toolkit is meant to reproduce: supports
// concentrate on the deepest available tree level.
std::optional<RatVector> solve_canonical(const RatMatrix& a, const RatVector& b);

// Incremental row space: add() reduces the row against the current basis and
// keeps it when independent. Used for kernel rank profiles.
class RowBasis {
 public:
  explicit RowBasis(std::size_t width) : width_(width) {}
  bool add(RatVector row);  // true when the rank grew
  std::size_t rank() const { return basis_.size(); }

 private:
  std::size_t width_;
  std::vector<RatVector> basis_;           // reduced rows
  std::vector<std::size_t> lead_;          // leading column of each basis row
};

}  // namespace numertree
