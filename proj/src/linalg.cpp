#include "numertree/linalg.hpp"

#include <algorithm>

#include "numertree/errors.hpp"

namespace numertree {

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

RatVector RatMatrix::row(std::size_t i) const {
  RatVector r(cols_);
  for (std::size_t j = 0; j < cols_; ++j) r[j] = at(i, j);
  return r;
}

void RatMatrix::set_row(std::size_t i, const RatVector& r) {
  if (r.size() != cols_) throw ParseError("row width mismatch");
  for (std::size_t j = 0; j < cols_; ++j) at(i, j) = r[j];
}

namespace {

// In-place Gauss-Jordan on rows [0, rows) and columns [0, cols).
std::vector<std::size_t> eliminate(RatMatrix& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.rows(); ++c) {
    std::size_t sel = r;
    while (sel < m.rows() && m.at(sel, c) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(sel, j), m.at(r, j));
    Rat inv = m.at(r, c);
    for (std::size_t j = 0; j < m.cols(); ++j) m.at(r, j) /= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m.at(i, c) == 0) continue;
      Rat f = m.at(i, c);
      for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) -= f * m.at(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

RrefResult rref(const RatMatrix& m) {
  RatMatrix r = m;
  auto pivots = eliminate(r, r.cols());
  return {std::move(r), std::move(pivots)};
}

std::size_t rank(const RatMatrix& m) { return rref(m).pivots.size(); }

RatMatrix mat_mul(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols() != b.rows()) throw ParseError("matrix product dimension mismatch");
  RatMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Rat& aik = a.at(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (b.at(k, j) != 0) c.at(i, j) += aik * b.at(k, j);
    }
  return c;
}

RatVector mat_vec(const RatMatrix& a, const RatVector& v) {
  if (a.cols() != v.size()) throw ParseError("matrix-vector dimension mismatch");
  RatVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a.at(i, j) != 0 && v[j] != 0) out[i] += a.at(i, j) * v[j];
  return out;
}

std::optional<RatVector> solve_canonical(const RatMatrix& a, const RatVector& b) {
  if (a.rows() != b.size()) throw ParseError("solve: rows(A) != len(b)");
  const std::size_t n = a.cols();
  // Augmented system with the unknown columns reversed, so the ordinary
  // left-to-right pivot scan lands on the highest original column indices.
  RatMatrix aug(a.rows(), n + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = a.at(i, n - 1 - j);
    aug.at(i, n) = b[i];
  }
  auto pivots = eliminate(aug, n);
  for (std::size_t i = pivots.size(); i < aug.rows(); ++i)
    if (aug.at(i, n) != 0) return std::nullopt;
  RatVector x(n, Rat(0));
  for (std::size_t k = 0; k < pivots.size(); ++k) x[n - 1 - pivots[k]] = aug.at(k, n);
  return x;
}

bool RowBasis::add(RatVector row) {
  if (row.size() != width_) throw ParseError("row basis width mismatch");
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    const Rat& f = row[lead_[k]];
    if (f == 0) continue;
    Rat factor = f;  // basis rows have lead entry 1
    for (std::size_t j = lead_[k]; j < width_; ++j)
      if (basis_[k][j] != 0) row[j] -= factor * basis_[k][j];
  }
  std::size_t lead = width_;
  for (std::size_t j = 0; j < width_; ++j)
    if (row[j] != 0) {
      lead = j;
      break;
    }
  if (lead == width_) return false;
  Rat inv = row[lead];
  for (std::size_t j = lead; j < width_; ++j) row[j] /= inv;
  basis_.push_back(std::move(row));
  lead_.push_back(lead);
  return true;
}

}  // namespace numertree
