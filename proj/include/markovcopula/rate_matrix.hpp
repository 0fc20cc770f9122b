#pragma once

#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "markovcopula/matrix.hpp"

namespace markovcopula {

// Probability-zero floor: states (or events) with mass at or below this are
// treated as unreachable everywhere a conditional law is needed.
inline constexpr double kReachabilityEpsilon = 1e-12;

struct RateMatrixViolation {
  enum class Kind { negative_off_diagonal, positive_diagonal, row_sum };
  Kind kind;
  std::size_t row;
  std::size_t col;     // meaningful for negative_off_diagonal only
  double value;        // offending entry or row sum
  double tolerance;    // the threshold it was compared against

  std::string describe() const {
    std::ostringstream os;
    switch (kind) {
      case Kind::negative_off_diagonal:
        os << "off-diagonal entry (" << row << "," << col << ") = " << value << " is negative";
        break;
      case Kind::positive_diagonal:
        os << "diagonal entry (" << row << "," << row << ") = " << value << " is positive";
        break;
      case Kind::row_sum:
        os << "row " << row << " sums to " << value << " (tolerance " << tolerance << ")";
        break;
    }
    return os.str();
  }
};

// An infinitesimal generator snapshot: square matrix with nonnegative
// off-diagonal rates and zero row sums. Construction does not validate;
// violations() reports every defect so callers can fail loudly or report.
struct RateMatrix {
  Matrix entries;

  RateMatrix() = default;
  explicit RateMatrix(Matrix m) : entries(std::move(m)) {
    if (entries.rows() != entries.cols())
      throw std::invalid_argument("rate matrix must be square");
  }

  std::size_t dim() const { return entries.rows(); }

  double rate(std::size_t from, std::size_t to) const { return entries(from, to); }

  // Total exit rate out of a state (negated diagonal).
  double exit_rate(std::size_t from) const { return -entries(from, from); }

  double max_exit_rate() const {
    double best = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) best = std::max(best, exit_rate(i));
    return best;
  }

  std::vector<RateMatrixViolation> violations() const {
    std::vector<RateMatrixViolation> out;
    const std::size_t n = dim();
    const double scale = std::max(1.0, entries.max_abs());
    const double row_tol = 1e-12 * scale;
    for (std::size_t i = 0; i < n; ++i) {
      double row_sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double v = entries(i, j);
        row_sum += v;
        if (i != j && v < 0.0)
          out.push_back({RateMatrixViolation::Kind::negative_off_diagonal, i, j, v, 0.0});
        if (i == j && v > row_tol)
          out.push_back({RateMatrixViolation::Kind::positive_diagonal, i, j, v, row_tol});
      }
      if (std::abs(row_sum) > row_tol)
        out.push_back({RateMatrixViolation::Kind::row_sum, i, i, row_sum, row_tol});
    }
    return out;
  }

  bool valid() const { return violations().empty(); }
};

}  // namespace markovcopula
