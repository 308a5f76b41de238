#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sst/error.hpp"
#include "sst/types.hpp"

namespace sst {

enum class Monotone { kNondecreasing, kNonincreasing };

// Weighted L2 projection onto monotone sequences (pool adjacent violators).
// The result is piecewise constant on pooled runs and keeps the weighted
// mean of the input.
std::vector<double> pava(std::span<const double> values,
                         std::span<const double> weights, Monotone direction);

struct ProjectionSettings {
  double tol = 1e-9;              // Frobenius change between sweeps
  int max_iter = 10000;           // Dykstra sweep cap
  double feasibility_tol = 1e-7;  // allowed constraint violation at exit
};

// Item -> block index. Blocks must occupy contiguous positions under the
// ranking passed alongside.
struct BlockConstraint {
  std::vector<int> labels;
};

// Thrown when the sweep cap is reached. report() holds the last iterate
// (post-processed into a valid comparison matrix) and its residuals.
class ProjectionNotConverged : public Error {
 public:
  explicit ProjectionNotConverged(EstimateReport report);
  const EstimateReport& report() const { return report_; }

 private:
  EstimateReport report_;
};

// Least-squares projection of y onto C(pi): shifted skew-symmetric matrices
// in [0, 1] whose rows are non-decreasing and columns non-increasing when
// items are listed best first under pi. With blocks, the feasible set is
// further restricted to matrices constant on every block-pair rectangle.
//
// Solved with Dykstra's alternating projections between the column cone and
// the row cone (each by PAVA) on the strict upper triangle of the
// skew-averaged input, followed by clipping to [1/2, 1]. Block constraints
// reduce the problem to block means weighted by block-pair cell counts.
EstimateReport project_onto_class(const Matrix& y, const Ranking& pi,
                                  const std::optional<BlockConstraint>& blocks,
                                  const ProjectionSettings& settings = {});

// Same projection under the weighted norm sum w_ij (y_ij - m_ij)^2. Weights
// must be positive and symmetric. Used to solve block-reduced problems.
EstimateReport project_onto_class_weighted(const Matrix& y,
                                           const Matrix& weights,
                                           const Ranking& pi,
                                           const ProjectionSettings& settings = {});

// sum_ij (y_ij - m_ij)^2
double objective(const Matrix& y, const Matrix& m);

// Largest violation of the C(pi) constraints (monotonicity, skew, diagonal,
// box) by m.
double feasibility_violation(const Matrix& m, const Ranking& pi);

}  // namespace sst
