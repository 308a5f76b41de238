#pragma once

// Reference solver for the projection problem, independent of the Dykstra
// engine. The problem is posed on the full n x n matrix with every pairwise
// row-domination constraint written out, reduced to least-distance
// programming and solved through the dual NNLS problem (Lawson and Hanson).

#include <vector>

#include <Eigen/Dense>

#include "sst/types.hpp"

namespace sst::testing {

// min ||A x - b|| subject to x >= 0 (active set).
Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                     int max_iter = 10000);

// min ||z||^2 subject to g z >= h. Returns false when infeasible.
bool ldp(const Eigen::MatrixXd& g, const Eigen::VectorXd& h, Eigen::VectorXd& z);

// argmin sum_ij w_ij (y_ij - m_ij)^2 over m in C(pi) (unit weights when
// weights is empty). With labels, m must additionally have equal rows for
// items sharing a label.
Matrix qp_project(const Matrix& y, const Ranking& pi,
                  const std::vector<int>& labels = {}, const Matrix& weights = {});

// Brute-force minimum of the unit-weight projection residual over all
// rankings: the exhaustive least-squares estimate, computed with qp_project.
Matrix qp_lse(const Matrix& y, const std::vector<int>& labels = {});

}  // namespace sst::testing
