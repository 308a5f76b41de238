#pragma once

#include "sst/error.hpp"
#include "sst/types.hpp"

namespace sst {

// Accepts a raw matrix as a comparison matrix. Entries within tol of the
// constraints are repaired: the skew residual is averaged away using
// (M + 1 - M^T) / 2, the diagonal is reset to 1/2 and entries are clamped
// into [0, 1]. Anything further out throws kEntryOutOfRange, kSkewViolation
// or kBadDiagonal. Idempotent on its own output.
ComparisonMatrix validate_comparison(const Matrix& raw, double tol);

// True iff M(i, k) >= M(j, k) - tol for every k whenever rank(i) > rank(j).
bool is_pi_sst(const ComparisonMatrix& m, const Ranking& pi, double tol);

// Sorts items by decreasing row sum (ties by item index) and checks that the
// matrix is SST under that order. Throws Error(kNotSST) otherwise.
Ranking find_sst_ranking(const ComparisonMatrix& m, double tol);

// Groups items whose rows coincide within tol (and whose mutual entry is
// within tol of 1/2). Blocks are listed best first by mean row sum, ties by
// smallest member. Throws kNonTransitiveGrouping when the tolerance relation
// is not an equivalence.
PartitionSpec indifference_partition(const ComparisonMatrix& m, double tol);

// Size of the largest indifference set at the given tolerance.
int kmax(const ComparisonMatrix& m, double tol = 1e-9);

// Sum of squared entrywise differences.
double squared_distance(const Matrix& a, const Matrix& b);
double squared_distance(const ComparisonMatrix& a, const ComparisonMatrix& b);

}  // namespace sst
