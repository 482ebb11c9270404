#pragma once

// Hard-margin max-margin separators for pooled attention outputs.
//
// Pooling maps each example to v = sum_l phi_l x_l (a probability vector over
// embedding coordinates). The primary solver finds the least-norm point of
// the convex hull of the signed points {y_n v_n} (Wolfe's min-norm-point
// algorithm); by minimax duality that point, rescaled, solves
// min ||u||^2/2 s.t. y_n <u, v_n> >= 1, and the result is certified through
// its KKT residuals. A brute-force support-subset oracle provides an
// independent second route for small instances.

#include <stdexcept>
#include <vector>

#include "attnlab/model.hpp"
#include "attnlab/sequences.hpp"

namespace attnlab {

struct PooledPoint {
    Vec v;
    int label = 0;
    int length = 0;  // length of the originating sequence
};

struct PooledDataset {
    int d = 0;
    std::vector<PooledPoint> points;
};

PooledDataset pool_dataset(const ModelParams& p, const TaskDataset& ds);

// Smallest functional margin min_n y_n <u, v_n>; strictly positive iff u
// separates the data.
double min_functional_margin(const PooledDataset& pooled, const Vec& u);
bool is_separable_by(const PooledDataset& pooled, const Vec& u);

struct MarginSolution {
    Vec u_star;
    double margin = 0.0;  // geometric margin 1 / ||u_star||
    std::vector<int> support_indices;
    Vec alpha;            // dual coefficients
    // KKT residuals of the returned solution:
    //   feasibility      max(0, 1 - min_n y_n <u, v_n>)
    //   stationarity     || u - sum_n alpha_n y_n v_n ||
    //   complementarity  max_n alpha_n * |y_n <u, v_n> - 1| / max(1, sum alpha)
    // Complementarity is scaled by the dual mass: for small-margin data
    // ||u_star|| is huge and the raw product sits on a representation floor of
    // ~eps * ||u_star||^2 no matter how the solution was computed, so only the
    // scaled form stays meaningful across margins.
    double kkt_feasibility = 0.0;
    double kkt_stationarity = 0.0;
    double kkt_complementarity = 0.0;
    long updates = 0;     // affine subproblems solved
};

class NonSeparableError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kKktTol = 1e-8;
inline constexpr long kMaxSolverUpdates = 10'000'000;
// The data counts as non-separable when the hull of signed points comes this
// close to the origin (the attainable margin would be below any tolerance we
// certify against anyway).
inline constexpr double kHullNonSepTol = 1e-10;

// Wolfe's min-norm-point algorithm on the hull of {y_n v_n}. Throws
// NonSeparableError when the hull point approaches the origin (distance
// <= kHullNonSepTol), so that no usable separator exists; throws
// std::runtime_error if the subproblem budget runs out without a verdict.
MarginSolution solve_max_margin(const PooledDataset& pooled, double tol = kKktTol,
                                long max_updates = kMaxSolverUpdates);

// Exhaustive oracle for instances with at most max_points points: tries every
// support subset of size <= d+1, solves the equality-constrained least-norm
// problem on it, and returns the feasible candidate of smallest norm.
// Independent of the dual solver by construction.
MarginSolution support_subset_oracle(const PooledDataset& pooled, int max_points = 12);

// cos(u, u_star)
double alignment(const Vec& u, const Vec& u_star);

}  // namespace attnlab
