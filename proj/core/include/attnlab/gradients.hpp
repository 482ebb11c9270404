#pragma once

// Loss and gradients of the attention scorer under the logistic loss with
// per-length-class weights 1/2^L:
//
//   Loss = sum_L (1/2^L) sum_{n in I_L} log(1 + exp(-y_n T(X^(n))))
//
// Gradients are accumulated in closed form (no autodiff) in a fixed order:
// lengths ascending, lexicographic within a length, positions ascending.
// A central finite-difference oracle is provided as an independent check.

#include <utility>
#include <vector>

#include "attnlab/model.hpp"
#include "attnlab/sequences.hpp"

namespace attnlab {

struct LossBreakdown {
    double total = 0.0;
    // per_length[L] is the weighted loss of length class L; index 0 unused.
    std::vector<double> per_length;
    // Split by task tag: lengths >= l0 (chain-of-thought block) vs < l0.
    // Both stay 0 for plain even-pairs datasets.
    double cot_component = 0.0;
    double reg_component = 0.0;
};

// d/dz log(1 + exp(-z)) evaluated at z = label * logit; always in (-1, 0).
double j_prime(int label, double logit);

LossBreakdown logistic_loss(const ModelParams& p, const TaskDataset& ds);

struct GradientPair {
    Vec u;     // d
    Matrix W;  // d x d
};

// Analytic gradient of the loss in one pass over the dataset. Row/column
// structure of grad W: an example of length L only touches rows of its own
// token indices and the single column of its last token.
GradientPair loss_gradients(const ModelParams& p, const TaskDataset& ds);

// Convenience single-piece views of loss_gradients.
Vec grad_u(const ModelParams& p, const TaskDataset& ds);
Matrix grad_W(const ModelParams& p, const TaskDataset& ds);

// Central finite differences with step h on every coordinate of u and W.
GradientPair fd_gradient(const ModelParams& p, const TaskDataset& ds, double h = 1e-5);

// Tolerances for analytic-vs-finite-difference agreement, shared by the unit
// and acceptance suites.
inline constexpr double kFdRelTol = 1e-6;
inline constexpr double kFdAbsFloor = 1e-10;

// Largest per-coordinate relative discrepancy between two gradients.
// Differences below kFdAbsFloor count as zero; everything else is measured
// relative to the larger magnitude.
double max_gradient_discrepancy(const GradientPair& a, const GradientPair& b);

}  // namespace attnlab
