#include "attnlab/gradients.hpp"

#include <cmath>
#include <stdexcept>

namespace attnlab {

namespace {

// log(1 + exp(-z)) without overflow for large |z|.
double logistic_j(double z) {
    if (z >= 0.0) return std::log1p(std::exp(-z));
    return -z + std::log1p(std::exp(z));
}

void check_dataset(const ModelParams& p, const TaskDataset& ds) {
    if (ds.examples.empty()) throw std::invalid_argument("empty dataset");
    if (ds.d != p.d) {
        throw std::invalid_argument("dataset embedding dimension " + std::to_string(ds.d) +
                                    " != model dimension " + std::to_string(p.d));
    }
}

}  // namespace

double j_prime(int label, double logit) {
    if (label != 1 && label != -1) throw std::invalid_argument("label must be +-1");
    const double z = label * logit;
    if (z >= 0.0) {
        const double e = std::exp(-z);
        return -e / (1.0 + e);
    }
    return -1.0 / (1.0 + std::exp(z));
}

LossBreakdown logistic_loss(const ModelParams& p, const TaskDataset& ds) {
    check_dataset(p, ds);
    LossBreakdown out;
    out.per_length.assign(static_cast<size_t>(ds.max_length()) + 1, 0.0);
    std::vector<double> tag_loss(3, 0.0);
    for (const LabeledExample& ex : ds.examples) {
        const double z = ex.label * forward(p, ex.seq);
        const double contrib = ex.weight * logistic_j(z);
        out.per_length[static_cast<size_t>(ex.seq.length())] += contrib;
        tag_loss[static_cast<size_t>(ex.tag)] += contrib;
    }
    for (size_t L = 1; L < out.per_length.size(); ++L) out.total += out.per_length[L];
    if (ds.task == Task::parity_cot) {
        out.cot_component = tag_loss[static_cast<size_t>(TaskTag::cot_step)];
        out.reg_component = tag_loss[static_cast<size_t>(TaskTag::even_pairs)];
    }
    return out;
}

GradientPair loss_gradients(const ModelParams& p, const TaskDataset& ds) {
    check_dataset(p, ds);
    GradientPair g;
    g.u.assign(static_cast<size_t>(p.d), 0.0);
    g.W = Matrix(p.d, p.d);

    for (const LabeledExample& ex : ds.examples) {
        const int L = ex.seq.length();
        const Vec phi = attention_weights(p, ex.seq);

        // Model output for this example, reusing the attention weights.
        double T = 0.0;
        for (int pos = 1; pos <= L; ++pos) {
            T += p.u[static_cast<size_t>(embedding_index(pos, ex.seq.at(pos)))] *
                 phi[static_cast<size_t>(pos - 1)];
        }

        const double jp = j_prime(ex.label, T);
        const double coeff = ex.weight * jp * ex.label;
        const double wscale = coeff / p.lambda;
        const int col = embedding_index(L, ex.seq.last());

        // d/du: coeff * sum_l phi_l x_l.
        // d/dW: (coeff/lambda) * sum_l phi_l (<u,x_l> - T) x_l x_L^T, i.e. an
        // update confined to this example's rows and its last-token column.
        for (int pos = 1; pos <= L; ++pos) {
            const int row = embedding_index(pos, ex.seq.at(pos));
            const double ph = phi[static_cast<size_t>(pos - 1)];
            g.u[static_cast<size_t>(row)] += coeff * ph;
            g.W(row, col) += wscale * ph * (p.u[static_cast<size_t>(row)] - T);
        }
    }
    return g;
}

Vec grad_u(const ModelParams& p, const TaskDataset& ds) {
    return loss_gradients(p, ds).u;
}

Matrix grad_W(const ModelParams& p, const TaskDataset& ds) {
    return loss_gradients(p, ds).W;
}

GradientPair fd_gradient(const ModelParams& p, const TaskDataset& ds, double h) {
    check_dataset(p, ds);
    if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
    GradientPair g;
    g.u.assign(static_cast<size_t>(p.d), 0.0);
    g.W = Matrix(p.d, p.d);

    ModelParams probe = p;
    for (int i = 0; i < p.d; ++i) {
        probe.u[static_cast<size_t>(i)] = p.u[static_cast<size_t>(i)] + h;
        const double hi = logistic_loss(probe, ds).total;
        probe.u[static_cast<size_t>(i)] = p.u[static_cast<size_t>(i)] - h;
        const double lo = logistic_loss(probe, ds).total;
        probe.u[static_cast<size_t>(i)] = p.u[static_cast<size_t>(i)];
        g.u[static_cast<size_t>(i)] = (hi - lo) / (2.0 * h);
    }
    for (int r = 0; r < p.d; ++r) {
        for (int c = 0; c < p.d; ++c) {
            probe.W(r, c) = p.W(r, c) + h;
            const double hi = logistic_loss(probe, ds).total;
            probe.W(r, c) = p.W(r, c) - h;
            const double lo = logistic_loss(probe, ds).total;
            probe.W(r, c) = p.W(r, c);
            g.W(r, c) = (hi - lo) / (2.0 * h);
        }
    }
    return g;
}

double max_gradient_discrepancy(const GradientPair& a, const GradientPair& b) {
    if (a.u.size() != b.u.size() || a.W.data.size() != b.W.data.size()) {
        throw std::invalid_argument("gradient shapes differ");
    }
    double worst = 0.0;
    auto visit = [&worst](double x, double y) {
        const double diff = std::fabs(x - y);
        if (diff <= kFdAbsFloor) return;
        const double rel = diff / std::max(std::fabs(x), std::fabs(y));
        if (rel > worst) worst = rel;
    };
    for (size_t i = 0; i < a.u.size(); ++i) visit(a.u[i], b.u[i]);
    for (size_t i = 0; i < a.W.data.size(); ++i) visit(a.W.data[i], b.W.data[i]);
    return worst;
}

}  // namespace attnlab
