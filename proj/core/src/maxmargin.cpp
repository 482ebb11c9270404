#include "attnlab/maxmargin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace attnlab {

PooledDataset pool_dataset(const ModelParams& p, const TaskDataset& ds) {
    if (ds.d != p.d) throw std::invalid_argument("pooling: dataset/model dimension mismatch");
    PooledDataset pooled;
    pooled.d = p.d;
    pooled.points.reserve(ds.examples.size());
    for (const LabeledExample& ex : ds.examples) {
        const Vec phi = attention_weights(p, ex.seq);
        PooledPoint pt;
        pt.v.assign(static_cast<size_t>(p.d), 0.0);
        for (int pos = 1; pos <= ex.seq.length(); ++pos) {
            pt.v[static_cast<size_t>(embedding_index(pos, ex.seq.at(pos)))] =
                phi[static_cast<size_t>(pos - 1)];
        }
        pt.label = ex.label;
        pt.length = ex.seq.length();
        pooled.points.push_back(std::move(pt));
    }
    return pooled;
}

double min_functional_margin(const PooledDataset& pooled, const Vec& u) {
    if (pooled.points.empty()) throw std::invalid_argument("empty pooled dataset");
    double lo = pooled.points.front().label * dot(u, pooled.points.front().v);
    for (const PooledPoint& pt : pooled.points) {
        const double m = pt.label * dot(u, pt.v);
        if (m < lo) lo = m;
    }
    return lo;
}

bool is_separable_by(const PooledDataset& pooled, const Vec& u) {
    return min_functional_margin(pooled, u) > 0.0;
}

namespace {

// Weights below this after a line-search step are treated as zero and their
// points leave the corral.
constexpr double kDropWeight = 1e-14;

// Affine least-norm step of Wolfe's method: minimize ||sum_i mu_i z_i||^2
// subject to sum_i mu_i = 1 over the corral, dropping the nonnegativity
// constraints. The optimality conditions form the bordered Gram system
// [G 1; 1^T 0][mu; nu] = [0; 1], solved here by Gauss-Jordan elimination
// with partial pivoting. Returns false if a pivot vanishes (the corral lost
// affine independence to roundoff).
bool affine_min_norm(const std::vector<Vec>& z, const std::vector<size_t>& corral,
                     Vec& mu) {
    const size_t k = corral.size();
    Matrix sys(static_cast<int>(k + 1), static_cast<int>(k + 2));  // augmented
    for (size_t i = 0; i < k; ++i) {
        for (size_t j = 0; j < k; ++j) {
            sys(static_cast<int>(i), static_cast<int>(j)) = dot(z[corral[i]], z[corral[j]]);
        }
        sys(static_cast<int>(i), static_cast<int>(k)) = 1.0;
        sys(static_cast<int>(i), static_cast<int>(k + 1)) = 0.0;
    }
    for (size_t j = 0; j < k; ++j) sys(static_cast<int>(k), static_cast<int>(j)) = 1.0;
    sys(static_cast<int>(k), static_cast<int>(k)) = 0.0;
    sys(static_cast<int>(k), static_cast<int>(k + 1)) = 1.0;

    const size_t m = k + 1;
    for (size_t col = 0; col < m; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < m; ++r) {
            if (std::fabs(sys(static_cast<int>(r), static_cast<int>(col))) >
                std::fabs(sys(static_cast<int>(piv), static_cast<int>(col)))) {
                piv = r;
            }
        }
        if (std::fabs(sys(static_cast<int>(piv), static_cast<int>(col))) < 1e-14) return false;
        if (piv != col) {
            for (size_t c = 0; c <= m; ++c) {
                std::swap(sys(static_cast<int>(piv), static_cast<int>(c)),
                          sys(static_cast<int>(col), static_cast<int>(c)));
            }
        }
        for (size_t r = 0; r < m; ++r) {
            if (r == col) continue;
            const double f = sys(static_cast<int>(r), static_cast<int>(col)) /
                             sys(static_cast<int>(col), static_cast<int>(col));
            if (f == 0.0) continue;
            for (size_t c = col; c <= m; ++c) {
                sys(static_cast<int>(r), static_cast<int>(c)) -=
                    f * sys(static_cast<int>(col), static_cast<int>(c));
            }
        }
    }
    mu.assign(k, 0.0);
    for (size_t i = 0; i < k; ++i) {
        mu[i] = sys(static_cast<int>(i), static_cast<int>(m)) /
                sys(static_cast<int>(i), static_cast<int>(i));
    }
    return true;
}

}  // namespace

MarginSolution solve_max_margin(const PooledDataset& pooled, double tol, long max_updates) {
    const size_t n = pooled.points.size();
    if (n == 0) throw std::invalid_argument("empty pooled dataset");
    const size_t d = static_cast<size_t>(pooled.d);

    // Signed points z_n = y_n v_n. By minimax duality the maximal geometric
    // margin equals the distance from the origin to conv{z_n}, and the
    // least-norm hull point p gives the separator u* = p / ||p||^2 in the
    // functional-margin-1 normalization.
    std::vector<Vec> z(n);
    for (size_t i = 0; i < n; ++i) {
        if (!(dot(pooled.points[i].v, pooled.points[i].v) > 0.0)) {
            throw std::invalid_argument("pooled point with zero norm");
        }
        z[i].assign(d, 0.0);
        axpy(z[i], static_cast<double>(pooled.points[i].label), pooled.points[i].v);
    }

    // Wolfe's min-norm-point algorithm: grow a corral of hull vertices, pull
    // the affine optimum back into the simplex, repeat until no vertex lies
    // below the supporting hyperplane through p.
    std::vector<size_t> corral;
    Vec lambda;     // simplex weights over the corral
    Vec p(d, 0.0);  // current hull point, sum_i lambda_i z[corral[i]]

    size_t start = 0;
    for (size_t i = 1; i < n; ++i) {
        if (dot(z[i], z[i]) < dot(z[start], z[start])) start = i;
    }
    corral.push_back(start);
    lambda.assign(1, 1.0);
    p = z[start];

    auto rebuild_p = [&] {
        std::fill(p.begin(), p.end(), 0.0);
        for (size_t i = 0; i < corral.size(); ++i) axpy(p, lambda[i], z[corral[i]]);
    };

    long updates = 0;
    bool stalled = false;
    while (true) {
        const double psq = dot(p, p);
        if (psq <= kHullNonSepTol * kHullNonSepTol) {
            throw NonSeparableError("origin lies within " +
                                    std::to_string(std::sqrt(std::max(psq, 0.0))) +
                                    " of the hull of signed points; no separating "
                                    "direction exists");
        }
        // Most violating vertex (first index wins ties, keeping runs stable).
        size_t j = 0;
        double min_dot = dot(p, z[0]);
        for (size_t i = 1; i < n; ++i) {
            const double s = dot(p, z[i]);
            if (s < min_dot) {
                min_dot = s;
                j = i;
            }
        }
        // At the optimum every vertex satisfies <p, z> >= ||p||^2; the slack
        // divided by ||p||^2 is exactly the feasibility residual of u*.
        if (min_dot >= psq - tol * psq) break;
        if (stalled) break;  // minor cycle could not improve further
        bool in_corral = false;
        for (size_t idx : corral) {
            if (idx == j) {
                in_corral = true;
                break;
            }
        }
        if (in_corral) break;  // roundoff: best vertex is already inside

        corral.push_back(j);
        lambda.push_back(0.0);

        // Minor cycle: step toward the affine optimum, shedding points whose
        // weight hits zero, until the optimum is feasible for the simplex.
        while (true) {
            if (updates >= max_updates) {
                throw std::runtime_error("max-margin solver did not converge within " +
                                         std::to_string(max_updates) + " updates");
            }
            ++updates;
            Vec mu;
            if (!affine_min_norm(z, corral, mu)) {
                stalled = true;
                break;
            }
            bool interior = true;
            for (double m : mu) {
                if (m <= 0.0) {
                    interior = false;
                    break;
                }
            }
            if (interior) {
                lambda = mu;
                break;
            }
            double theta = 1.0;
            for (size_t i = 0; i < corral.size(); ++i) {
                if (mu[i] <= 0.0) theta = std::min(theta, lambda[i] / (lambda[i] - mu[i]));
            }
            if (!(theta > 0.0)) {  // no movement possible (degenerate step)
                stalled = true;
                break;
            }
            for (size_t i = 0; i < corral.size(); ++i) {
                lambda[i] = (1.0 - theta) * lambda[i] + theta * mu[i];
            }
            size_t keep = 0;
            for (size_t i = 0; i < corral.size(); ++i) {
                if (lambda[i] > kDropWeight) {
                    corral[keep] = corral[i];
                    lambda[keep] = lambda[i];
                    ++keep;
                }
            }
            corral.resize(keep);
            lambda.resize(keep);
        }
        rebuild_p();
    }

    // Assemble the separator from the dual weights alpha = lambda / ||p||^2 in
    // ascending point order so the stationarity residual measures the returned
    // vector, not an incremental iterate.
    const double psq = dot(p, p);
    MarginSolution sol;
    sol.alpha.assign(n, 0.0);
    for (size_t i = 0; i < corral.size(); ++i) sol.alpha[corral[i]] = lambda[i] / psq;
    sol.u_star.assign(d, 0.0);
    for (size_t i = 0; i < n; ++i) {
        if (sol.alpha[i] != 0.0) axpy(sol.u_star, sol.alpha[i], z[i]);
    }
    sol.margin = 1.0 / norm2(sol.u_star);
    for (size_t i = 0; i < n; ++i) {
        if (sol.alpha[i] > 1e-9) sol.support_indices.push_back(static_cast<int>(i));
    }
    double min_margin = 0.0;
    double comp = 0.0;
    double alpha_mass = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double margin = pooled.points[i].label * dot(sol.u_star, pooled.points[i].v);
        if (i == 0 || margin < min_margin) min_margin = margin;
        comp = std::max(comp, sol.alpha[i] * std::fabs(margin - 1.0));
        alpha_mass += sol.alpha[i];
    }
    sol.kkt_feasibility = std::max(0.0, 1.0 - min_margin);
    sol.kkt_complementarity = comp / std::max(1.0, alpha_mass);
    // Stationarity against a freshly accumulated sum, in the same fixed order.
    Vec s(d, 0.0);
    for (size_t i = 0; i < n; ++i) {
        if (sol.alpha[i] != 0.0) axpy(s, sol.alpha[i], z[i]);
    }
    double drift = 0.0;
    for (size_t i = 0; i < d; ++i) {
        const double diff = sol.u_star[i] - s[i];
        drift += diff * diff;
    }
    sol.kkt_stationarity = std::sqrt(drift);
    sol.updates = updates;
    return sol;
}

namespace {

// Least-norm u with y_i <u, v_i> = 1 on the subset: solve the Gram system
// G beta = 1, u = sum beta_i y_i v_i. Returns false if G is singular.
bool solve_subset(const PooledDataset& pooled, const std::vector<int>& subset, Vec& u,
                  Vec& beta) {
    const size_t k = subset.size();
    const size_t d = static_cast<size_t>(pooled.d);
    Matrix g(static_cast<int>(k), static_cast<int>(k + 1));  // augmented [G | 1]
    for (size_t i = 0; i < k; ++i) {
        const PooledPoint& a = pooled.points[static_cast<size_t>(subset[i])];
        for (size_t j = 0; j < k; ++j) {
            const PooledPoint& b = pooled.points[static_cast<size_t>(subset[j])];
            g(static_cast<int>(i), static_cast<int>(j)) = a.label * b.label * dot(a.v, b.v);
        }
        g(static_cast<int>(i), static_cast<int>(k)) = 1.0;
    }
    // Gaussian elimination with partial pivoting.
    for (size_t col = 0; col < k; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < k; ++r) {
            if (std::fabs(g(static_cast<int>(r), static_cast<int>(col))) >
                std::fabs(g(static_cast<int>(piv), static_cast<int>(col)))) {
                piv = r;
            }
        }
        if (std::fabs(g(static_cast<int>(piv), static_cast<int>(col))) < 1e-12) return false;
        if (piv != col) {
            for (size_t c = 0; c <= k; ++c) {
                std::swap(g(static_cast<int>(piv), static_cast<int>(c)),
                          g(static_cast<int>(col), static_cast<int>(c)));
            }
        }
        for (size_t r = 0; r < k; ++r) {
            if (r == col) continue;
            const double f = g(static_cast<int>(r), static_cast<int>(col)) /
                             g(static_cast<int>(col), static_cast<int>(col));
            if (f == 0.0) continue;
            for (size_t c = col; c <= k; ++c) {
                g(static_cast<int>(r), static_cast<int>(c)) -=
                    f * g(static_cast<int>(col), static_cast<int>(c));
            }
        }
    }
    beta.assign(k, 0.0);
    for (size_t i = 0; i < k; ++i) {
        beta[i] = g(static_cast<int>(i), static_cast<int>(k)) /
                  g(static_cast<int>(i), static_cast<int>(i));
    }
    u.assign(d, 0.0);
    for (size_t i = 0; i < k; ++i) {
        const PooledPoint& pt = pooled.points[static_cast<size_t>(subset[i])];
        axpy(u, beta[i] * pt.label, pt.v);
    }
    return true;
}

}  // namespace

MarginSolution support_subset_oracle(const PooledDataset& pooled, int max_points) {
    const int n = static_cast<int>(pooled.points.size());
    if (n == 0) throw std::invalid_argument("empty pooled dataset");
    if (n > max_points) {
        throw std::invalid_argument("oracle limited to " + std::to_string(max_points) +
                                    " points, got " + std::to_string(n));
    }
    const int max_size = std::min(n, pooled.d + 1);

    bool found = false;
    double best_sqnorm = 0.0;
    Vec best_u;
    Vec best_beta;
    std::vector<int> best_subset;

    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) > max_size) continue;
        std::vector<int> subset;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) subset.push_back(i);
        }
        Vec u, beta;
        if (!solve_subset(pooled, subset, u, beta)) continue;
        if (min_functional_margin(pooled, u) < 1.0 - 1e-9) continue;
        const double sq = dot(u, u);
        if (!found || sq < best_sqnorm) {
            found = true;
            best_sqnorm = sq;
            best_u = std::move(u);
            best_beta = std::move(beta);
            best_subset = std::move(subset);
        }
    }
    if (!found) {
        throw NonSeparableError("oracle found no feasible separating direction");
    }

    MarginSolution sol;
    sol.u_star = best_u;
    sol.margin = 1.0 / std::sqrt(best_sqnorm);
    sol.alpha.assign(static_cast<size_t>(n), 0.0);
    for (size_t i = 0; i < best_subset.size(); ++i) {
        sol.alpha[static_cast<size_t>(best_subset[i])] = best_beta[i];
        if (best_beta[i] > 1e-9) sol.support_indices.push_back(best_subset[i]);
    }
    sol.kkt_feasibility = std::max(0.0, 1.0 - min_functional_margin(pooled, best_u));
    double comp = 0.0;
    double alpha_mass = 0.0;
    for (int i = 0; i < n; ++i) {
        const PooledPoint& pt = pooled.points[static_cast<size_t>(i)];
        comp = std::max(comp, sol.alpha[static_cast<size_t>(i)] *
                                  std::fabs(pt.label * dot(best_u, pt.v) - 1.0));
        alpha_mass += sol.alpha[static_cast<size_t>(i)];
    }
    sol.kkt_complementarity = comp / std::max(1.0, alpha_mass);
    sol.kkt_stationarity = 0.0;  // u is assembled from the dual coefficients
    return sol;
}

double alignment(const Vec& u, const Vec& u_star) { return cosine(u, u_star); }

}  // namespace attnlab
