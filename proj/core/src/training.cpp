#include "attnlab/training.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "attnlab/diagnostics.hpp"
#include "attnlab/maxmargin.hpp"
#include "attnlab/trajectory.hpp"

namespace attnlab {

ModelParams init_params(const TrainConfig& cfg) {
    cfg.validate();
    return ModelParams::zeros(cfg.d(), cfg.lambda);
}

void train_step(ModelParams& p, const TaskDataset& ds, const TrainConfig& cfg, long t) {
    const GradientPair g = loss_gradients(p, ds);
    const double eta_w = (cfg.schedule == Schedule::two_phase && t < cfg.t0)
                             ? cfg.eta * cfg.lambda
                             : cfg.eta;
    axpy(p.u, -cfg.eta, g.u);
    axpy(p.W, -eta_w, g.W);
}

Trajectory train(const TrainConfig& cfg) {
    cfg.validate();
    const TaskDataset ds = cfg.build_dataset();
    ModelParams p = init_params(cfg);

    Trajectory traj;
    traj.config = cfg;
    const std::vector<long> snaps = snapshot_steps(cfg);
    traj.records.reserve(snaps.size());
    traj.checkpoints.reserve(snaps.size());

    std::optional<Matrix> w_t0;  // drift reference, captured at the t0 snapshot
    size_t next = 0;
    for (long t = 0; t <= cfg.total_steps; ++t) {
        if (next < snaps.size() && snaps[next] == t) {
            if (t == cfg.t0) {
                w_t0 = p.W;
                try {
                    traj.u_star = solve_max_margin(pool_dataset(p, ds)).u_star;
                } catch (const std::exception&) {
                    // Leave the alignment column empty; the separability
                    // report surfaces the reason.
                }
            }
            MetricRecord r = make_record(p, ds, cfg, t,
                                         w_t0 ? &*w_t0 : nullptr,
                                         traj.u_star.empty() ? nullptr : &traj.u_star);
            if (!std::isfinite(r.loss) || r.loss > 1e6) {
                throw std::runtime_error("loss diverged at step " + std::to_string(t) +
                                         " (loss=" + std::to_string(r.loss) + ")");
            }
            traj.records.push_back(r);
            traj.checkpoints.emplace_back(t, p);
            ++next;
        }
        if (t < cfg.total_steps) train_step(p, ds, cfg, t);
    }

    if (!cfg.out_dir.empty()) save_run_dir(traj, cfg.out_dir);
    return traj;
}

std::pair<double, double> parity_loss_components(const ModelParams& p,
                                                 const TaskDataset& ds) {
    if (ds.task != Task::parity_cot) {
        throw std::invalid_argument("loss components split requires a parity_cot dataset");
    }
    const LossBreakdown loss = logistic_loss(p, ds);
    return {loss.cot_component, loss.reg_component};
}

}  // namespace attnlab
