#pragma once

// Training trajectories: per-snapshot metric records plus full parameter
// checkpoints, with a CSV/JSON disk layout designed for bit-identical
// reproduction (identical configs must produce byte-identical run artifacts).

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "attnlab/config.hpp"
#include "attnlab/model.hpp"

namespace attnlab {

// One row of metrics.csv. Fields that do not apply (chain-of-thought split on
// an even-pairs run, drift before t0, alignment before the margin direction
// exists) stay disengaged and serialize as empty cells.
struct MetricRecord {
    long t = 0;
    double loss = 0.0;
    std::optional<double> loss_cot;
    std::optional<double> loss_reg;
    double ts1 = 0.0;                 // <u, E_1^a>
    std::optional<double> ts2;        // <u, E_2^a>
    std::optional<double> ts3;        // <u, E_3^a>
    double u_norm = 0.0;
    std::optional<double> w_drift;    // ||W_t - W_{t0}||_F, for t >= t0
    double phi1_pos = 0.0;            // phi_1 on the all-a probe
    double phi1_neg = 0.0;            // phi_1 on the b-then-a probe
    std::optional<double> phi_l0;     // phi_{l0 position} on the length-(l0+1) probe
    std::optional<double> align;      // cos(u_t, u_star), once u_star is known
};

inline constexpr const char* kMetricsCsvHeader =
    "t,loss,loss_cot,loss_reg,ts1,ts2,ts3,u_norm,w_drift,phi1_pos,phi1_neg,phi_l0,align";

struct Trajectory {
    TrainConfig config;
    std::vector<MetricRecord> records;
    std::vector<std::pair<long, ModelParams>> checkpoints;
    // Max-margin direction solved from the pooled dataset at the t0
    // checkpoint. Populated during training; empty when a trajectory is
    // loaded from disk (reports re-solve it on demand).
    Vec u_star;

    const ModelParams* checkpoint_at(long step) const;
    const MetricRecord* record_at(long step) const;
};

std::string metrics_csv(const Trajectory& traj);
std::vector<MetricRecord> parse_metrics_csv(const std::string& text);
void export_csv(const Trajectory& traj, const std::string& path);

// Run directory layout: config-as-run.json, metrics.csv, ckpt_<step>.json for
// every snapshot step.
void save_run_dir(const Trajectory& traj, const std::string& dir);
Trajectory load_run_dir(const std::string& dir);

}  // namespace attnlab
