#pragma once

// Full-batch gradient descent from zero initialization under the two-phase
// (or vanilla) schedule, with deterministic snapshotting. Training is fully
// sequential and iteration order is fixed, so two runs of the same config
// produce byte-identical artifacts.

#include <utility>

#include "attnlab/config.hpp"
#include "attnlab/gradients.hpp"
#include "attnlab/trajectory.hpp"

namespace attnlab {

ModelParams init_params(const TrainConfig& cfg);

// One gradient-descent update at step index t (0-based: the update taking
// params_t to params_{t+1}).
void train_step(ModelParams& p, const TaskDataset& ds, const TrainConfig& cfg, long t);

// Runs the configured schedule, recording metrics and checkpoints at every
// snapshot step. Solves the pooled max-margin problem once the t0 checkpoint
// exists and records alignment from then on; a failed solve leaves the
// alignment column empty rather than aborting the run. If cfg.out_dir is
// nonempty the run directory is written on completion. Throws
// std::runtime_error if the loss diverges (non-finite or > 1e6).
Trajectory train(const TrainConfig& cfg);

// (chain-of-thought block, short-sequence block) of the loss; requires a
// parity_cot dataset.
std::pair<double, double> parity_loss_components(const ModelParams& p,
                                                 const TaskDataset& ds);

}  // namespace attnlab
