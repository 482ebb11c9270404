#pragma once

// Run configuration. The on-disk form is a flat JSON object with exactly the
// keys {task, l_max, l0, eta, lambda, t0, total_steps, schedule,
// snapshot_every, out_dir}; "task" is required, everything else defaults to
// the reference setup (eta=0.1, lambda=2, t0=100, total_steps=5000, l_max=6,
// l0=4, snapshot_every=10, two-phase schedule). Unknown keys are rejected.

#include <string>
#include <vector>

#include "attnlab/sequences.hpp"

namespace attnlab {

// two_phase: u always steps with eta; W steps with eta*lambda before t0 and
// eta afterwards. vanilla: both parameters always step with eta.
enum class Schedule : uint8_t { two_phase, vanilla };

std::string to_string(Schedule s);
Schedule schedule_from_string(const std::string& s);

struct TrainConfig {
    Task task = Task::even_pairs;
    int l_max = 6;
    int l0 = 4;
    double eta = 0.1;
    double lambda = 2.0;
    long t0 = 100;
    long total_steps = 5000;
    Schedule schedule = Schedule::two_phase;
    long snapshot_every = 10;
    std::string out_dir;

    // Embedding dimension implied by the task: 2*l_max for even pairs,
    // 2*(2*l0 - 1) for parity (long enough for a full reasoning chain).
    int d() const;
    int max_length() const;

    // Throws std::invalid_argument naming the offending field.
    void validate() const;

    TaskDataset build_dataset() const;
};

// Strict parse: missing "task", unknown keys, or out-of-range values all
// throw std::invalid_argument with the field name. An empty file is treated
// as an empty object (so the error is the missing "task" key).
TrainConfig parse_train_config(const std::string& json_text);
TrainConfig load_train_config(const std::string& path);

// Canonical serialized form (sorted keys, full-precision floats); writing
// this next to a run's outputs makes the run self-describing.
std::string config_json(const TrainConfig& cfg);

// All steps at which metrics and checkpoints are recorded: multiples of
// snapshot_every, plus 0, t0 and total_steps, sorted and deduplicated.
std::vector<long> snapshot_steps(const TrainConfig& cfg);

}  // namespace attnlab
