#pragma once

// Mechanical verification of the predicted training dynamics on a stored
// trajectory:
//
//   phase 1      sign/ordering structure of token scores and attention gaps
//                at the end of the first phase
//   phase 2      logarithmic norm growth, alignment with the max-margin
//                direction, loss decay rate, bounded attention drift
//   separability pooled data at t0 is linearly separable with a certified
//                max-margin solution
//   symmetry     exact a/b exchange invariants at every snapshot
//
// Every check carries its measured value; a check that cannot fire yet (e.g.
// attention gaps while W is still zero) reports "indeterminate" rather than
// "fail" so early-trajectory probes are distinguishable from violations.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "attnlab/maxmargin.hpp"
#include "attnlab/trajectory.hpp"

namespace attnlab {

enum class CheckStatus : uint8_t { pass, fail, indeterminate };

struct TheoryCheck {
    std::string name;
    CheckStatus status = CheckStatus::indeterminate;
    double measured = 0.0;
    std::string detail;
};

struct TheoryReport {
    std::string name;
    std::vector<TheoryCheck> checks;
    bool passed() const;
    const TheoryCheck* find(const std::string& check_name) const;
};

std::string report_json(const TheoryReport& report);
std::string report_json(const std::vector<TheoryReport>& reports);

// ---- tolerances shared by reports, unit tests and the acceptance suite ----
inline constexpr double kSymmetryTol = 1e-12;     // exact-invariant drift budget
inline constexpr double kGapFloor = 1e-10;        // strict positivity floor
inline constexpr double kAlignDipPerStep = 1e-3;  // allowed alignment dip per step
inline constexpr double kIncrementSpread = 0.30;   // log-growth window agreement
inline constexpr double kLossDecayFactor = 0.75;   // loss(4t) <= factor * loss(t)
inline constexpr double kDriftDoublingMax = 1.5;   // drift(T) / drift(T/2) cap
inline constexpr double kFinalAlignMin = 0.95;
inline constexpr int kDecelStreak = 20;            // snapshot intervals defining t2

// Metric row for one parameter state. w_ref is the t0 attention matrix (drift
// reference) and u_star the margin direction; either may be null when not yet
// available.
MetricRecord make_record(const ModelParams& p, const TaskDataset& ds,
                         const TrainConfig& cfg, long t, const Matrix* w_ref,
                         const Vec* u_star);

// Onset of the slow-growth regime: the attention freeze makes ||u_t|| shoot
// up in a hump right after t0, then settle into decelerating (logarithmic)
// growth.  Returns the first snapshot step after t0 at which the per-snapshot
// increment of ||u_t|| has strictly decreased, while staying positive, for
// kDecelStreak consecutive snapshot intervals; nullopt if no such streak
// exists (norm frozen or still accelerating).
std::optional<long> detect_t2(const Trajectory& traj);

// Alignment lower bound 1 - (1/(6||u*||) - 1/||u_t||)^2 / 2 implied by the
// phase-2 analysis.
double alignment_lower_bound(double u_star_norm, double u_norm);

// Sign/ordering checks evaluated on one parameter state (normally the t0
// checkpoint). Exposed separately so tests can probe early steps.
std::vector<TheoryCheck> phase1_parameter_checks(const ModelParams& p,
                                                 const TrainConfig& cfg);

TheoryReport phase1_report(const Trajectory& traj);
TheoryReport phase2_report(const Trajectory& traj);
TheoryReport separability_report(const Trajectory& traj);
TheoryReport symmetry_report(const Trajectory& traj);

// Largest symmetry violation of a single parameter state.
double max_symmetry_violation(const ModelParams& p, const TrainConfig& cfg);

}  // namespace attnlab
