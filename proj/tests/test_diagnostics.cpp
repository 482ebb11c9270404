#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "attnlab/diagnostics.hpp"
#include "attnlab/training.hpp"

using namespace attnlab;

namespace {

const TheoryCheck* find_check(const std::vector<TheoryCheck>& checks, const std::string& name) {
    for (const TheoryCheck& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

// Idealized post-phase-1 trajectory: logarithmic norm growth, 1/t loss decay,
// high stable alignment, mildly growing attention drift. The margin direction
// is injected directly so the report does not need a solvable checkpoint.
Trajectory synthetic_phase2() {
    Trajectory traj;
    traj.config.task = Task::even_pairs;
    traj.config.l_max = 3;
    traj.config.t0 = 100;
    traj.config.total_steps = 4800;
    traj.config.snapshot_every = 50;
    traj.u_star = Vec{10.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    for (long t = 0; t <= 4800; t += 50) {
        MetricRecord r;
        r.t = t;
        r.loss = t == 0 ? 4.0 : 100.0 / static_cast<double>(t);
        r.u_norm = std::log2(1.0 + static_cast<double>(t) / 100.0);
        if (t >= 200) {
            r.align = 0.995;
            r.w_drift = 1e-3 * (1.0 + static_cast<double>(t) / 4800.0);
        }
        traj.records.push_back(r);
    }
    return traj;
}

// Parameters realizing every phase-1 ordering prediction for an even-pairs
// config with l_max = 3.
ModelParams good_even_params() {
    ModelParams p = ModelParams::zeros(6, 2.0);
    for (Token w : {Token::a, Token::b}) {
        p.u[embedding_index(1, w)] = 1.0;
        p.u[embedding_index(2, w)] = -0.5;
        p.u[embedding_index(3, w)] = -0.2;
        for (int L = 2; L <= 3; ++L) {
            p.W(embedding_index(1, w), embedding_index(L, w)) = 2.0;
            p.W(embedding_index(1, flip(w)), embedding_index(L, w)) = -2.0;
        }
        p.W(embedding_index(2, w), embedding_index(3, Token::a)) = 0.3;
        p.W(embedding_index(2, w), embedding_index(3, Token::b)) = 0.3;
        p.W(embedding_index(3, w), embedding_index(3, Token::a)) = -0.1;
        p.W(embedding_index(3, w), embedding_index(3, Token::b)) = -0.1;
    }
    return p;
}

// Same, for a parity config with l0 = 3 (horizon 5): lengths up to l0 follow
// the first-vs-last pattern, longer ones pivot at position L - l0 + 1 with
// the flipped token on top and the matching one at the bottom.
ModelParams good_parity_params() {
    ModelParams p = ModelParams::zeros(10, 2.0);
    for (Token w : {Token::a, Token::b}) {
        p.u[embedding_index(1, w)] = 1.0;
        p.u[embedding_index(2, w)] = -0.5;
        for (int l = 3; l <= 5; ++l) p.u[embedding_index(l, w)] = -0.2;

        for (int L = 2; L <= 3; ++L) {
            p.W(embedding_index(1, w), embedding_index(L, w)) = 2.0;
            p.W(embedding_index(1, flip(w)), embedding_index(L, w)) = -2.0;
        }
        p.W(embedding_index(2, w), embedding_index(3, Token::a)) = 0.3;
        p.W(embedding_index(2, w), embedding_index(3, Token::b)) = 0.3;
        p.W(embedding_index(3, w), embedding_index(3, Token::a)) = -0.1;
        p.W(embedding_index(3, w), embedding_index(3, Token::b)) = -0.1;

        for (int L = 4; L <= 5; ++L) {
            const int pivot = L - 3 + 1;
            p.W(embedding_index(pivot, flip(w)), embedding_index(L, w)) = 2.0;
            p.W(embedding_index(pivot, w), embedding_index(L, w)) = -2.0;
            // Interior rows carry the same score for both tokens; the row at
            // the column position only ever has its matching-token entry
            // written (the other one is never read and stays zero).
            p.W(embedding_index(1, Token::a), embedding_index(L, w)) = 0.3;
            p.W(embedding_index(1, Token::b), embedding_index(L, w)) = 0.3;
            for (int l = 2; l < L; ++l) {
                if (l == pivot) continue;
                p.W(embedding_index(l, Token::a), embedding_index(L, w)) = -0.1;
                p.W(embedding_index(l, Token::b), embedding_index(L, w)) = -0.1;
            }
            p.W(embedding_index(L, w), embedding_index(L, w)) = -0.1;
        }
    }
    return p;
}

}  // namespace

TEST_CASE("metrics csv header and round trip") {
    CHECK(std::string(kMetricsCsvHeader) ==
          "t,loss,loss_cot,loss_reg,ts1,ts2,ts3,u_norm,w_drift,phi1_pos,phi1_neg,phi_l0,align");

    Trajectory traj;
    traj.config.l_max = 3;
    MetricRecord sparse;
    sparse.t = 0;
    sparse.loss = 4.0;
    sparse.ts1 = -0.25;
    sparse.u_norm = 0.1;
    sparse.phi1_pos = 1.0 / 3.0;
    sparse.phi1_neg = 1.0 / 3.0;
    MetricRecord full;
    full.t = 230;
    full.loss = 1e-17;
    full.loss_cot = 0.1;
    full.loss_reg = -0.3;
    full.ts1 = 2.5;
    full.ts2 = -1.0;
    full.ts3 = 0.0;
    full.u_norm = 3.25;
    full.w_drift = 0.125;
    full.phi1_pos = 0.9;
    full.phi1_neg = 0.05;
    full.phi_l0 = 0.875;
    full.align = 0.99;
    traj.records = {sparse, full};

    const std::vector<MetricRecord> parsed = parse_metrics_csv(metrics_csv(traj));
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0].t == 0);
    CHECK(parsed[0].loss == 4.0);
    CHECK(!parsed[0].loss_cot.has_value());
    CHECK(!parsed[0].ts2.has_value());
    CHECK(!parsed[0].w_drift.has_value());
    CHECK(!parsed[0].align.has_value());
    CHECK(parsed[0].phi1_pos == 1.0 / 3.0);  // shortest round-trip floats are exact
    CHECK(parsed[1].t == 230);
    CHECK(parsed[1].loss == 1e-17);
    CHECK(parsed[1].loss_cot == 0.1);
    CHECK(parsed[1].loss_reg == -0.3);
    CHECK(parsed[1].ts2 == -1.0);
    CHECK(parsed[1].ts3 == 0.0);
    CHECK(parsed[1].w_drift == 0.125);
    CHECK(parsed[1].phi_l0 == 0.875);
    CHECK(parsed[1].align == 0.99);
}

TEST_CASE("records at the zero model hit the known baselines") {
    TrainConfig even;
    even.task = Task::even_pairs;
    const TaskDataset ds = even.build_dataset();
    const ModelParams p = ModelParams::zeros(even.d(), even.lambda);

    MetricRecord r = make_record(p, ds, even, 0, nullptr, nullptr);
    CHECK(r.t == 0);
    CHECK(r.loss == doctest::Approx(6.0 * std::log(2.0)).epsilon(1e-12));
    CHECK(!r.loss_cot.has_value());
    CHECK(r.ts1 == 0.0);
    CHECK(r.ts2 == 0.0);
    CHECK(r.ts3 == 0.0);
    CHECK(r.u_norm == 0.0);
    CHECK(!r.w_drift.has_value());
    CHECK(r.phi1_pos == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(r.phi1_neg == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(!r.phi_l0.has_value());
    CHECK(!r.align.has_value());

    // Drift against the parameters' own matrix is exactly zero; alignment
    // stays disengaged while u is the zero vector even if u_star is known.
    const Vec u_star{1.0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
    r = make_record(p, ds, even, 10, &p.W, &u_star);
    REQUIRE(r.w_drift.has_value());
    CHECK(*r.w_drift == 0.0);
    CHECK(!r.align.has_value());

    TrainConfig par;
    par.task = Task::parity_cot;
    const TaskDataset pds = par.build_dataset();
    ModelParams pp = ModelParams::zeros(par.d(), par.lambda);
    const MetricRecord pr = make_record(pp, pds, par, 0, nullptr, nullptr);
    CHECK(pr.loss == doctest::Approx(7.0 * std::log(2.0)).epsilon(1e-12));
    CHECK(pr.loss_cot == doctest::Approx(4.0 * std::log(2.0)).epsilon(1e-12));
    CHECK(pr.loss_reg == doctest::Approx(3.0 * std::log(2.0)).epsilon(1e-12));
    CHECK(pr.phi1_pos == doctest::Approx(1.0 / 5.0).epsilon(1e-15));
    REQUIRE(pr.phi_l0.has_value());
    CHECK(*pr.phi_l0 == doctest::Approx(1.0 / 5.0).epsilon(1e-15));

    // Alignment engages once u is nonzero.
    pp.u[0] = 1.0;
    Vec star(static_cast<size_t>(par.d()), 0.0);
    star[0] = 2.0;
    const MetricRecord ar = make_record(pp, pds, par, 0, nullptr, &star);
    REQUIRE(ar.align.has_value());
    CHECK(*ar.align == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("norm growth onset detection") {
    const Trajectory traj = synthetic_phase2();
    const std::optional<long> t2 = detect_t2(traj);
    REQUIRE(t2.has_value());
    // log2(1 + t/100) has shrinking increments throughout, so the decline
    // streak starts at the first comparable pair of post-t0 increments
    // (t = 200) and completes twenty snapshot steps of 50 later.
    CHECK(*t2 == 1150);

    // A frozen norm never produces a positive declining increment.
    Trajectory frozen = traj;
    for (MetricRecord& r : frozen.records) r.u_norm = 2.0;
    CHECK(!detect_t2(frozen).has_value());

    // A dip in the norm restarts the streak: the rebound increment is large,
    // so the decline has to re-establish itself afterwards.
    Trajectory dipped = traj;
    dipped.records[20].u_norm = 0.0;  // t = 1000
    const std::optional<long> t2d = detect_t2(dipped);
    REQUIRE(t2d.has_value());
    CHECK(*t2d == 2050);
}

TEST_CASE("alignment lower bound formula") {
    CHECK(alignment_lower_bound(10.0, 1.0) ==
          doctest::Approx(1.0 - 0.5 * (1.0 / 60.0 - 1.0) * (1.0 / 60.0 - 1.0)).epsilon(1e-15));
    CHECK(alignment_lower_bound(10.0, 1.0) == doctest::Approx(0.51652777).epsilon(1e-7));
    // Perfect agreement of the two scales gives a bound of exactly 1.
    CHECK(alignment_lower_bound(0.5, 3.0) == 1.0);
    CHECK_THROWS_AS(alignment_lower_bound(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(alignment_lower_bound(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("phase-1 checks on the zero model are indeterminate") {
    TrainConfig even;
    even.task = Task::even_pairs;
    even.l_max = 3;
    const ModelParams zero = ModelParams::zeros(even.d(), even.lambda);
    const std::vector<TheoryCheck> checks = phase1_parameter_checks(zero, even);
    CHECK(checks.size() == 7);
    for (const TheoryCheck& c : checks) {
        CHECK(c.status == CheckStatus::indeterminate);
        CHECK(c.measured == 0.0);
    }
    // L=3 has no interior rows between position 2 and the last position, so
    // no second_above_rest check is emitted for it.
    CHECK(find_check(checks, "attn_L3_second_above_rest") == nullptr);

    TrainConfig par;
    par.task = Task::parity_cot;
    par.l0 = 3;
    const ModelParams pzero = ModelParams::zeros(par.d(), par.lambda);
    const std::vector<TheoryCheck> pchecks = phase1_parameter_checks(pzero, par);
    CHECK(pchecks.size() == 11);
    CHECK(find_check(pchecks, "u_first_position_positive") != nullptr);
    CHECK(find_check(pchecks, "attn_L2_first_top") != nullptr);
    CHECK(find_check(pchecks, "attn_L4_l0_top") != nullptr);
    CHECK(find_check(pchecks, "attn_L5_l0_bottom") != nullptr);
    // Chain-of-thought columns carry only the pivot checks.
    CHECK(find_check(pchecks, "attn_L5_first_above_rest") == nullptr);
}

TEST_CASE("phase-1 checks pass on hand-built post-phase-1 parameters") {
    TrainConfig even;
    even.task = Task::even_pairs;
    even.l_max = 3;
    for (const TheoryCheck& c : phase1_parameter_checks(good_even_params(), even)) {
        INFO(c.name);
        CHECK(c.status == CheckStatus::pass);
    }

    TrainConfig par;
    par.task = Task::parity_cot;
    par.l0 = 3;
    for (const TheoryCheck& c : phase1_parameter_checks(good_parity_params(), par)) {
        INFO(c.name);
        CHECK(c.status == CheckStatus::pass);
    }
}

TEST_CASE("phase-1 checks flag sign violations") {
    TrainConfig even;
    even.task = Task::even_pairs;
    even.l_max = 3;
    ModelParams bad = good_even_params();
    bad.u[embedding_index(1, Token::a)] = -1.0;
    const std::vector<TheoryCheck> checks = phase1_parameter_checks(bad, even);
    const TheoryCheck* first = find_check(checks, "u_first_position_positive");
    REQUIRE(first != nullptr);
    CHECK(first->status == CheckStatus::fail);
    CHECK(first->measured == -1.0);
}

TEST_CASE("second-position ordering compares interior rows only") {
    TrainConfig cfg;
    cfg.task = Task::even_pairs;
    cfg.l_max = 4;

    ModelParams p = ModelParams::zeros(8, 2.0);
    for (Token w : {Token::a, Token::b}) {
        p.u[embedding_index(1, w)] = 1.0;
        p.u[embedding_index(2, w)] = -0.5;
        p.u[embedding_index(3, w)] = -0.2;
        p.u[embedding_index(4, w)] = -0.15;
        for (int L = 2; L <= 4; ++L) {
            p.W(embedding_index(1, w), embedding_index(L, w)) = 2.0;
            p.W(embedding_index(1, flip(w)), embedding_index(L, w)) = -2.0;
        }
        // Column 4: position 2 above the interior row 3, but the diagonal
        // entry at position 4 outscores position 2 — which is exactly the
        // configuration trained runs land in, and must not count against
        // the ordering.
        p.W(embedding_index(2, Token::a), embedding_index(4, w)) = 0.3;
        p.W(embedding_index(2, Token::b), embedding_index(4, w)) = 0.3;
        p.W(embedding_index(3, Token::a), embedding_index(4, w)) = 0.1;
        p.W(embedding_index(3, Token::b), embedding_index(4, w)) = 0.1;
        p.W(embedding_index(4, w), embedding_index(4, w)) = 0.5;
    }

    const std::vector<TheoryCheck> checks = phase1_parameter_checks(p, cfg);
    for (const TheoryCheck& c : checks) {
        INFO(c.name << " measured=" << c.measured);
        CHECK(c.status == CheckStatus::pass);
    }
    const TheoryCheck* sec = find_check(checks, "attn_L4_second_above_rest");
    REQUIRE(sec != nullptr);
    CHECK(sec->measured == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(find_check(checks, "attn_L3_second_above_rest") == nullptr);

    // An interior row overtaking position 2 is still a violation.
    ModelParams bad = p;
    for (Token w : {Token::a, Token::b}) {
        bad.W(embedding_index(3, Token::a), embedding_index(4, w)) = 0.4;
        bad.W(embedding_index(3, Token::b), embedding_index(4, w)) = 0.4;
    }
    const std::vector<TheoryCheck> bchecks = phase1_parameter_checks(bad, cfg);
    const TheoryCheck* bsec = find_check(bchecks, "attn_L4_second_above_rest");
    REQUIRE(bsec != nullptr);
    CHECK(bsec->status == CheckStatus::fail);
    CHECK(bsec->measured == doctest::Approx(-0.1).epsilon(1e-12));
}

TEST_CASE("phase-1 report needs the t0 checkpoint and a rising ts1 tail") {
    TrainConfig cfg;
    cfg.task = Task::even_pairs;
    cfg.l_max = 3;
    cfg.t0 = 20;
    cfg.total_steps = 20;
    cfg.snapshot_every = 5;

    Trajectory traj;
    traj.config = cfg;
    for (long t = 0; t <= 20; t += 5) {
        MetricRecord r;
        r.t = t;
        r.ts1 = 1e-3 * static_cast<double>(t);
        traj.records.push_back(r);
    }
    traj.checkpoints.emplace_back(20, good_even_params());

    const TheoryReport report = phase1_report(traj);
    CHECK(report.passed());
    const TheoryCheck* tail = report.find("ts1_increasing_late_phase1");
    REQUIRE(tail != nullptr);
    CHECK(tail->status == CheckStatus::pass);
    CHECK(tail->measured == doctest::Approx(5e-3).epsilon(1e-12));

    Trajectory empty;
    empty.config = cfg;
    const TheoryReport missing = phase1_report(empty);
    CHECK(!missing.passed());
    REQUIRE(missing.checks.size() == 1);
    CHECK(missing.checks[0].name == "t0_checkpoint_present");
    CHECK(missing.checks[0].status == CheckStatus::fail);
}

TEST_CASE("phase-2 report accepts the idealized trajectory") {
    const TheoryReport report = phase2_report(synthetic_phase2());
    for (const TheoryCheck& c : report.checks) {
        INFO(c.name << " measured=" << c.measured << " detail=" << c.detail);
        CHECK(c.status == CheckStatus::pass);
    }
    CHECK(report.passed());

    const TheoryCheck* growth = report.find("norm_log_growth");
    REQUIRE(growth != nullptr);
    // Windows anchor at t_a = 1200; doubling increments log2(25/13) and
    // log2(49/25) agree to ~3%.
    CHECK(growth->measured == doctest::Approx(0.02826).epsilon(0.01));
    const TheoryCheck* decay = report.find("loss_quarter_decay");
    REQUIRE(decay != nullptr);
    CHECK(decay->measured == doctest::Approx(0.25).epsilon(1e-12));
    const TheoryCheck* drift = report.find("w_drift_bounded");
    REQUIRE(drift != nullptr);
    // drift 2e-3 at t = 4800 over 1.5e-3 at t = 2400.
    CHECK(drift->measured == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
    CHECK(drift->measured < kDriftDoublingMax);
}

TEST_CASE("phase-2 report rejects broken dynamics") {
    const Trajectory good = synthetic_phase2();

    Trajectory frozen = good;
    for (MetricRecord& r : frozen.records) r.u_norm = 2.0;
    const TheoryReport fr = phase2_report(frozen);
    CHECK(!fr.passed());
    REQUIRE(fr.find("norm_log_growth") != nullptr);
    CHECK(fr.find("norm_log_growth")->status == CheckStatus::fail);
    CHECK(fr.find("loss_quarter_decay")->status == CheckStatus::indeterminate);

    Trajectory plateau = good;
    for (MetricRecord& r : plateau.records) {
        if (r.t > 0) r.loss = 3.0;
    }
    const TheoryReport pr = phase2_report(plateau);
    REQUIRE(pr.find("loss_quarter_decay") != nullptr);
    CHECK(pr.find("loss_quarter_decay")->status == CheckStatus::fail);
    CHECK(pr.find("loss_quarter_decay")->measured == doctest::Approx(1.0).epsilon(1e-12));

    Trajectory dip = good;
    dip.records[60].align = 0.5;  // t = 3000, recovers by 3050
    const TheoryReport dr = phase2_report(dip);
    REQUIRE(dr.find("alignment_nondecreasing") != nullptr);
    CHECK(dr.find("alignment_nondecreasing")->status == CheckStatus::fail);
    CHECK(dr.find("final_alignment_min")->status == CheckStatus::pass);

    Trajectory blown = good;
    blown.records.back().w_drift = 25e-3;
    const TheoryReport br = phase2_report(blown);
    REQUIRE(br.find("w_drift_bounded") != nullptr);
    CHECK(br.find("w_drift_bounded")->status == CheckStatus::fail);
    CHECK(br.find("w_drift_bounded")->measured > kDriftDoublingMax);
}

TEST_CASE("symmetry report on exact and perturbed parameters") {
    TrainConfig cfg;
    cfg.task = Task::even_pairs;
    cfg.l_max = 2;

    ModelParams sym = ModelParams::zeros(4, 2.0);
    for (Token w : {Token::a, Token::b}) {
        sym.u[embedding_index(1, w)] = 0.5;
        sym.u[embedding_index(2, w)] = -0.25;
        sym.W(embedding_index(1, w), embedding_index(2, w)) = 3.0;
        sym.W(embedding_index(1, flip(w)), embedding_index(2, w)) = -3.0;
        sym.W(embedding_index(2, w), embedding_index(2, Token::a)) = 0.7;
        sym.W(embedding_index(2, w), embedding_index(2, Token::b)) = 0.7;
    }
    CHECK(max_symmetry_violation(sym, cfg) == 0.0);
    CHECK(max_symmetry_violation(ModelParams::zeros(4, 2.0), cfg) == 0.0);

    Trajectory traj;
    traj.config = cfg;
    traj.checkpoints.emplace_back(0, ModelParams::zeros(4, 2.0));
    traj.checkpoints.emplace_back(10, sym);
    const TheoryReport ok = symmetry_report(traj);
    CHECK(ok.passed());
    REQUIRE(ok.find("exchange_invariants") != nullptr);
    CHECK(ok.find("exchange_invariants")->measured == 0.0);

    ModelParams broken = sym;
    broken.W(embedding_index(1, Token::a), embedding_index(2, Token::a)) = 3.0 + 1e-6;
    CHECK(max_symmetry_violation(broken, cfg) == doctest::Approx(1e-6).epsilon(1e-6));
    traj.checkpoints.emplace_back(20, broken);
    const TheoryReport bad = symmetry_report(traj);
    CHECK(!bad.passed());
    CHECK(bad.find("exchange_invariants")->status == CheckStatus::fail);
    CHECK(bad.find("exchange_invariants")->detail.find("worst at t=20") != std::string::npos);

    Trajectory none;
    none.config = cfg;
    CHECK(!symmetry_report(none).passed());
}

TEST_CASE("separability report certifies a small trained run") {
    TrainConfig cfg;
    cfg.task = Task::even_pairs;
    cfg.l_max = 3;
    cfg.t0 = 20;
    cfg.total_steps = 40;
    cfg.snapshot_every = 5;
    const Trajectory traj = train(cfg);

    const TheoryReport report = separability_report(traj);
    for (const TheoryCheck& c : report.checks) {
        INFO(c.name << " measured=" << c.measured << " detail=" << c.detail);
        CHECK(c.status == CheckStatus::pass);
    }
    CHECK(report.passed());
    REQUIRE(report.find("canonical_direction_separates") != nullptr);
    CHECK(report.find("canonical_direction_separates")->measured > 0.0);
    REQUIRE(report.find("kkt_stationarity") != nullptr);
    CHECK(report.find("kkt_stationarity")->measured <= kKktTol);

    Trajectory no_ckpt;
    no_ckpt.config = cfg;
    const TheoryReport missing = separability_report(no_ckpt);
    CHECK(!missing.passed());
    CHECK(missing.find("t0_checkpoint_present") != nullptr);
}

TEST_CASE("report serialization") {
    TheoryReport pass_report;
    pass_report.name = "alpha";
    pass_report.checks.push_back({"one", CheckStatus::pass, 0.5, "fine"});
    TheoryReport fail_report;
    fail_report.name = "beta";
    fail_report.checks.push_back({"two", CheckStatus::fail, -0.5, ""});
    fail_report.checks.push_back({"three", CheckStatus::indeterminate, 0.0, "later"});

    const nlohmann::json single = nlohmann::json::parse(report_json(pass_report));
    CHECK(single["name"] == "alpha");
    CHECK(single["passed"] == true);
    CHECK(single["checks"][0]["status"] == "pass");
    CHECK(single["checks"][0]["measured"] == 0.5);

    const nlohmann::json multi =
        nlohmann::json::parse(report_json(std::vector<TheoryReport>{pass_report, fail_report}));
    CHECK(multi["all_passed"] == false);
    REQUIRE(multi["reports"].size() == 2);
    CHECK(multi["reports"][1]["passed"] == false);
    CHECK(multi["reports"][1]["checks"][1]["status"] == "indeterminate");
    CHECK(multi["reports"][1]["checks"][1]["detail"] == "later");

    // An empty report never counts as passing.
    TheoryReport empty;
    empty.name = "hollow";
    CHECK(!empty.passed());
}
