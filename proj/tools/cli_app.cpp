#include "cli_app.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "attnlab/config.hpp"
#include "attnlab/cot.hpp"
#include "attnlab/diagnostics.hpp"
#include "attnlab/format.hpp"
#include "attnlab/maxmargin.hpp"
#include "attnlab/training.hpp"

namespace attnlab {
namespace {

// Config flags shared by the data-producing subcommands. Flag values beat the
// config file, which beats the built-in defaults.
struct ConfigFlags {
    std::string config_path;
    std::string task;
    int l_max = 0;
    int l0 = 0;
    double eta = 0.0;
    double lambda = 0.0;
    long t0 = 0;
    long total_steps = 0;
    std::string schedule;
    long snapshot_every = 0;
    std::string out_dir;

    CLI::Option* o_task = nullptr;
    CLI::Option* o_l_max = nullptr;
    CLI::Option* o_l0 = nullptr;
    CLI::Option* o_eta = nullptr;
    CLI::Option* o_lambda = nullptr;
    CLI::Option* o_t0 = nullptr;
    CLI::Option* o_total = nullptr;
    CLI::Option* o_schedule = nullptr;
    CLI::Option* o_snapshot = nullptr;
    CLI::Option* o_out_dir = nullptr;
};

// with_lambda=false leaves --lambda free for the sweep's value list.
void add_config_flags(CLI::App* sub, ConfigFlags& f, bool with_lambda = true) {
    sub->add_option("--config", f.config_path, "JSON config file");
    f.o_task = sub->add_option("--task", f.task, "even_pairs or parity_cot");
    f.o_l_max = sub->add_option("--l-max", f.l_max, "even-pairs horizon");
    f.o_l0 = sub->add_option("--l0", f.l0, "parity reasoning window");
    f.o_eta = sub->add_option("--eta", f.eta, "step size");
    if (with_lambda) f.o_lambda = sub->add_option("--lambda", f.lambda, "softmax scaling");
    f.o_t0 = sub->add_option("--t0", f.t0, "phase-1 length");
    f.o_total = sub->add_option("--total-steps", f.total_steps, "training steps");
    f.o_schedule = sub->add_option("--schedule", f.schedule, "two_phase or vanilla");
    f.o_snapshot = sub->add_option("--snapshot-every", f.snapshot_every, "snapshot stride");
    f.o_out_dir = sub->add_option("--out-dir", f.out_dir, "run output directory");
}

TrainConfig resolve_config(const ConfigFlags& f) {
    TrainConfig cfg;
    if (!f.config_path.empty()) cfg = load_train_config(f.config_path);
    if (f.o_task->count()) cfg.task = task_from_string(f.task);
    if (f.o_l_max->count()) cfg.l_max = f.l_max;
    if (f.o_l0->count()) cfg.l0 = f.l0;
    if (f.o_eta->count()) cfg.eta = f.eta;
    if (f.o_lambda && f.o_lambda->count()) cfg.lambda = f.lambda;
    if (f.o_t0->count()) cfg.t0 = f.t0;
    if (f.o_total->count()) cfg.total_steps = f.total_steps;
    if (f.o_schedule->count()) cfg.schedule = schedule_from_string(f.schedule);
    if (f.o_snapshot->count()) cfg.snapshot_every = f.snapshot_every;
    if (f.o_out_dir->count()) cfg.out_dir = f.out_dir;
    cfg.validate();
    return cfg;
}

void write_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + out_path + "' for writing");
    out << text;
}

int run_dataset(const ConfigFlags& f, const std::string& out_path) {
    const TrainConfig cfg = resolve_config(f);
    write_text(dataset_csv(cfg.build_dataset()), out_path);
    return 0;
}

int run_train(const ConfigFlags& f, bool quiet) {
    TrainConfig cfg = resolve_config(f);
    if (cfg.out_dir.empty()) {
        throw std::invalid_argument("train needs an output directory "
                                    "(--out-dir or the out_dir config key)");
    }
    const Trajectory traj = train(cfg);
    if (!quiet) {
        std::cout << "train: task=" << to_string(cfg.task) << " steps="
                  << cfg.total_steps << " final_loss="
                  << format_double(traj.records.back().loss) << " out="
                  << cfg.out_dir << "\n";
    }
    return 0;
}

int run_verify(const std::string& run_dir, bool phase1, bool phase2,
               bool separability, bool symmetry, bool all,
               const std::string& out_path, bool quiet) {
    if (!(phase1 || phase2 || separability || symmetry || all)) {
        throw std::invalid_argument(
            "verify needs at least one of --phase1/--phase2/--separability/"
            "--symmetry/--all");
    }
    const Trajectory traj = load_run_dir(run_dir);
    std::vector<TheoryReport> reports;
    if (all || phase1) reports.push_back(phase1_report(traj));
    if (all || separability) reports.push_back(separability_report(traj));
    if (all || phase2) reports.push_back(phase2_report(traj));
    if (all || symmetry) reports.push_back(symmetry_report(traj));

    // JSON goes to stdout (or the requested file); the summary line stays on
    // stderr so the report remains machine-parseable.
    const std::string json = report_json(reports);
    if (out_path.empty()) {
        std::cout << json;
    } else {
        write_text(json, out_path);
    }

    bool ok = true;
    for (const TheoryReport& r : reports) ok = ok && r.passed();
    if (!quiet) {
        std::cerr << "verify: " << (ok ? "all checks passed" : "CHECK FAILURES") << "\n";
    }
    return ok ? 0 : 2;
}

int run_maxmargin(const ConfigFlags& f, const std::string& ckpt_path,
                  const std::string& out_path) {
    const TrainConfig cfg = resolve_config(f);
    const Checkpoint ck = load_checkpoint(ckpt_path);
    if (ck.task != cfg.task) {
        throw std::invalid_argument("checkpoint task " + to_string(ck.task) +
                                    " does not match configured task " +
                                    to_string(cfg.task));
    }
    if (ck.params.d != cfg.d()) {
        throw std::invalid_argument(
            "checkpoint dimension " + std::to_string(ck.params.d) +
            " does not match configured dimension " + std::to_string(cfg.d()));
    }
    const PooledDataset pooled = pool_dataset(ck.params, cfg.build_dataset());
    const MarginSolution sol = solve_max_margin(pooled);

    nlohmann::json j;
    j["u_star"] = sol.u_star;
    j["margin"] = sol.margin;
    j["support_indices"] = sol.support_indices;
    j["kkt"] = {{"feasibility", sol.kkt_feasibility},
                {"stationarity", sol.kkt_stationarity},
                {"complementarity", sol.kkt_complementarity}};
    j["updates"] = sol.updates;
    write_text(j.dump(1) + "\n", out_path);
    return 0;
}

int run_cot_infer(const ConfigFlags& f, const std::string& mode,
                  const std::string& ckpt_path, bool ideal,
                  const std::string& seq_str, int length, bool exhaustive,
                  const std::string& out_path) {
    const bool truncated = mode == "truncated";
    TrainConfig cfg_defaults;
    const int l0 = f.o_l0->count() ? f.l0
                   : !f.config_path.empty() ? resolve_config(f).l0
                                            : cfg_defaults.l0;

    // Comparator: the trained checkpoint or the matching oracle.
    Comparator comp;
    int model_d = 0;
    if (ideal) {
        comp = truncated ? ideal_comparator() : ideal_step_comparator(l0);
    } else {
        const Checkpoint ck = load_checkpoint(ckpt_path);
        comp = model_comparator(ck.params);
        model_d = ck.params.d;
    }

    // Inputs.
    std::vector<Sequence> inputs;
    if (!seq_str.empty()) {
        inputs.push_back(Sequence::from_string(seq_str));
    } else {
        if (length < 2) throw std::invalid_argument("--length must be >= 2");
        const int lo = exhaustive ? 2 : length;
        if (exhaustive && !truncated) {
            throw std::invalid_argument("--exhaustive only applies to truncated mode");
        }
        for (int L = lo; L <= length; ++L) {
            for (Sequence& s : enumerate_sequences(L)) inputs.push_back(std::move(s));
        }
    }
    for (const Sequence& s : inputs) {
        if (!truncated && s.length() != l0) {
            throw std::invalid_argument("autoregressive mode needs base length l0=" +
                                        std::to_string(l0) + ", got " +
                                        std::to_string(s.length()));
        }
        const int widest = truncated ? s.length() : 2 * l0 - 1;
        if (model_d > 0 && 2 * widest > model_d) {
            throw std::invalid_argument("checkpoint dimension " + std::to_string(model_d) +
                                        " too small for window length " +
                                        std::to_string(widest));
        }
    }

    std::string csv = "sequence,prediction,truth,correct\n";
    long correct = 0;
    for (const Sequence& s : inputs) {
        const CoTRun run = truncated ? truncated_cot_infer(comp, s)
                                     : autoregressive_cot_infer(comp, s, l0);
        const int truth = parity_label(s);
        const bool ok = run.prediction == truth;
        correct += ok ? 1 : 0;
        csv += s.to_string() + "," + std::to_string(run.prediction) + "," +
               std::to_string(truth) + "," + (ok ? "1" : "0") + "\n";
    }
    const double acc = static_cast<double>(correct) / static_cast<double>(inputs.size());
    csv += "accuracy," + std::to_string(correct) + "," +
           std::to_string(inputs.size()) + "," + format_double(acc) + "\n";
    write_text(csv, out_path);
    return 0;
}

int run_sweep(const ConfigFlags& f, const std::vector<double>& lambdas, bool quiet) {
    TrainConfig base = resolve_config(f);
    if (base.out_dir.empty()) {
        throw std::invalid_argument("sweep needs an output directory "
                                    "(--out-dir or the out_dir config key)");
    }
    if (lambdas.empty()) throw std::invalid_argument("sweep needs --lambda values");
    for (double lambda : lambdas) {
        TrainConfig cfg = base;
        cfg.lambda = lambda;
        cfg.out_dir = base.out_dir + "/lambda_" + format_double(lambda);
        const Trajectory traj = train(cfg);
        if (!quiet) {
            std::cout << "sweep: lambda=" << format_double(lambda) << " final_loss="
                      << format_double(traj.records.back().loss) << " out="
                      << cfg.out_dir << "\n";
        }
    }
    return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args) {
    CLI::App app{"Deterministic training laboratory for a one-layer "
                 "softmax-attention model on even pairs and parity"};
    app.require_subcommand(1);
    app.fallthrough(true);
    bool quiet = false;
    app.add_flag("--quiet", quiet, "suppress summary lines");

    ConfigFlags ds_flags;
    std::string ds_out;
    CLI::App* ds = app.add_subcommand("dataset", "dump the training set as CSV");
    add_config_flags(ds, ds_flags);
    ds->add_option("--out", ds_out, "output path (default stdout)");

    ConfigFlags tr_flags;
    CLI::App* tr = app.add_subcommand("train", "run gradient descent, write run dir");
    add_config_flags(tr, tr_flags);

    std::string v_dir, v_out;
    bool v_p1 = false, v_p2 = false, v_sep = false, v_sym = false, v_all = false;
    CLI::App* ve = app.add_subcommand("verify", "check theory predictions on a run dir");
    ve->add_option("run_dir", v_dir, "trajectory directory")->required();
    ve->add_flag("--phase1", v_p1, "phase-1 sign/ordering checks");
    ve->add_flag("--phase2", v_p2, "phase-2 growth/alignment checks");
    ve->add_flag("--separability", v_sep, "pooled-data separability checks");
    ve->add_flag("--symmetry", v_sym, "a/b exchange invariants");
    ve->add_flag("--all", v_all, "everything above");
    ve->add_option("--out", v_out, "also write the JSON report here");

    ConfigFlags mm_flags;
    std::string mm_ckpt, mm_out;
    CLI::App* mm = app.add_subcommand("maxmargin", "max-margin solve on pooled data");
    add_config_flags(mm, mm_flags);
    mm->add_option("--checkpoint", mm_ckpt, "checkpoint JSON")->required();
    mm->add_option("--out", mm_out, "output path (default stdout)");

    ConfigFlags ci_flags;
    std::string ci_mode, ci_ckpt, ci_seq, ci_out;
    int ci_length = 0;
    bool ci_ideal = false, ci_exhaustive = false;
    CLI::App* ci = app.add_subcommand("cot-infer", "chain-of-thought parity inference");
    add_config_flags(ci, ci_flags);
    ci->add_option("--mode", ci_mode, "truncated or autoregressive")
        ->required()
        ->check(CLI::IsMember({"truncated", "autoregressive"}));
    CLI::Option* ci_ckpt_opt = ci->add_option("--checkpoint", ci_ckpt, "model comparator");
    CLI::Option* ci_ideal_opt = ci->add_flag("--ideal", ci_ideal, "oracle comparator");
    ci_ckpt_opt->excludes(ci_ideal_opt);
    CLI::Option* ci_seq_opt = ci->add_option("--sequence", ci_seq, "single input sequence");
    CLI::Option* ci_len_opt = ci->add_option("--length", ci_length, "run all sequences of this length");
    ci_seq_opt->excludes(ci_len_opt);
    ci->add_flag("--exhaustive", ci_exhaustive, "with --length: all lengths 2..L");
    ci->add_option("--out", ci_out, "output path (default stdout)");

    ConfigFlags sw_flags;
    std::vector<double> sw_lambdas;
    CLI::App* sw = app.add_subcommand("sweep", "train once per lambda value");
    add_config_flags(sw, sw_flags, /*with_lambda=*/false);
    sw->add_option("--lambda", sw_lambdas, "comma-separated lambda values")
        ->required()
        ->delimiter(',');

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (ds->parsed()) return run_dataset(ds_flags, ds_out);
        if (tr->parsed()) return run_train(tr_flags, quiet);
        if (ve->parsed()) return run_verify(v_dir, v_p1, v_p2, v_sep, v_sym, v_all, v_out, quiet);
        if (mm->parsed()) return run_maxmargin(mm_flags, mm_ckpt, mm_out);
        if (ci->parsed()) {
            const bool has_ckpt = ci_ckpt_opt->count() > 0;
            if (ci_ideal == has_ckpt) {
                throw std::invalid_argument("cot-infer needs exactly one of "
                                            "--checkpoint or --ideal");
            }
            if (ci_seq.empty() && ci_len_opt->count() == 0) {
                throw std::invalid_argument("cot-infer needs --sequence or --length");
            }
            return run_cot_infer(ci_flags, ci_mode, ci_ckpt, ci_ideal, ci_seq,
                                 ci_length, ci_exhaustive, ci_out);
        }
        if (sw->parsed()) return run_sweep(sw_flags, sw_lambdas, quiet);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace attnlab
