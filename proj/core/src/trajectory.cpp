#include "attnlab/trajectory.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "attnlab/format.hpp"

namespace fs = std::filesystem;

namespace attnlab {

const ModelParams* Trajectory::checkpoint_at(long step) const {
    for (const auto& [s, p] : checkpoints) {
        if (s == step) return &p;
    }
    return nullptr;
}

const MetricRecord* Trajectory::record_at(long step) const {
    for (const MetricRecord& r : records) {
        if (r.t == step) return &r;
    }
    return nullptr;
}

namespace {

void append_cell(std::string& out, const std::optional<double>& v) {
    out += ',';
    if (v) out += format_double(*v);
}

std::optional<double> parse_cell(const std::string& cell) {
    if (cell.empty()) return std::nullopt;
    return parse_double(cell);
}

}  // namespace

std::string metrics_csv(const Trajectory& traj) {
    std::string out = kMetricsCsvHeader;
    out += '\n';
    for (const MetricRecord& r : traj.records) {
        out += std::to_string(r.t);
        out += ',';
        out += format_double(r.loss);
        append_cell(out, r.loss_cot);
        append_cell(out, r.loss_reg);
        out += ',';
        out += format_double(r.ts1);
        append_cell(out, r.ts2);
        append_cell(out, r.ts3);
        out += ',';
        out += format_double(r.u_norm);
        append_cell(out, r.w_drift);
        out += ',';
        out += format_double(r.phi1_pos);
        out += ',';
        out += format_double(r.phi1_neg);
        append_cell(out, r.phi_l0);
        append_cell(out, r.align);
        out += '\n';
    }
    return out;
}

std::vector<MetricRecord> parse_metrics_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("metrics csv: empty input");
    if (line != kMetricsCsvHeader) {
        throw std::runtime_error("metrics csv: unexpected header '" + line + "'");
    }
    std::vector<MetricRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        // A trailing empty cell is dropped by getline; restore it.
        while (cells.size() < 13) cells.emplace_back();
        if (cells.size() != 13) {
            throw std::runtime_error("metrics csv: bad row '" + line + "'");
        }
        MetricRecord r;
        r.t = std::stol(cells[0]);
        r.loss = parse_double(cells[1]);
        r.loss_cot = parse_cell(cells[2]);
        r.loss_reg = parse_cell(cells[3]);
        r.ts1 = parse_double(cells[4]);
        r.ts2 = parse_cell(cells[5]);
        r.ts3 = parse_cell(cells[6]);
        r.u_norm = parse_double(cells[7]);
        r.w_drift = parse_cell(cells[8]);
        r.phi1_pos = parse_double(cells[9]);
        r.phi1_neg = parse_double(cells[10]);
        r.phi_l0 = parse_cell(cells[11]);
        r.align = parse_cell(cells[12]);
        records.push_back(std::move(r));
    }
    return records;
}

void export_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write metrics csv: " + path);
    out << metrics_csv(traj);
    if (!out) throw std::runtime_error("failed writing metrics csv: " + path);
}

void save_run_dir(const Trajectory& traj, const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create run dir " + dir + ": " + ec.message());

    {
        std::ofstream out(fs::path(dir) / "config-as-run.json", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write config-as-run.json in " + dir);
        out << config_json(traj.config);
    }
    export_csv(traj, (fs::path(dir) / "metrics.csv").string());
    for (const auto& [step, params] : traj.checkpoints) {
        const std::string name = "ckpt_" + std::to_string(step) + ".json";
        save_checkpoint(params, step, traj.config.task, (fs::path(dir) / name).string());
    }
}

Trajectory load_run_dir(const std::string& dir) {
    Trajectory traj;
    traj.config = load_train_config((fs::path(dir) / "config-as-run.json").string());

    std::ifstream in(fs::path(dir) / "metrics.csv", std::ios::binary);
    if (!in) throw std::runtime_error("cannot read metrics.csv in " + dir);
    std::ostringstream ss;
    ss << in.rdbuf();
    traj.records = parse_metrics_csv(ss.str());

    for (long step : snapshot_steps(traj.config)) {
        const std::string name = "ckpt_" + std::to_string(step) + ".json";
        Checkpoint ck = load_checkpoint((fs::path(dir) / name).string());
        if (ck.step != step) {
            throw std::runtime_error("checkpoint step mismatch in " + name);
        }
        traj.checkpoints.emplace_back(step, std::move(ck.params));
    }
    return traj;
}

}  // namespace attnlab
