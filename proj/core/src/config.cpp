#include "attnlab/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace attnlab {

std::string to_string(Schedule s) {
    return s == Schedule::two_phase ? "two_phase" : "vanilla";
}

Schedule schedule_from_string(const std::string& s) {
    if (s == "two_phase") return Schedule::two_phase;
    if (s == "vanilla") return Schedule::vanilla;
    throw std::invalid_argument("schedule: expected 'two_phase' or 'vanilla', got '" + s + "'");
}

int TrainConfig::d() const {
    return task == Task::even_pairs ? 2 * l_max : 2 * (2 * l0 - 1);
}

int TrainConfig::max_length() const {
    return task == Task::even_pairs ? l_max : 2 * l0 - 1;
}

void TrainConfig::validate() const {
    if (task == Task::even_pairs) {
        if (l_max < 1 || l_max > kMaxSequenceLength) {
            throw std::invalid_argument("l_max: must be in 1.." +
                                        std::to_string(kMaxSequenceLength));
        }
    } else {
        if (l0 < 2 || 2 * l0 - 1 > kMaxSequenceLength) {
            throw std::invalid_argument("l0: must be >= 2 with 2*l0-1 <= " +
                                        std::to_string(kMaxSequenceLength));
        }
    }
    if (!(eta > 0.0)) throw std::invalid_argument("eta: must be positive");
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda: must be positive");
    if (total_steps < 1) throw std::invalid_argument("total_steps: must be >= 1");
    if (t0 < 0 || t0 > total_steps) {
        throw std::invalid_argument("t0: must satisfy 0 <= t0 <= total_steps");
    }
    if (snapshot_every < 1) throw std::invalid_argument("snapshot_every: must be >= 1");
}

TaskDataset TrainConfig::build_dataset() const {
    validate();
    return task == Task::even_pairs ? build_even_pairs_dataset(l_max, d())
                                    : build_parity_cot_dataset(l0, d());
}

TrainConfig parse_train_config(const std::string& json_text) {
    // Whitespace-only input counts as an empty object so the caller sees a
    // missing-key error instead of a parser error.
    std::string trimmed = json_text;
    trimmed.erase(std::remove_if(trimmed.begin(), trimmed.end(),
                                 [](unsigned char c) { return std::isspace(c); }),
                  trimmed.end());
    nlohmann::json j;
    if (trimmed.empty()) {
        j = nlohmann::json::object();
    } else {
        try {
            j = nlohmann::json::parse(json_text);
        } catch (const nlohmann::json::parse_error& e) {
            throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
        }
    }
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");

    static const std::vector<std::string> known = {
        "task", "l_max", "l0", "eta", "lambda", "t0", "total_steps",
        "schedule", "snapshot_every", "out_dir"};
    for (const auto& item : j.items()) {
        if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
            throw std::invalid_argument("unknown config key '" + item.key() + "'");
        }
    }
    if (!j.contains("task")) {
        throw std::invalid_argument("missing required config key 'task'");
    }

    TrainConfig cfg;
    try {
        cfg.task = task_from_string(j.at("task").get<std::string>());
        if (j.contains("l_max")) cfg.l_max = j.at("l_max").get<int>();
        if (j.contains("l0")) cfg.l0 = j.at("l0").get<int>();
        if (j.contains("eta")) cfg.eta = j.at("eta").get<double>();
        if (j.contains("lambda")) cfg.lambda = j.at("lambda").get<double>();
        if (j.contains("t0")) cfg.t0 = j.at("t0").get<long>();
        if (j.contains("total_steps")) cfg.total_steps = j.at("total_steps").get<long>();
        if (j.contains("schedule")) {
            cfg.schedule = schedule_from_string(j.at("schedule").get<std::string>());
        }
        if (j.contains("snapshot_every")) {
            cfg.snapshot_every = j.at("snapshot_every").get<long>();
        }
        if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config field has wrong type: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

TrainConfig load_train_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_train_config(ss.str());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

std::string config_json(const TrainConfig& cfg) {
    nlohmann::json j;
    j["task"] = to_string(cfg.task);
    j["l_max"] = cfg.l_max;
    j["l0"] = cfg.l0;
    j["eta"] = cfg.eta;
    j["lambda"] = cfg.lambda;
    j["t0"] = cfg.t0;
    j["total_steps"] = cfg.total_steps;
    j["schedule"] = to_string(cfg.schedule);
    j["snapshot_every"] = cfg.snapshot_every;
    j["out_dir"] = cfg.out_dir;
    return j.dump(1) + "\n";
}

std::vector<long> snapshot_steps(const TrainConfig& cfg) {
    std::vector<long> steps;
    for (long t = 0; t <= cfg.total_steps; t += cfg.snapshot_every) steps.push_back(t);
    steps.push_back(cfg.t0);
    steps.push_back(cfg.total_steps);
    std::sort(steps.begin(), steps.end());
    steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
    return steps;
}

}  // namespace attnlab
