#include "attnlab/model.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace attnlab {

ModelParams ModelParams::zeros(int d, double lambda) {
    if (d < 2) throw std::invalid_argument("model dimension must be >= 2");
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    ModelParams p;
    p.d = d;
    p.lambda = lambda;
    p.u.assign(static_cast<size_t>(d), 0.0);
    p.W = Matrix(d, d);
    return p;
}

namespace {

void check_fits(const ModelParams& p, const Sequence& seq) {
    if (seq.empty()) throw std::invalid_argument("empty sequence");
    if (2 * seq.length() > p.d) {
        throw std::invalid_argument("sequence of length " + std::to_string(seq.length()) +
                                    " does not fit model with d=" + std::to_string(p.d));
    }
}

}  // namespace

Vec raw_attention_scores(const ModelParams& p, const Sequence& seq) {
    check_fits(p, seq);
    const int L = seq.length();
    const int col = embedding_index(L, seq.last());
    Vec s(static_cast<size_t>(L));
    for (int pos = 1; pos <= L; ++pos) {
        s[static_cast<size_t>(pos - 1)] = p.W(embedding_index(pos, seq.at(pos)), col);
    }
    return s;
}

Vec attention_weights(const ModelParams& p, const Sequence& seq) {
    Vec s = raw_attention_scores(p, seq);
    double hi = s[0];
    for (double v : s) {
        if (v > hi) hi = v;
    }
    double total = 0.0;
    for (double& v : s) {
        v = std::exp((v - hi) / p.lambda);
        total += v;
    }
    for (double& v : s) v /= total;
    return s;
}

double forward(const ModelParams& p, const Sequence& seq) {
    const Vec phi = attention_weights(p, seq);
    double out = 0.0;
    for (int pos = 1; pos <= seq.length(); ++pos) {
        out += p.u[static_cast<size_t>(embedding_index(pos, seq.at(pos)))] *
               phi[static_cast<size_t>(pos - 1)];
    }
    return out;
}

int predict(const ModelParams& p, const Sequence& seq) {
    return forward(p, seq) >= 0.0 ? +1 : -1;
}

double token_score(const ModelParams& p, int pos, Token tok) {
    const int i = embedding_index(pos, tok);
    if (pos < 1 || i >= p.d) throw std::out_of_range("token position outside model");
    return p.u[static_cast<size_t>(i)];
}

double attention_score(const ModelParams& p, int row_pos, Token row_tok,
                       int col_pos, Token col_tok) {
    const int r = embedding_index(row_pos, row_tok);
    const int c = embedding_index(col_pos, col_tok);
    if (row_pos < 1 || col_pos < 1 || r >= p.d || c >= p.d) {
        throw std::out_of_range("attention position outside model");
    }
    return p.W(r, c);
}

void save_checkpoint(const ModelParams& p, long step, Task task, const std::string& path) {
    nlohmann::json j;
    j["d"] = p.d;
    j["lambda"] = p.lambda;
    j["u"] = p.u;
    j["W"] = p.W.data;
    j["step"] = step;
    j["task"] = to_string(task);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out << j.dump(1) << "\n";
    if (!out) throw std::runtime_error("failed writing checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read checkpoint: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("checkpoint " + path + ": " + e.what());
    }
    Checkpoint ck;
    try {
        const int d = j.at("d").get<int>();
        ck.params = ModelParams::zeros(d, j.at("lambda").get<double>());
        ck.params.u = j.at("u").get<Vec>();
        std::vector<double> w = j.at("W").get<std::vector<double>>();
        if (ck.params.u.size() != static_cast<size_t>(d) ||
            w.size() != static_cast<size_t>(d) * static_cast<size_t>(d)) {
            throw std::runtime_error("checkpoint " + path + ": u/W size mismatch with d");
        }
        ck.params.W.data = std::move(w);
        ck.step = j.at("step").get<long>();
        ck.task = task_from_string(j.at("task").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("checkpoint " + path + ": " + e.what());
    }
    return ck;
}

}  // namespace attnlab
