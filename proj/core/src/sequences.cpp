#include "attnlab/sequences.hpp"

#include <stdexcept>

#include "attnlab/format.hpp"

namespace attnlab {

Sequence Sequence::from_string(const std::string& s) {
    std::vector<Token> toks;
    toks.reserve(s.size());
    for (char c : s) {
        if (c == 'a') {
            toks.push_back(Token::a);
        } else if (c == 'b') {
            toks.push_back(Token::b);
        } else {
            throw std::invalid_argument("sequence may only contain 'a'/'b', got '" +
                                        std::string(1, c) + "'");
        }
    }
    return Sequence(std::move(toks));
}

std::string Sequence::to_string() const {
    std::string s;
    s.reserve(tokens_.size());
    for (Token t : tokens_) s.push_back(to_char(t));
    return s;
}

Token Sequence::at(int pos) const {
    if (pos < 1 || pos > length()) {
        throw std::out_of_range("sequence position " + std::to_string(pos) +
                                " outside 1.." + std::to_string(length()));
    }
    return tokens_[static_cast<size_t>(pos - 1)];
}

std::vector<Sequence> enumerate_sequences(int length) {
    if (length < 1 || length > kMaxSequenceLength) {
        throw std::invalid_argument("enumeration length must be in 1.." +
                                    std::to_string(kMaxSequenceLength));
    }
    std::vector<Sequence> out;
    out.reserve(static_cast<size_t>(1) << length);
    const uint32_t count = 1u << length;
    for (uint32_t v = 0; v < count; ++v) {
        std::vector<Token> toks(static_cast<size_t>(length));
        // Most significant bit first, so numeric order equals lexicographic
        // order with a=0 < b=1.
        for (int i = 0; i < length; ++i) {
            toks[static_cast<size_t>(i)] =
                static_cast<Token>((v >> (length - 1 - i)) & 1u);
        }
        out.emplace_back(std::move(toks));
    }
    return out;
}

Matrix embed(const Sequence& seq, int d) {
    const int L = seq.length();
    if (L == 0) throw std::invalid_argument("cannot embed an empty sequence");
    if (2 * L > d) {
        throw std::invalid_argument("embedding needs 2*length <= d, got length=" +
                                    std::to_string(L) + " d=" + std::to_string(d));
    }
    Matrix X(d, L);
    for (int pos = 1; pos <= L; ++pos) {
        X(embedding_index(pos, seq.at(pos)), pos - 1) = 1.0;
    }
    return X;
}

int substring_pattern_count(const Sequence& seq, const std::vector<std::string>& patterns) {
    const std::string s = seq.to_string();
    int count = 0;
    for (const std::string& p : patterns) {
        if (p.empty() || p.size() > s.size()) continue;
        for (size_t i = 0; i + p.size() <= s.size(); ++i) {
            if (s.compare(i, p.size(), p) == 0) ++count;
        }
    }
    return count;
}

int even_pairs_label(const Sequence& seq) {
    if (seq.empty()) throw std::invalid_argument("label of empty sequence");
    return seq.first() == seq.last() ? +1 : -1;
}

int parity_label(const Sequence& seq) {
    if (seq.empty()) throw std::invalid_argument("label of empty sequence");
    int b_count = 0;
    for (Token t : seq.tokens()) {
        if (t == Token::b) ++b_count;
    }
    return (b_count % 2 == 0) ? +1 : -1;
}

int cot_step_label(const Sequence& seq, int l0) {
    const int L = seq.length();
    if (l0 < 1) throw std::invalid_argument("l0 must be >= 1");
    if (L < l0) {
        throw std::invalid_argument("step label needs length >= l0, got length=" +
                                    std::to_string(L) + " l0=" + std::to_string(l0));
    }
    return seq.at(L - l0 + 1) == seq.last() ? +1 : -1;
}

CoTTrace cot_trace(const Sequence& base, int l0) {
    if (base.length() != l0) {
        throw std::invalid_argument("trace base must have length l0 exactly");
    }
    if (l0 < 2) throw std::invalid_argument("trace needs l0 >= 2");
    CoTTrace trace;
    trace.base = base;
    trace.full = base;
    for (int t = 1; t <= l0 - 1; ++t) {
        // Compare positions t and l0 + t - 1 of the chain built so far; equal
        // tokens emit a, unequal emit b. This is the first-vs-last rule on the
        // window of positions t .. l0 + t - 1.
        const Token next =
            trace.full.at(t) == trace.full.at(l0 + t - 1) ? Token::a : Token::b;
        trace.appended.push_back(next);
        trace.full.push_back(next);
    }
    trace.final_label = trace.appended.back() == Token::a ? +1 : -1;
    return trace;
}

std::string to_string(Task t) {
    return t == Task::even_pairs ? "even_pairs" : "parity_cot";
}

std::string to_string(TaskTag t) {
    switch (t) {
        case TaskTag::even_pairs: return "even_pairs";
        case TaskTag::cot_step: return "cot_step";
        case TaskTag::parity: return "parity";
    }
    return "?";
}

Task task_from_string(const std::string& s) {
    if (s == "even_pairs") return Task::even_pairs;
    if (s == "parity_cot") return Task::parity_cot;
    throw std::invalid_argument("unknown task '" + s +
                                "' (expected even_pairs or parity_cot)");
}

namespace {

double length_weight(int length) {
    return 1.0 / static_cast<double>(1u << length);
}

}  // namespace

TaskDataset build_even_pairs_dataset(int l_max, int d) {
    if (l_max < 1 || l_max > kMaxSequenceLength) {
        throw std::invalid_argument("l_max must be in 1.." +
                                    std::to_string(kMaxSequenceLength));
    }
    if (d == 0) d = 2 * l_max;
    if (d < 2 * l_max) {
        throw std::invalid_argument("even-pairs dataset needs d >= 2*l_max");
    }
    TaskDataset ds;
    ds.task = Task::even_pairs;
    ds.d = d;
    ds.l_max = l_max;
    for (int L = 1; L <= l_max; ++L) {
        const double w = length_weight(L);
        for (Sequence& seq : enumerate_sequences(L)) {
            LabeledExample ex;
            ex.label = even_pairs_label(seq);
            ex.weight = w;
            ex.tag = TaskTag::even_pairs;
            ex.seq = std::move(seq);
            ds.examples.push_back(std::move(ex));
        }
    }
    return ds;
}

TaskDataset build_parity_cot_dataset(int l0, int d) {
    if (l0 < 2 || 2 * l0 - 1 > kMaxSequenceLength) {
        throw std::invalid_argument("l0 out of range for parity dataset");
    }
    const int l_top = 2 * l0 - 1;
    if (d == 0) d = 2 * l_top;
    if (d < 2 * l_top) {
        throw std::invalid_argument("parity dataset needs d >= 2*(2*l0 - 1)");
    }
    TaskDataset ds;
    ds.task = Task::parity_cot;
    ds.d = d;
    ds.l_max = l_top;
    ds.l0 = l0;
    for (int L = 1; L <= l_top; ++L) {
        const double w = length_weight(L);
        for (Sequence& seq : enumerate_sequences(L)) {
            LabeledExample ex;
            if (L < l0) {
                ex.label = even_pairs_label(seq);
                ex.tag = TaskTag::even_pairs;
            } else {
                ex.label = cot_step_label(seq, l0);
                ex.tag = TaskTag::cot_step;
            }
            ex.weight = w;
            ex.seq = std::move(seq);
            ds.examples.push_back(std::move(ex));
        }
    }
    return ds;
}

std::string dataset_csv(const TaskDataset& ds) {
    std::string out = "length,sequence,label,weight,task_tag\n";
    for (const LabeledExample& ex : ds.examples) {
        out += std::to_string(ex.seq.length());
        out += ',';
        out += ex.seq.to_string();
        out += ',';
        out += std::to_string(ex.label);
        out += ',';
        out += format_double(ex.weight);
        out += ',';
        out += to_string(ex.tag);
        out += '\n';
    }
    return out;
}

}  // namespace attnlab
