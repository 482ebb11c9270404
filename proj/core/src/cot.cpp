#include "attnlab/cot.hpp"

#include <stdexcept>

namespace attnlab {

Comparator ideal_comparator() {
    return [](const Sequence& s) { return even_pairs_label(s); };
}

Comparator ideal_step_comparator(int l0) {
    if (l0 < 2) throw std::invalid_argument("step comparator needs l0 >= 2");
    return [l0](const Sequence& s) { return cot_step_label(s, l0); };
}

Comparator model_comparator(const ModelParams& p) {
    return [p](const Sequence& s) { return predict(p, s); };
}

CoTRun truncated_cot_infer(const Comparator& comp, const Sequence& input) {
    const int L = input.length();
    if (L < 2) throw std::invalid_argument("truncated inference needs length >= 2");
    CoTRun run;
    run.input = input;
    Sequence window = input;
    for (int t = 1; t <= L - 1; ++t) {
        CoTStep step;
        step.input = window;
        step.decision = comp(window);
        step.appended = greedy_token_of(step.decision);
        window.push_back(step.appended);
        window.drop_front();
        run.steps.push_back(std::move(step));
    }
    run.prediction = run.steps.back().decision;
    return run;
}

CoTRun autoregressive_cot_infer(const Comparator& comp, const Sequence& base, int l0) {
    if (base.length() != l0) {
        throw std::invalid_argument("autoregressive inference starts from a length-l0 base");
    }
    if (l0 < 2) throw std::invalid_argument("autoregressive inference needs l0 >= 2");
    CoTRun run;
    run.input = base;
    Sequence chain = base;
    for (int t = 1; t <= l0 - 1; ++t) {
        CoTStep step;
        step.input = chain;
        step.decision = comp(chain);
        step.appended = greedy_token_of(step.decision);
        chain.push_back(step.appended);
        run.steps.push_back(std::move(step));
    }
    run.prediction = run.steps.back().decision;
    return run;
}

int automaton_parity(const Sequence& seq) {
    if (seq.empty()) throw std::invalid_argument("automaton on empty sequence");
    Token state = seq.first();
    for (int t = 2; t <= seq.length(); ++t) {
        state = (state == seq.at(t)) ? Token::a : Token::b;
    }
    return state == Token::a ? +1 : -1;
}

}  // namespace attnlab
