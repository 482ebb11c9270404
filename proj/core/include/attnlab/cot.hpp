#pragma once

// Chain-of-thought inference for parity. Two regimes:
//
//  * truncated: keep a fixed-size window; each step appends the comparator's
//    greedy token and drops the first token, so the model only ever sees
//    sequences embedded at positions 1..L.
//  * autoregressive: keep the whole chain; starting from a length-l0 base the
//    model appends l0-1 tokens, and the last one encodes the parity answer.

#include <functional>
#include <vector>

#include "attnlab/model.hpp"
#include "attnlab/sequences.hpp"

namespace attnlab {

// Maps a +-1 decision to the token appended to the chain (+1 -> a).
inline Token greedy_token_of(int label) { return label >= 0 ? Token::a : Token::b; }

using Comparator = std::function<int(const Sequence&)>;

// Oracle comparator for the truncated regime: +1 iff first and last token of
// the window agree.
Comparator ideal_comparator();

// Oracle comparator for the autoregressive regime: +1 iff the token l0 steps
// before the end matches the last token (positions L-l0+1 and L).
Comparator ideal_step_comparator(int l0);

// The trained model as a comparator.
Comparator model_comparator(const ModelParams& p);

struct CoTStep {
    Sequence input;     // what the comparator saw
    int decision = 0;   // its +-1 output
    Token appended = Token::a;
};

struct CoTRun {
    Sequence input;
    std::vector<CoTStep> steps;
    int prediction = 0;  // decision of the final step
};

// L-1 append/drop rounds on a length-L input (L >= 2); the final decision is
// the parity estimate for the input.
CoTRun truncated_cot_infer(const Comparator& comp, const Sequence& input);

// l0-1 append rounds on a length-l0 base; the chain grows to length 2*l0-1.
CoTRun autoregressive_cot_infer(const Comparator& comp, const Sequence& base, int l0);

// Two-state automaton for parity: start in the state of the first token; on
// each later token move to state a iff state and token agree. Final state a
// means an even number of b tokens. Kept as an independent reference
// implementation for cross-checking the other parity routes.
int automaton_parity(const Sequence& seq);

}  // namespace attnlab
