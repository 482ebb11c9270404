#pragma once

// One-layer softmax-attention scorer. The last token of a sequence attends
// over all positions; the output is the attention-weighted sum of per-token
// linear scores:
//
//   T(X) = sum_l  <u, x_l> * phi_l,    phi = softmax(X^T W x_L / lambda)
//
// With the one-hot embedding of sequences.hpp, <x_l, W x_L> is just a single
// entry of W and <u, x_l> a single entry of u, which the hot paths exploit.

#include <string>

#include "attnlab/linalg.hpp"
#include "attnlab/sequences.hpp"

namespace attnlab {

struct ModelParams {
    int d = 0;
    double lambda = 1.0;
    Vec u;     // size d
    Matrix W;  // d x d

    static ModelParams zeros(int d, double lambda);
};

// Numerically stable softmax (max subtraction); scores are divided by lambda
// before exponentiation. Softmax with temperature lambda is 1/lambda-Lipschitz
// in the scores, which the tests exercise.
Vec attention_weights(const ModelParams& p, const Sequence& seq);

// Raw (un-normalized, un-scaled) attention scores <x_l, W x_L> for each
// position l of the sequence.
Vec raw_attention_scores(const ModelParams& p, const Sequence& seq);

double forward(const ModelParams& p, const Sequence& seq);

// Sign of the forward score with the tie convention sign(0) := +1.
int predict(const ModelParams& p, const Sequence& seq);

// <u, E_pos^tok>
double token_score(const ModelParams& p, int pos, Token tok);

// <E_row_pos^row_tok, W E_col_pos^col_tok>
double attention_score(const ModelParams& p, int row_pos, Token row_tok,
                       int col_pos, Token col_tok);

// Checkpoint files hold {d, lambda, u, W, step, task} as JSON with
// shortest-round-trip floats, so save followed by load is bit-exact.
struct Checkpoint {
    ModelParams params;
    long step = 0;
    Task task = Task::even_pairs;
};

void save_checkpoint(const ModelParams& p, long step, Task task, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace attnlab
