#pragma once

// Binary sequences over the alphabet {a, b}, their labels, and the orthogonal
// position/token embedding used by the attention model. Token a at position l
// maps to basis vector 2l-2 and token b to 2l-1 (0-based rows), so sequences of
// length L need an embedding dimension d >= 2L.

#include <cstdint>
#include <string>
#include <vector>

#include "attnlab/linalg.hpp"

namespace attnlab {

enum class Token : uint8_t { a = 0, b = 1 };

inline Token flip(Token t) { return t == Token::a ? Token::b : Token::a; }
inline char to_char(Token t) { return t == Token::a ? 'a' : 'b'; }

// Hard cap on sequence length for enumeration and embedding; keeps 2^L
// enumerations and index arithmetic comfortably in range.
inline constexpr int kMaxSequenceLength = 20;

class Sequence {
  public:
    Sequence() = default;
    explicit Sequence(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    // Parses a string of 'a'/'b' characters; throws on anything else.
    static Sequence from_string(const std::string& s);
    std::string to_string() const;

    int length() const { return static_cast<int>(tokens_.size()); }
    bool empty() const { return tokens_.empty(); }

    // 1-based position access, matching the conventions used throughout.
    Token at(int pos) const;
    Token first() const { return at(1); }
    Token last() const { return at(length()); }

    void push_back(Token t) { tokens_.push_back(t); }
    void drop_front() { tokens_.erase(tokens_.begin()); }

    const std::vector<Token>& tokens() const { return tokens_; }
    bool operator==(const Sequence& o) const { return tokens_ == o.tokens_; }

  private:
    std::vector<Token> tokens_;
};

// All 2^L sequences of length L in lexicographic order with a < b. Every
// dataset and gradient accumulation iterates in this order, which is what
// makes downstream floating-point results bit-reproducible.
std::vector<Sequence> enumerate_sequences(int length);

// 0-based embedding row for the token at 1-based position pos.
inline int embedding_index(int pos, Token t) {
    return 2 * (pos - 1) + static_cast<int>(t);
}

// d x L matrix whose column l is the one-hot embedding of token l. Requires
// 2 * length <= d.
Matrix embed(const Sequence& seq, int d);

// Number of contiguous occurrences of any pattern in `patterns`, counted with
// overlap (e.g. "ababab" against {ab, ba} gives 5).
int substring_pattern_count(const Sequence& seq, const std::vector<std::string>& patterns);

// +1 iff the count of contiguous "ab"/"ba" substrings is even; equivalently,
// +1 iff the first and last tokens agree.
int even_pairs_label(const Sequence& seq);

// +1 iff the number of b tokens is even.
int parity_label(const Sequence& seq);

// Step label for chain-of-thought parity: +1 iff the token at position
// L - l0 + 1 equals the last token. Requires length >= l0.
int cot_step_label(const Sequence& seq, int l0);

// A full teacher chain for parity via repeated first-vs-last comparison on a
// sliding window. Starting from a base sequence of length l0, step t appends
// token a iff the tokens at positions t and l0 + t - 1 of the extended
// sequence agree. After l0 - 1 steps, the last appended token encodes the
// parity of the base sequence (a = even).
struct CoTTrace {
    Sequence base;
    std::vector<Token> appended;          // l0 - 1 tokens, in append order
    Sequence full;                        // base followed by appended
    int final_label = 0;                  // +1 iff appended.back() == a
};

CoTTrace cot_trace(const Sequence& base, int l0);

enum class Task : uint8_t { even_pairs, parity_cot };
enum class TaskTag : uint8_t { even_pairs, cot_step, parity };

std::string to_string(Task t);
std::string to_string(TaskTag t);
Task task_from_string(const std::string& s);

struct LabeledExample {
    Sequence seq;
    int label = 0;       // +1 or -1
    double weight = 0.0; // 1 / 2^L, the per-length-class normalizer
    TaskTag tag = TaskTag::even_pairs;
};

// Examples grouped by length (ascending), lexicographic within a length.
struct TaskDataset {
    Task task = Task::even_pairs;
    int d = 0;
    int l_max = 0;  // even-pairs horizon; for parity_cot this is 2*l0 - 1
    int l0 = 0;     // parity window, 0 for plain even pairs
    std::vector<LabeledExample> examples;

    int max_length() const { return l_max; }
};

// Exhaustive even-pairs dataset over lengths 1..l_max. d defaults to 2*l_max
// when passed as 0.
TaskDataset build_even_pairs_dataset(int l_max, int d = 0);

// Exhaustive parity training set: lengths 1..l0-1 carry even-pairs labels
// (the regularization block), lengths l0..2*l0-1 carry the chain-of-thought
// step labels. d defaults to 2*(2*l0 - 1) when passed as 0.
TaskDataset build_parity_cot_dataset(int l0, int d = 0);

// CSV dump with header length,sequence,label,weight,task_tag.
std::string dataset_csv(const TaskDataset& ds);

}  // namespace attnlab
