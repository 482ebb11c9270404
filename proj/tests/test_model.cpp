#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "attnlab/model.hpp"
#include "attnlab/sequences.hpp"

using namespace attnlab;

namespace {

ModelParams random_params(int d, double lambda, unsigned seed) {
    ModelParams p = ModelParams::zeros(d, lambda);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-0.8, 0.8);
    for (double& x : p.u) x = dist(rng);
    for (double& x : p.W.data) x = dist(rng);
    return p;
}

}  // namespace

TEST_CASE("zero attention is uniform") {
    const ModelParams p = ModelParams::zeros(12, 2.0);
    for (int L = 1; L <= 6; ++L) {
        for (const Sequence& s : enumerate_sequences(L)) {
            const Vec phi = attention_weights(p, s);
            REQUIRE(phi.size() == static_cast<size_t>(L));
            for (double v : phi) CHECK(v == doctest::Approx(1.0 / L).epsilon(1e-15));
        }
    }
    CHECK(attention_weights(p, Sequence::from_string("b")).size() == 1);
    CHECK(attention_weights(p, Sequence::from_string("b"))[0] == 1.0);
}

TEST_CASE("softmax of a known score gap") {
    // Scores (2, 0) at lambda=2 put weight e/(e+1) on the first position.
    ModelParams p = ModelParams::zeros(4, 2.0);
    const Sequence s = Sequence::from_string("aa");
    const int col = embedding_index(2, Token::a);
    p.W(embedding_index(1, Token::a), col) = 2.0;
    const Vec phi = attention_weights(p, s);
    const double e = std::exp(1.0);
    CHECK(phi[0] == doctest::Approx(e / (e + 1.0)).epsilon(1e-15));
    CHECK(phi[1] == doctest::Approx(1.0 / (e + 1.0)).epsilon(1e-15));
}

TEST_CASE("attention weights form a distribution") {
    const ModelParams p = random_params(12, 2.0, 7u);
    for (const Sequence& s : enumerate_sequences(6)) {
        const Vec phi = attention_weights(p, s);
        double sum = 0.0;
        for (double v : phi) {
            CHECK(v > 0.0);
            sum += v;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("softmax with scaling lambda is 1/lambda-Lipschitz") {
    // Perturb one W entry; the attention weights may move at most
    // ||score change|| / lambda in Euclidean norm.
    for (double lambda : {1.0, 2.0, 10.0}) {
        ModelParams p = random_params(8, lambda, 11u);
        const Sequence s = Sequence::from_string("abab");
        const Vec before = attention_weights(p, s);
        const double delta = 0.37;
        p.W(embedding_index(2, Token::b), embedding_index(4, Token::b)) += delta;
        const Vec after = attention_weights(p, s);
        double moved = 0.0;
        for (size_t i = 0; i < before.size(); ++i) {
            moved += (after[i] - before[i]) * (after[i] - before[i]);
        }
        CHECK(std::sqrt(moved) <= delta / lambda + 1e-12);
    }
}

TEST_CASE("raw scores pick single attention entries") {
    // Cross-check raw_attention_scores against the embedding-matrix route
    // s_l = <x_l, W x_L>.
    const ModelParams p = random_params(12, 2.0, 3u);
    for (const Sequence& s : enumerate_sequences(5)) {
        const Matrix X = embed(s, p.d);
        const Vec raw = raw_attention_scores(p, s);
        const int L = s.length();
        for (int l = 0; l < L; ++l) {
            double expect = 0.0;
            for (int r = 0; r < p.d; ++r) {
                for (int c = 0; c < p.d; ++c) {
                    expect += X(r, l) * p.W(r, c) * X(c, L - 1);
                }
            }
            CHECK(raw[static_cast<size_t>(l)] == doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("forward is the attention-weighted token score") {
    const ModelParams p = random_params(12, 2.0, 5u);
    for (const Sequence& s : enumerate_sequences(6)) {
        const Vec phi = attention_weights(p, s);
        double expect = 0.0;
        for (int pos = 1; pos <= s.length(); ++pos) {
            expect += phi[static_cast<size_t>(pos - 1)] * token_score(p, pos, s.at(pos));
        }
        CHECK(forward(p, s) == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("forward after an idealized first step") {
    // u puts eta/4 on both first-position coordinates, W stays zero: a
    // length-L sequence scores eta/(4L) regardless of its tokens.
    const double eta = 0.1;
    ModelParams p = ModelParams::zeros(12, 2.0);
    p.u[embedding_index(1, Token::a)] = eta / 4.0;
    p.u[embedding_index(1, Token::b)] = eta / 4.0;
    for (int L = 1; L <= 6; ++L) {
        for (const Sequence& s : enumerate_sequences(L)) {
            CHECK(forward(p, s) == doctest::Approx(eta / (4.0 * L)).epsilon(1e-15));
        }
    }
}

TEST_CASE("predict sign convention") {
    const ModelParams zero = ModelParams::zeros(8, 2.0);
    CHECK(predict(zero, Sequence::from_string("ab")) == +1);  // tie goes to +1

    ModelParams p = zero;
    p.u[embedding_index(1, Token::a)] = -1.0;
    CHECK(predict(p, Sequence::from_string("aa")) == -1);
    p.u[embedding_index(1, Token::a)] = 1.0;
    CHECK(predict(p, Sequence::from_string("aa")) == +1);
}

TEST_CASE("score accessors address the right entries") {
    ModelParams p = ModelParams::zeros(8, 2.0);
    p.u[embedding_index(3, Token::b)] = 0.25;
    p.W(embedding_index(2, Token::a), embedding_index(4, Token::b)) = -1.5;
    CHECK(token_score(p, 3, Token::b) == 0.25);
    CHECK(token_score(p, 3, Token::a) == 0.0);
    CHECK(attention_score(p, 2, Token::a, 4, Token::b) == -1.5);
    CHECK(attention_score(p, 2, Token::b, 4, Token::b) == 0.0);
    CHECK_THROWS_AS(token_score(p, 5, Token::a), std::out_of_range);
    CHECK_THROWS_AS(attention_score(p, 1, Token::a, 5, Token::a), std::out_of_range);
}

TEST_CASE("model validates sequence length") {
    const ModelParams p = ModelParams::zeros(4, 2.0);
    CHECK_THROWS_AS(forward(p, Sequence::from_string("aaa")), std::invalid_argument);
    CHECK_THROWS_AS(attention_weights(p, Sequence()), std::invalid_argument);
}

TEST_CASE("checkpoint round trip is bit exact") {
    const ModelParams p = random_params(12, 2.0, 99u);
    const std::string path = "test_model_ckpt.json";
    save_checkpoint(p, 1234, Task::even_pairs, path);
    const Checkpoint ck = load_checkpoint(path);
    CHECK(ck.step == 1234);
    CHECK(ck.task == Task::even_pairs);
    CHECK(ck.params.d == p.d);
    CHECK(ck.params.lambda == p.lambda);
    CHECK(ck.params.u == p.u);      // element-wise bit equality
    CHECK(ck.params.W == p.W);
    std::remove(path.c_str());

    CHECK_THROWS_AS(load_checkpoint("does_not_exist.json"), std::runtime_error);
}
