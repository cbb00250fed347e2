#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "sentorder/error.hpp"
#include "sentorder/similarity.hpp"

using namespace sentorder;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

std::vector<Token> random_sentence(std::size_t tokens, std::size_t dim, std::mt19937_64& rng) {
  std::vector<Token> s;
  for (std::size_t k = 0; k < tokens; ++k) s.push_back({"t" + std::to_string(k), random_vec(dim, rng)});
  return s;
}

// Independent restatement of the bidirectional max alignment, written with plain
// loops and long double accumulation.
double word_level_oracle(const std::vector<Token>& a, const std::vector<Token>& b) {
  auto cos = [](const Vector& u, const Vector& v) {
    long double d = 0, nu = 0, nv = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      d += static_cast<long double>(u[i]) * v[i];
      nu += static_cast<long double>(u[i]) * u[i];
      nv += static_cast<long double>(v[i]) * v[i];
    }
    return static_cast<double>(d / std::sqrt(nu * nv));
  };
  auto side = [&](const std::vector<Token>& x, const std::vector<Token>& y) {
    double total = 0;
    for (const auto& w : x) {
      double best = -2;
      for (const auto& t : y) best = std::max(best, cos(w.vector, t.vector));
      total += best;
    }
    return total / (2.0 * static_cast<double>(x.size()));
  };
  return side(a, b) + side(b, a);
}

}  // namespace

TEST_CASE("cosine examples") {
  const std::vector<double> a{3, 4};
  CHECK(cosine(a, a) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cosine(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0);
  // 32 / (sqrt(14) sqrt(77)), evaluated separately.
  CHECK(cosine(std::vector<double>{1, 2, 3}, std::vector<double>{4, 5, 6}) ==
        doctest::Approx(0.9746318461970762).epsilon(1e-14));
  CHECK(cosine(std::vector<double>{1, 1}, std::vector<double>{-2, -2}) ==
        doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("cosine errors instead of returning 0 for degenerate input") {
  const std::vector<double> z{0, 0}, u{1, 0}, w{1, 0, 0};
  CHECK_THROWS_AS(cosine(z, u), Error);
  CHECK_THROWS_AS(cosine(u, z), Error);
  CHECK_THROWS_AS(cosine(u, w), Error);
  CHECK_THROWS_AS(cosine(std::vector<double>{}, std::vector<double>{}), Error);
}

TEST_CASE("cosine is scale invariant and bounded") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> scale(1e-3, 1e3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 64;
    auto u = random_vec(n, rng);
    auto v = random_vec(n, rng);
    const double c = cosine(u, v);
    CHECK(c >= -1.0);
    CHECK(c <= 1.0);
    const double alpha = scale(rng), beta = scale(rng);
    for (auto& x : u) x *= alpha;
    for (auto& x : v) x *= beta;
    CHECK(std::abs(cosine(u, v) - c) <= 1e-12);
  }
}

TEST_CASE("sentence_matrix") {
  SUBCASE("identical vectors") {
    SentenceVectors sv{"s", {{1, 2}, {1, 2}}, 2, "t"};
    const auto m = sentence_matrix(sv);
    CHECK(m(0, 1) == doctest::Approx(1.0));
    CHECK(m(1, 0) == doctest::Approx(1.0));
    CHECK(m(0, 0) == 0.0);
    CHECK(m.symmetric());
  }
  SUBCASE("n = 5 fills the 10 unordered pairs, symmetric and bounded") {
    std::mt19937_64 rng(3);
    SentenceVectors sv{"s", {}, 16, "t"};
    for (int i = 0; i < 5; ++i) sv.vectors.push_back(random_vec(16, rng));
    const auto m = sentence_matrix(sv);
    int pairs = 0;
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(m(i, i) == 0.0);
      for (std::size_t j = i + 1; j < 5; ++j) {
        ++pairs;
        CHECK(m(i, j) == m(j, i));
        CHECK(m(i, j) == doctest::Approx(cosine(sv.vectors[i], sv.vectors[j])).epsilon(1e-15));
        CHECK(std::abs(m(i, j)) <= 1.0);
      }
    }
    CHECK(pairs == 10);
    m.validate();
  }
  SUBCASE("zero vector propagates an error") {
    SentenceVectors sv{"s", {{1, 2}, {0, 0}}, 2, "t"};
    CHECK_THROWS_AS(sentence_matrix(sv), Error);
  }
}

TEST_CASE("word_level_similarity worked examples") {
  const std::vector<Token> a{{"a", {1, 0}}};
  const std::vector<Token> b{{"b", {0.6, 0.8}}};
  // Single tokens: c/2 + c/2 = c with c = 0.6.
  CHECK(word_level_similarity(a, b) == doctest::Approx(cosine(a[0].vector, b[0].vector)));
  CHECK(word_level_similarity(a, b) == doctest::Approx(0.6));

  const std::vector<Token> s{{"x", {1, 2}}, {"y", {-3, 1}}, {"z", {0.5, 0.5}}};
  CHECK(word_level_similarity(s, s) == doctest::Approx(1.0));

  // s_i = {(1,0)}, s_j = {(1,0),(0,1)}: 1/2 + (1 + 0)/4.
  const std::vector<Token> si{{"p", {1, 0}}};
  const std::vector<Token> sj{{"p", {1, 0}}, {"q", {0, 1}}};
  CHECK(word_level_similarity(si, sj) == 0.75);

  CHECK_THROWS_AS(word_level_similarity(std::vector<Token>{}, sj), Error);
  CHECK_THROWS_AS(word_level_similarity(std::vector<Token>{{"z", {0, 0}}}, sj), Error);
}

TEST_CASE("word_level_similarity matches the oracle and is exactly symmetric") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t dim = 1 + rng() % 40;
    const auto a = random_sentence(1 + rng() % 8, dim, rng);
    const auto b = random_sentence(1 + rng() % 8, dim, rng);
    const double ab = word_level_similarity(a, b);
    CHECK(ab == word_level_similarity(b, a));
    CHECK(ab == doctest::Approx(word_level_oracle(a, b)).epsilon(1e-12));
    CHECK(ab >= -1.0);
    CHECK(ab <= 1.0);
  }
}

TEST_CASE("word_level_matrix is symmetric and agrees with the pairwise function") {
  std::mt19937_64 rng(10);
  TokenVectors tv{"s", {}, 8, "bert"};
  for (int i = 0; i < 5; ++i) tv.sentences.push_back(random_sentence(1 + rng() % 6, 8, rng));
  const auto m = word_level_matrix(tv);
  CHECK(m.symmetric());
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      if (i == j) continue;
      CHECK(m(i, j) == m(j, i));
      CHECK(m(i, j) == word_level_similarity(tv.sentences[i], tv.sentences[j]));
    }
  }
}

TEST_CASE("cbow_reduce") {
  TokenVectors tv{"s", {{{"a", {2, 0}}, {"b", {0, 2}}}, {{"c", {3, -1}}}}, 2, "glove"};
  const auto sv = cbow_reduce(tv);
  CHECK(sv.encoder_tag == "cbow");
  CHECK(sv.vectors[0] == Vector{1, 1});
  CHECK(sv.vectors[1] == Vector{3, -1});

  TokenVectors copies{"s", {{{"a", {0.25, 1.5}}, {"a", {0.25, 1.5}}, {"a", {0.25, 1.5}}, {"a", {0.25, 1.5}}}}, 2, "x"};
  CHECK(cbow_reduce(copies).vectors[0] == Vector{0.25, 1.5});

  TokenVectors cancel{"s", {{{"a", {1, 1}}, {"b", {-1, -1}}}}, 2, "x"};
  CHECK_THROWS_AS(cbow_reduce(cancel), Error);
  TokenVectors empty{"s", {{}}, 2, "x"};
  CHECK_THROWS_AS(cbow_reduce(empty), Error);
}

TEST_CASE("cbow_reduce commutes with token permutation") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    TokenVectors tv{"s", {random_sentence(2 + rng() % 10, 6, rng)}, 6, "x"};
    TokenVectors shuffled = tv;
    std::shuffle(shuffled.sentences[0].begin(), shuffled.sentences[0].end(), rng);
    const auto a = cbow_reduce(tv).vectors[0];
    const auto b = cbow_reduce(shuffled).vectors[0];
    for (std::size_t d = 0; d < 6; ++d) CHECK(std::abs(a[d] - b[d]) <= 1e-12);
  }
}

TEST_CASE("tokenize lowercases and detaches punctuation") {
  CHECK(tokenize("Hello, World!") == std::vector<std::string>{"hello", ",", "world", "!"});
  CHECK(tokenize("  \"Quoted\"   text...") ==
        std::vector<std::string>{"\"", "quoted", "\"", "text", ".", ".", "."});
  CHECK(tokenize("don't stop") == std::vector<std::string>{"don't", "stop"});
  CHECK(tokenize("   ").empty());
}

TEST_CASE("smoothed_bleu") {
  const std::vector<std::string> abc{"a", "b", "c"}, def{"d", "e", "f"}, abd{"a", "b", "d"};
  CHECK(smoothed_bleu(abc, abc) == doctest::Approx(1.0));

  // Hand-computed precisions: disjoint (1/4, 1/3, 1/2, 1) and shared bigram
  // (2/3, 1/2, 1/2, 1), each the 4th root of the product.
  const double disjoint = smoothed_bleu(abc, def);
  const double shared = smoothed_bleu(abc, abd);
  CHECK(disjoint == doctest::Approx(0.4518010018049224).epsilon(1e-14));
  CHECK(shared == doctest::Approx(0.6389431042462724).epsilon(1e-14));
  CHECK(disjoint > 0.0);
  CHECK(disjoint < shared);
  CHECK(shared < smoothed_bleu(abc, abc));

  // Length asymmetry: the brevity penalty only hits the shorter candidate.
  const std::vector<std::string> abcd{"a", "b", "c", "d"}, ab{"a", "b"};
  CHECK(smoothed_bleu(abcd, ab) == doctest::Approx(0.408248290463863).epsilon(1e-14));
  CHECK(smoothed_bleu(ab, abcd) == doctest::Approx(0.36787944117144233).epsilon(1e-14));

  CHECK_THROWS_AS(smoothed_bleu(std::vector<std::string>{}, abc), Error);
  CHECK_THROWS_AS(smoothed_bleu(abc, abc, 0), Error);
}

TEST_CASE("ngram_overlap_matrix") {
  const std::vector<std::string> sentences{"The cat sat on the mat.", "The cat sat.",
                                           "Dogs bark loudly at night!"};
  const auto m = ngram_overlap_matrix(sentences);
  CHECK_FALSE(m.symmetric());
  CHECK(m(0, 1) != m(1, 0));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(m(i, i) == 0.0);
    for (std::size_t j = 0; j < 3; ++j) {
      if (i == j) continue;
      CHECK(m(i, j) > 0.0);
      CHECK(m(i, j) <= 1.0);
    }
  }
  CHECK(m(0, 1) > m(0, 2));
  const std::vector<std::string> same{"Same words here.", "same words here ."};
  CHECK(ngram_overlap_matrix(same)(0, 1) == doctest::Approx(1.0));
  const std::vector<std::string> blank{"fine", "   "};
  CHECK_THROWS_AS(ngram_overlap_matrix(blank), Error);
}

TEST_CASE("SimilarityMatrix validation and JSON dump") {
  const auto m = SimilarityMatrix::from_rows({{9, 0.5}, {0.5, 9}}, true, "x");
  CHECK(m(0, 0) == 0.0);
  std::ostringstream out;
  dump_matrix_json(out, m);
  CHECK(out.str() == "{\"n\":2,\"scores\":[[0.0,0.5],[0.5,0.0]],\"symmetric\":true}");
  CHECK_THROWS_AS(SimilarityMatrix::from_rows({{0, 0.5}, {0.4, 0}}, true), Error);
  CHECK_NOTHROW(SimilarityMatrix::from_rows({{0, 0.5}, {0.4, 0}}, false));
  CHECK_THROWS_AS(SimilarityMatrix::from_rows({{0, 0.5}}, false), Error);
  CHECK_THROWS_AS(SimilarityMatrix::from_rows({{0, NAN}, {1, 0}}, false), Error);
}
