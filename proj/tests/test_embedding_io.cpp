#include <doctest.h>

#include <cmath>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>

#include "sentorder/embedding_io.hpp"
#include "sentorder/error.hpp"

using namespace sentorder;

namespace {

const std::string kHeader2 = "{\"header\":true,\"dim\":2,\"encoder_tag\":\"sbert-wk\"}\n";

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

// Values that stress shortest round-trip printing.
double awkward(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  switch (rng() % 5) {
    case 0: return u(rng) * 1e-300;
    case 1: return u(rng) * 1e300;
    case 2: return 0.1 + u(rng) * 1e-16;
    case 3: return std::nextafter(1.0, 2.0);
    default: return u(rng);
  }
}

}  // namespace

TEST_CASE("sentence records land at their shuffled position") {
  std::istringstream in(kHeader2 +
                        "{\"story_id\":\"a\",\"sentence_index\":1,\"vector\":[0.0,2.5]}\n"
                        "{\"story_id\":\"a\",\"sentence_index\":0,\"vector\":[1.0,0.0]}\n");
  const auto m = read_sentence_vectors(in);
  REQUIRE(m.size() == 1);
  const auto& a = m.at("a");
  CHECK(a.dim == 2);
  CHECK(a.encoder_tag == "sbert-wk");
  REQUIRE(a.size() == 2);
  CHECK(a.vectors[0] == Vector{1.0, 0.0});
  CHECK(a.vectors[1] == Vector{0.0, 2.5});
}

TEST_CASE("five records for one story give n = 5") {
  std::string text = kHeader2;
  for (int i = 4; i >= 0; --i) {
    text += "{\"story_id\":\"a\",\"sentence_index\":" + std::to_string(i) +
            ",\"vector\":[1.0," + std::to_string(i) + "]}\n";
  }
  std::istringstream in(text);
  CHECK(read_sentence_vectors(in).at("a").size() == 5);
}

TEST_CASE("sentence reader rejects contract violations") {
  auto read = [](const std::string& text) {
    return [text] {
      std::istringstream in(text);
      read_sentence_vectors(in, "emb.jsonl");
    };
  };
  // A file announcing 768 but carrying a 512-float vector.
  std::string v768 = "[", v512 = "[";
  for (int i = 0; i < 768; ++i) v768 += (i ? ",1" : "1");
  for (int i = 0; i < 512; ++i) v512 += (i ? ",1" : "1");
  const std::string mixed = "{\"header\":true,\"dim\":768,\"encoder_tag\":\"x\"}\n"
                            "{\"story_id\":\"a\",\"sentence_index\":0,\"vector\":" + v768 + "]}\n"
                            "{\"story_id\":\"a\",\"sentence_index\":1,\"vector\":" + v512 + "]}\n";
  CHECK(error_of(read(mixed)).find("dimension 512, expected 768") != std::string::npos);
  CHECK(error_of(read(mixed)).find("emb.jsonl:3") != std::string::npos);

  const std::string gap = kHeader2 +
                          "{\"story_id\":\"a\",\"sentence_index\":0,\"vector\":[1,0]}\n"
                          "{\"story_id\":\"a\",\"sentence_index\":2,\"vector\":[1,0]}\n";
  CHECK(error_of(read(gap)).find("missing sentence index 1") != std::string::npos);

  const std::string zero = kHeader2 + "{\"story_id\":\"q\",\"sentence_index\":3,\"vector\":[0,0]}\n";
  const std::string zero_msg = error_of(read(zero));
  CHECK(zero_msg.find("all-zero") != std::string::npos);
  CHECK(zero_msg.find("story q sentence 3") != std::string::npos);

  const std::string dup = kHeader2 +
                          "{\"story_id\":\"a\",\"sentence_index\":0,\"vector\":[1,0]}\n"
                          "{\"story_id\":\"a\",\"sentence_index\":0,\"vector\":[1,0]}\n";
  CHECK(error_of(read(dup)).find("duplicate") != std::string::npos);

  CHECK_FALSE(error_of(read("{\"story_id\":\"a\",\"sentence_index\":0,\"vector\":[1]}\n")).empty());
  CHECK_FALSE(error_of(read("{\"header\":true,\"dim\":0}\n")).empty());
  CHECK_FALSE(error_of(read(kHeader2 + "not json\n")).empty());
}

TEST_CASE("token records") {
  const std::string one = kHeader2 +
                          "{\"story_id\":\"a\",\"sentence_index\":0,\"tokens\":[{\"t\":\"hi\",\"v\":[1,2]}]}\n";
  std::istringstream in(one);
  const auto m = read_token_vectors(in);
  REQUIRE(m.at("a").sentences.size() == 1);
  REQUIRE(m.at("a").sentences[0].size() == 1);
  CHECK(m.at("a").sentences[0][0].text == "hi");
  CHECK(m.at("a").sentences[0][0].vector == Vector{1.0, 2.0});

  std::istringstream empty(kHeader2 + "{\"story_id\":\"a\",\"sentence_index\":0,\"tokens\":[]}\n");
  CHECK_THROWS_WITH_AS(read_token_vectors(empty), doctest::Contains("empty token list"), Error);

  std::istringstream zero(kHeader2 +
                          "{\"story_id\":\"a\",\"sentence_index\":0,\"tokens\":[{\"t\":\"x\",\"v\":[0,0]}]}\n");
  CHECK_THROWS_AS(read_token_vectors(zero), Error);
}

TEST_CASE("read(write(x)) is bit-exact for both granularities") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = 1 + rng() % 12;
    SentenceVectorMap sv;
    TokenVectorMap tv;
    const int stories = 1 + static_cast<int>(rng() % 4);
    for (int s = 0; s < stories; ++s) {
      const std::string id = "s" + std::to_string(s) + "\"\\\xc3\xa9";
      SentenceVectors v{id, {}, dim, "tag"};
      TokenVectors t{id, {}, dim, "tag"};
      const std::size_t n = 1 + rng() % 6;
      for (std::size_t i = 0; i < n; ++i) {
        Vector x(dim);
        for (auto& c : x) c = awkward(rng);
        v.vectors.push_back(x);
        std::vector<Token> toks;
        for (std::size_t k = 0; k < 1 + rng() % 4; ++k) {
          Vector y(dim);
          for (auto& c : y) c = awkward(rng);
          toks.push_back({"tok" + std::to_string(k), y});
        }
        t.sentences.push_back(toks);
      }
      sv.emplace(id, v);
      tv.emplace(id, t);
    }

    std::stringstream s1, s2;
    write_sentence_vectors(s1, sv);
    write_token_vectors(s2, tv);
    const auto sv2 = read_sentence_vectors(s1);
    const auto tv2 = read_token_vectors(s2);
    REQUIRE(sv2.size() == sv.size());
    REQUIRE(tv2.size() == tv.size());
    for (const auto& [id, v] : sv) {
      const auto& w = sv2.at(id);
      CHECK(w.encoder_tag == v.encoder_tag);
      REQUIRE(w.vectors.size() == v.vectors.size());
      for (std::size_t i = 0; i < v.vectors.size(); ++i) {
        for (std::size_t d = 0; d < dim; ++d) CHECK(bit_equal(w.vectors[i][d], v.vectors[i][d]));
      }
    }
    for (const auto& [id, t] : tv) {
      const auto& u = tv2.at(id);
      REQUIRE(u.sentences.size() == t.sentences.size());
      for (std::size_t i = 0; i < t.sentences.size(); ++i) {
        REQUIRE(u.sentences[i].size() == t.sentences[i].size());
        for (std::size_t k = 0; k < t.sentences[i].size(); ++k) {
          CHECK(u.sentences[i][k].text == t.sentences[i][k].text);
          for (std::size_t d = 0; d < dim; ++d) {
            CHECK(bit_equal(u.sentences[i][k].vector[d], t.sentences[i][k].vector[d]));
          }
        }
      }
    }
  }
}

TEST_CASE("writer emits the documented line layout") {
  SentenceVectorMap sv;
  sv.emplace("a", SentenceVectors{"a", {{1.0, 0.5}}, 2, "use"});
  std::ostringstream out;
  write_sentence_vectors(out, sv);
  CHECK(out.str() ==
        "{\"header\":true,\"dim\":2,\"encoder_tag\":\"use\"}\n"
        "{\"story_id\":\"a\",\"sentence_index\":0,\"vector\":[1.0,0.5]}\n");

  SentenceVectorMap bad;
  bad.emplace("a", SentenceVectors{"a", {{1.0, 0.5}}, 2, "use"});
  bad.emplace("b", SentenceVectors{"b", {{1.0, 0.5, 1.0}}, 3, "use"});
  std::ostringstream sink;
  CHECK_THROWS_AS(write_sentence_vectors(sink, bad), Error);
}
