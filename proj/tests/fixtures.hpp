#pragma once
// Synthetic corpora for pipeline tests. Each story's sentence vectors drift
// along a random direction in gold order, so consecutive sentences are the
// most similar pairs. Vector files are keyed by the library's shuffle.

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "sentorder/corpus.hpp"
#include "sentorder/embedding_io.hpp"

namespace fixture {

struct Paths {
  std::filesystem::path corpus;
  std::filesystem::path sentence_vectors;
  std::filesystem::path token_vectors;
};

inline std::string story_id(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "story-%04zu", i);
  return buf;
}

inline std::vector<sentorder::Story> make_stories(std::size_t count, std::size_t n) {
  static const char* kWords[] = {"the", "cat", "sat", "on", "a", "mat", "and", "then",
                                 "dog", "ran", "home", "after", "school", "rain", "fell"};
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<std::size_t> w(0, std::size(kWords) - 1);
  std::vector<sentorder::Story> stories;
  for (std::size_t s = 0; s < count; ++s) {
    sentorder::Story story;
    story.id = story_id(s);
    story.title = "Title, \"" + std::to_string(s) + "\"";
    for (std::size_t k = 0; k < n; ++k) {
      std::string sentence = "Sentence " + std::to_string(k);
      for (int t = 0; t < 5; ++t) sentence += std::string(" ") + kWords[w(rng)];
      sentence += ".";
      story.sentences.push_back(sentence);
    }
    stories.push_back(std::move(story));
  }
  return stories;
}

inline void write_corpus_csv(const std::filesystem::path& path,
                             const std::vector<sentorder::Story>& stories) {
  std::ofstream out(path, std::ios::binary);
  const std::size_t n = stories.front().sentences.size();
  out << "storyid,storytitle";
  for (std::size_t k = 1; k <= n; ++k) out << ",sentence" << k;
  out << "\n";
  for (const auto& s : stories) {
    auto quote = [](const std::string& f) {
      std::string q = "\"";
      for (char c : f) {
        if (c == '"') q += '"';
        q += c;
      }
      return q + "\"";
    };
    out << s.id << ',' << quote(s.title.value_or(""));
    for (const auto& sentence : s.sentences) out << ',' << quote(sentence);
    out << "\n";
  }
}

// `noise` scales isotropic jitter relative to the per-step drift.
inline Paths make(const std::filesystem::path& dir, std::size_t count, std::size_t n,
                  std::size_t dim, std::uint64_t seed, double noise = 0.3) {
  std::filesystem::create_directories(dir);
  const auto stories = make_stories(count, n);
  Paths paths{dir / "corpus.csv", dir / "sentences.jsonl", dir / "tokens.jsonl"};
  write_corpus_csv(paths.corpus, stories);

  std::mt19937_64 rng(seed * 7919 + 17);
  std::normal_distribution<double> g(0.0, 1.0);
  sentorder::SentenceVectorMap sv;
  sentorder::TokenVectorMap tv;
  for (const auto& story : stories) {
    const auto inst = sentorder::shuffle_story(story, seed);
    std::vector<double> base(dim), dir_vec(dim);
    for (auto& x : base) x = g(rng);
    for (auto& x : dir_vec) x = g(rng);

    sentorder::SentenceVectors s{story.id, std::vector<sentorder::Vector>(n), dim, "synthetic"};
    sentorder::TokenVectors t{story.id, std::vector<std::vector<sentorder::Token>>(n), dim,
                              "synthetic"};
    for (std::size_t k = 0; k < n; ++k) {
      sentorder::Vector v(dim);
      for (std::size_t d = 0; d < dim; ++d) {
        v[d] = base[d] + 1.5 * static_cast<double>(k) * dir_vec[d] + noise * g(rng);
      }
      const std::size_t pos = inst.gold_perm[k];
      for (int tok = 0; tok < 3; ++tok) {
        sentorder::Vector tvv(dim);
        for (std::size_t d = 0; d < dim; ++d) tvv[d] = v[d] + 0.2 * g(rng);
        t.sentences[pos].push_back({"w" + std::to_string(tok), std::move(tvv)});
      }
      s.vectors[pos] = std::move(v);
    }
    sv.emplace(story.id, std::move(s));
    tv.emplace(story.id, std::move(t));
  }
  sentorder::write_sentence_vectors(paths.sentence_vectors, sv);
  sentorder::write_token_vectors(paths.token_vectors, tv);
  return paths;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace fixture
