#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace sentorder {

using Vector = std::vector<double>;

// One vector per shuffled sentence position.
struct SentenceVectors {
  std::string story_id;
  std::vector<Vector> vectors;
  std::size_t dim = 0;
  std::string encoder_tag;

  std::size_t size() const noexcept { return vectors.size(); }
};

struct Token {
  std::string text;
  Vector vector;
};

// Token-granular vectors, sentences indexed by shuffled position.
struct TokenVectors {
  std::string story_id;
  std::vector<std::vector<Token>> sentences;
  std::size_t dim = 0;
  std::string encoder_tag;

  std::size_t size() const noexcept { return sentences.size(); }
};

using SentenceVectorMap = std::map<std::string, SentenceVectors>;
using TokenVectorMap = std::map<std::string, TokenVectors>;

// Both readers expect the first non-blank line to be the header
// {"header":true,"dim":D,"encoder_tag":T}. Records for one story may appear in
// any order and interleave with other stories; after reading, every story must
// cover sentence indices 0..n-1 exactly once.
SentenceVectorMap read_sentence_vectors(std::istream& in,
                                        const std::string& source_name = "<stream>");
SentenceVectorMap read_sentence_vectors(const std::filesystem::path& path);

TokenVectorMap read_token_vectors(std::istream& in, const std::string& source_name = "<stream>");
TokenVectorMap read_token_vectors(const std::filesystem::path& path);

// Writers emit the header line followed by one record per (story, sentence) in
// map order. Doubles are written in shortest round-trip form (at most 17
// significant digits), so read(write(x)) reproduces every value bit-exactly.
void write_sentence_vectors(std::ostream& out, const SentenceVectorMap& data);
void write_sentence_vectors(const std::filesystem::path& path, const SentenceVectorMap& data);
void write_token_vectors(std::ostream& out, const TokenVectorMap& data);
void write_token_vectors(const std::filesystem::path& path, const TokenVectorMap& data);

// Invariant checks shared by readers and in-memory constructors.
void validate(const SentenceVectors& vecs);
void validate(const TokenVectors& toks);

}  // namespace sentorder
