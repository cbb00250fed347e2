#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sentorder/embedding_io.hpp"

namespace sentorder {

// Dense n x n score matrix, row-major. Diagonal entries are 0 and never read
// by orderers. scores(i, j) is the score of placing sentence j right after i.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  SimilarityMatrix(std::size_t n, bool symmetric, std::string scorer_tag);
  // Builds from nested rows; the diagonal is overwritten with 0.
  static SimilarityMatrix from_rows(const std::vector<std::vector<double>>& rows, bool symmetric,
                                    std::string scorer_tag = "custom");

  std::size_t size() const noexcept { return n_; }
  bool symmetric() const noexcept { return symmetric_; }
  const std::string& scorer_tag() const noexcept { return tag_; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return scores_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) noexcept { scores_[i * n_ + j] = v; }
  // Sets (i, j) and (j, i).
  void set_pair(std::size_t i, std::size_t j, double v) noexcept {
    scores_[i * n_ + j] = v;
    scores_[j * n_ + i] = v;
  }

  std::span<const double> row(std::size_t i) const noexcept {
    return {scores_.data() + i * n_, n_};
  }
  const std::vector<double>& data() const noexcept { return scores_; }

  // Throws if n == 0, an entry is not finite, or the symmetric flag is set
  // while some |s(i,j) - s(j,i)| > 1e-12.
  void validate() const;

 private:
  std::size_t n_ = 0;
  bool symmetric_ = false;
  std::string tag_;
  std::vector<double> scores_;
};

// {"n":int,"scores":[[...]],"symmetric":bool}
void dump_matrix_json(std::ostream& out, const SimilarityMatrix& m);

// dot(u,v) / (|u| |v|), clamped to [-1, 1]. Throws on length mismatch,
// empty input or a zero-norm vector.
double cosine(std::span<const double> u, std::span<const double> v);

SimilarityMatrix sentence_matrix(const SentenceVectors& vecs);

// Bidirectional max-alignment of token vectors:
//   r = sum_{w in a} best(w, b) / (2|a|) + sum_{w in b} best(w, a) / (2|b|)
// where best(w, s) is the largest cosine between w and any token of s.
double word_level_similarity(std::span<const Token> a, std::span<const Token> b);
SimilarityMatrix word_level_matrix(const TokenVectors& toks);

// Mean of each sentence's token vectors; encoder_tag becomes "cbow".
SentenceVectors cbow_reduce(const TokenVectors& toks);

// Lowercases, splits on whitespace, then splits leading and trailing ASCII
// punctuation off each chunk as one token per character.
std::vector<std::string> tokenize(std::string_view sentence);

// Sentence-level BLEU of `candidate` against the single `reference` with
// orders 1..max_n. An order with zero matched n-grams uses (0+1)/(total+1)
// as its precision; the geometric mean of precisions is scaled by the
// brevity penalty exp(1 - r/c) when c < r. Result lies in (0, 1].
double smoothed_bleu(std::span<const std::string> candidate,
                     std::span<const std::string> reference, int max_n = 4);

// scores(i, j) = smoothed_bleu(tokens_i, tokens_j). Not symmetric.
SimilarityMatrix ngram_overlap_matrix(std::span<const std::string> sentences, int max_n = 4);

}  // namespace sentorder
