#include "sentorder/similarity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <ostream>
#include <unordered_map>

#include <json.hpp>

#include "sentorder/error.hpp"
#include "sentorder/simd/kernels.hpp"

namespace sentorder {
namespace {

// Shared by every cosine path so that a pairwise table built from cached
// norms agrees bit-for-bit with cosine().
inline double cosine_from_parts(double dot, double sq_u, double sq_v) {
  const double c = dot / (std::sqrt(sq_u) * std::sqrt(sq_v));
  return std::clamp(c, -1.0, 1.0);
}

double checked_squared_norm(std::span<const double> v) {
  const double sq = simd::squared_norm(v);
  if (!(sq > 0.0)) throw Error("cosine: zero-norm vector");
  return sq;
}

// Token vectors of one sentence with cached squared norms.
struct NormedTokens {
  std::vector<std::span<const double>> vecs;
  std::vector<double> sq_norms;
};

NormedTokens prepare(std::span<const Token> tokens, std::size_t dim) {
  if (tokens.empty()) throw Error("word-level similarity: sentence has no tokens");
  NormedTokens out;
  out.vecs.reserve(tokens.size());
  out.sq_norms.reserve(tokens.size());
  for (const Token& t : tokens) {
    if (t.vector.size() != dim) throw Error("word-level similarity: token dimension mismatch");
    out.vecs.emplace_back(t.vector);
    out.sq_norms.push_back(checked_squared_norm(t.vector));
  }
  return out;
}

// sum over w in a of max over t in b of cosine(w, t).
double directed_alignment(const NormedTokens& a, const NormedTokens& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.vecs.size(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.vecs.size(); ++j) {
      const double c =
          cosine_from_parts(simd::dot(a.vecs[i], b.vecs[j]), a.sq_norms[i], b.sq_norms[j]);
      best = std::max(best, c);
    }
    sum += best;
  }
  return sum;
}

double word_level_prepared(const NormedTokens& a, const NormedTokens& b) {
  const auto na = static_cast<double>(a.vecs.size());
  const auto nb = static_cast<double>(b.vecs.size());
  return directed_alignment(a, b) / (2.0 * na) + directed_alignment(b, a) / (2.0 * nb);
}

std::string join_ngram(std::span<const std::string> tokens, std::size_t start, std::size_t n) {
  std::string key;
  for (std::size_t k = 0; k < n; ++k) {
    if (k) key.push_back('\x1f');
    key += tokens[start + k];
  }
  return key;
}

std::unordered_map<std::string, std::size_t> ngram_counts(std::span<const std::string> tokens,
                                                          std::size_t n) {
  std::unordered_map<std::string, std::size_t> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) ++counts[join_ngram(tokens, i, n)];
  return counts;
}

bool is_ascii_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

}  // namespace

SimilarityMatrix::SimilarityMatrix(std::size_t n, bool symmetric, std::string scorer_tag)
    : n_(n), symmetric_(symmetric), tag_(std::move(scorer_tag)), scores_(n * n, 0.0) {}

SimilarityMatrix SimilarityMatrix::from_rows(const std::vector<std::vector<double>>& rows,
                                             bool symmetric, std::string scorer_tag) {
  const std::size_t n = rows.size();
  SimilarityMatrix m(n, symmetric, std::move(scorer_tag));
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw Error("similarity matrix rows must be square");
    for (std::size_t j = 0; j < n; ++j) m.set(i, j, i == j ? 0.0 : rows[i][j]);
  }
  m.validate();
  return m;
}

void SimilarityMatrix::validate() const {
  if (n_ == 0) throw Error("similarity matrix is empty");
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      const double v = (*this)(i, j);
      if (!std::isfinite(v)) throw Error("similarity matrix has a non-finite entry");
      if (symmetric_ && std::abs(v - (*this)(j, i)) > 1e-12) {
        throw Error("similarity matrix flagged symmetric but is not");
      }
    }
  }
}

void dump_matrix_json(std::ostream& out, const SimilarityMatrix& m) {
  nlohmann::ordered_json j;
  j["n"] = m.size();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    rows.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
  }
  j["scores"] = std::move(rows);
  j["symmetric"] = m.symmetric();
  out << j.dump();
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw Error("cosine: vector lengths differ");
  if (u.empty()) throw Error("cosine: empty vectors");
  const double su = checked_squared_norm(u);
  const double sv = checked_squared_norm(v);
  return cosine_from_parts(simd::dot(u, v), su, sv);
}

SimilarityMatrix sentence_matrix(const SentenceVectors& vecs) {
  validate(vecs);
  const std::size_t n = vecs.size();
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = checked_squared_norm(vecs.vectors[i]);

  SimilarityMatrix m(n, true, "cosine-sentence:" + vecs.encoder_tag);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      m.set_pair(i, j, cosine_from_parts(simd::dot(vecs.vectors[i], vecs.vectors[j]), sq[i], sq[j]));
    }
  }
  return m;
}

double word_level_similarity(std::span<const Token> a, std::span<const Token> b) {
  if (a.empty() || b.empty()) throw Error("word-level similarity: sentence has no tokens");
  const std::size_t dim = a.front().vector.size();
  if (dim == 0) throw Error("word-level similarity: empty token vectors");
  return word_level_prepared(prepare(a, dim), prepare(b, dim));
}

SimilarityMatrix word_level_matrix(const TokenVectors& toks) {
  validate(toks);
  const std::size_t n = toks.size();
  std::vector<NormedTokens> prepared;
  prepared.reserve(n);
  for (const auto& sentence : toks.sentences) prepared.push_back(prepare(sentence, toks.dim));

  SimilarityMatrix m(n, true, "word-level:" + toks.encoder_tag);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      m.set_pair(i, j, word_level_prepared(prepared[i], prepared[j]));
    }
  }
  return m;
}

SentenceVectors cbow_reduce(const TokenVectors& toks) {
  validate(toks);
  SentenceVectors out;
  out.story_id = toks.story_id;
  out.dim = toks.dim;
  out.encoder_tag = "cbow";
  out.vectors.reserve(toks.size());
  for (std::size_t s = 0; s < toks.size(); ++s) {
    const auto& sentence = toks.sentences[s];
    Vector mean(toks.dim, 0.0);
    for (const Token& t : sentence) {
      for (std::size_t d = 0; d < toks.dim; ++d) mean[d] += t.vector[d];
    }
    const auto k = static_cast<double>(sentence.size());
    for (double& x : mean) x /= k;
    if (!(simd::squared_norm(mean) > 0.0)) {
      throw Error("cbow: story " + toks.story_id + " sentence " + std::to_string(s) +
                  " has a zero-norm mean vector");
    }
    out.vectors.push_back(std::move(mean));
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view sentence) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  const std::size_t n = sentence.size();
  while (i < n) {
    while (i < n && std::isspace(static_cast<unsigned char>(sentence[i]))) ++i;
    std::size_t end = i;
    while (end < n && !std::isspace(static_cast<unsigned char>(sentence[end]))) ++end;
    if (end == i) break;

    std::string_view chunk = sentence.substr(i, end - i);
    std::size_t lo = 0;
    std::size_t hi = chunk.size();
    while (lo < hi && is_ascii_punct(chunk[lo])) ++lo;
    while (hi > lo && is_ascii_punct(chunk[hi - 1])) --hi;

    for (std::size_t k = 0; k < lo; ++k) tokens.emplace_back(1, chunk[k]);
    if (hi > lo) {
      std::string word(chunk.substr(lo, hi - lo));
      std::transform(word.begin(), word.end(), word.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      tokens.push_back(std::move(word));
    }
    for (std::size_t k = hi; k < chunk.size(); ++k) tokens.emplace_back(1, chunk[k]);
    i = end;
  }
  return tokens;
}

double smoothed_bleu(std::span<const std::string> candidate,
                     std::span<const std::string> reference, int max_n) {
  if (candidate.empty() || reference.empty()) throw Error("smoothed BLEU: empty token list");
  if (max_n < 1) throw Error("smoothed BLEU: max_n must be >= 1");

  double log_precision = 0.0;
  for (int order = 1; order <= max_n; ++order) {
    const auto n = static_cast<std::size_t>(order);
    const std::size_t total = candidate.size() >= n ? candidate.size() - n + 1 : 0;
    const auto ref_counts = ngram_counts(reference, n);
    std::size_t matched = 0;
    for (const auto& [gram, count] : ngram_counts(candidate, n)) {
      if (auto it = ref_counts.find(gram); it != ref_counts.end()) {
        matched += std::min(count, it->second);
      }
    }
    const double p = matched > 0
                         ? static_cast<double>(matched) / static_cast<double>(total)
                         : 1.0 / static_cast<double>(total + 1);
    log_precision += std::log(p);
  }

  const auto c = static_cast<double>(candidate.size());
  const auto r = static_cast<double>(reference.size());
  const double brevity = c < r ? std::exp(1.0 - r / c) : 1.0;
  return brevity * std::exp(log_precision / max_n);
}

SimilarityMatrix ngram_overlap_matrix(std::span<const std::string> sentences, int max_n) {
  const std::size_t n = sentences.size();
  if (n == 0) throw Error("n-gram overlap: no sentences");
  std::vector<std::vector<std::string>> tokens;
  tokens.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    tokens.push_back(tokenize(sentences[i]));
    if (tokens.back().empty()) {
      throw Error("n-gram overlap: sentence " + std::to_string(i) + " has no tokens");
    }
  }
  SimilarityMatrix m(n, false, "ngram-overlap");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) m.set(i, j, smoothed_bleu(tokens[i], tokens[j], max_n));
    }
  }
  return m;
}

}  // namespace sentorder
