#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sentorder/corpus.hpp"
#include "sentorder/metrics.hpp"
#include "sentorder/orderers.hpp"
#include "sentorder/similarity.hpp"

namespace sentorder {

enum class ScorerKind { kCosineSentence, kWordLevel, kCbowCosine, kNgramOverlap };

ScorerKind parse_scorer(const std::string& name);
std::string to_string(ScorerKind kind);

struct RunConfig {
  std::filesystem::path corpus_path;
  SplitName split = SplitName::kTest;
  std::array<double, 3> split_ratios{0.8, 0.1, 0.1};
  ScorerKind scorer = ScorerKind::kCosineSentence;
  OrdererKind orderer = OrdererKind::kBruteForce;
  std::optional<std::filesystem::path> embeddings_path;
  std::uint64_t seed = 42;
  std::filesystem::path output_dir;

  std::size_t brute_force_cap = kDefaultBruteForceCap;
  std::size_t greedy_start = 0;
  int ngram_max_n = 4;
  // 0 selects std::thread::hardware_concurrency().
  std::size_t threads = 0;
  bool dump_matrices = false;

  // Throws on scorer/embedding incompatibility or missing required paths.
  void validate() const;
};

struct StoryOutcome {
  StoryResult result;
  Ordering ordering;
  Permutation gold_perm;
  // Kept only when RunConfig::dump_matrices is set.
  std::optional<SimilarityMatrix> matrix;
};

struct RunResult {
  MetricReport report;
  std::vector<StoryOutcome> outcomes;
  // Stories that exceeded the brute-force cap and were solved by dp instead.
  std::size_t dp_fallbacks = 0;
};

// The in-memory pipeline: matrix -> orderer -> metrics for every instance.
// Exactly one of the embedding maps is consulted, depending on the scorer.
// Results are collected by instance index, independent of thread schedule.
struct RunInputs {
  const std::vector<ShuffledInstance>* instances = nullptr;
  const SentenceVectorMap* sentence_vectors = nullptr;
  const TokenVectorMap* token_vectors = nullptr;
};
RunResult run_instances(const RunConfig& config, const RunInputs& inputs);

SimilarityMatrix build_matrix(const RunConfig& config, const ShuffledInstance& instance,
                              const RunInputs& inputs);
Ordering order_matrix(const RunConfig& config, const SimilarityMatrix& m);

// Loads the corpus, splits it with (ratios, seed) and shuffles every story of
// the selected split with `seed`. Shared by `run` and the shuffle subcommand.
std::vector<ShuffledInstance> prepare_instances(const std::filesystem::path& corpus_path,
                                                SplitName split,
                                                const std::array<double, 3>& ratios,
                                                std::uint64_t seed);

// Full run: load corpus, split, shuffle, load embeddings, order, score, then
// write report.json, per_story.csv, orderings.jsonl, instances.jsonl and
// table.txt into config.output_dir (plus matrices.jsonl when requested).
MetricReport run(const RunConfig& config);

// Rescoring of an orderings file ({"story_id":..,"perm":[..]} per line)
// against the gold permutations of a shuffled-instances file.
MetricReport evaluate(const std::filesystem::path& instances_path,
                      const std::filesystem::path& orderings_path);

struct ReportSummary {
  std::string label;
  std::optional<double> mean_tau;
  double pmr = 0.0;
  std::optional<double> mean_pairwise_accuracy;
  std::size_t count = 0;
};

ReportSummary read_report_summary(const std::filesystem::path& report_path);
// Aligned table sorted by mean_tau descending (ties by label).
std::string compare(const std::vector<std::filesystem::path>& report_paths);

// Serialization helpers, exposed for tests and the CLI.
std::string report_json(const MetricReport& report, const RunConfig* config,
                        std::size_t dp_fallbacks = 0);
std::string per_story_csv(const std::vector<StoryOutcome>& outcomes);
std::string report_table(const MetricReport& report, const std::string& label);

}  // namespace sentorder
