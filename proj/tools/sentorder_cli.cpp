// sentorder: shuffle stories, order them by pairwise sentence similarity,
// score the result and compare runs.
#include <array>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sentorder/corpus.hpp"
#include "sentorder/error.hpp"
#include "sentorder/harness.hpp"
#include "sentorder/simd/kernels.hpp"

namespace {

std::array<double, 3> to_ratios(const std::vector<double>& v) {
  if (v.size() != 3) throw sentorder::Error("--ratios takes exactly three values");
  return {v[0], v[1], v[2]};
}

void add_split_options(CLI::App* cmd, std::string& split, std::vector<double>& ratios,
                       std::uint64_t& seed) {
  cmd->add_option("--split", split, "train|valid|test|all")->capture_default_str();
  cmd->add_option("--ratios", ratios, "train,valid,test ratios")
      ->delimiter(',')
      ->expected(3)
      ->capture_default_str();
  cmd->add_option("--seed", seed, "seed for the split and the shuffles")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sentence ordering by pairwise similarity"};
  app.require_subcommand(1);

  std::string simd_backend = "auto";
  app.add_option("--simd", simd_backend, "kernel backend: auto|scalar|avx2|neon")
      ->capture_default_str();

  // shuffle
  std::string split = "test";
  std::vector<double> ratios{0.8, 0.1, 0.1};
  std::uint64_t seed = 42;
  std::string corpus_path;
  std::string out_path;
  auto* shuffle = app.add_subcommand("shuffle", "write seeded shuffled instances as JSON Lines");
  shuffle->add_option("--corpus", corpus_path, "ROCStories-format CSV")->required();
  shuffle->add_option("--out", out_path, "output .jsonl")->required();
  add_split_options(shuffle, split, ratios, seed);

  // order
  sentorder::RunConfig config;
  std::string scorer = "cosine-sentence";
  std::string orderer = "brute-force";
  std::string embeddings;
  std::string out_dir;
  auto* order = app.add_subcommand("order", "run one scorer/orderer configuration end to end");
  order->add_option("--corpus", corpus_path, "ROCStories-format CSV")->required();
  order->add_option("--scorer", scorer, "cosine-sentence|word-level|cbow-cosine|ngram-overlap")
      ->capture_default_str();
  order->add_option("--orderer", orderer, "brute-force|dp|nearest-neighbor")
      ->capture_default_str();
  order->add_option("--embeddings", embeddings, "sentence or token vector .jsonl");
  order->add_option("--out-dir", out_dir, "directory for report and per-story outputs")
      ->required();
  order->add_option("--bf-cap", config.brute_force_cap, "largest n solved by brute force")
      ->capture_default_str();
  order->add_option("--start", config.greedy_start, "nearest-neighbor start position")
      ->capture_default_str();
  order->add_option("--ngram-max-n", config.ngram_max_n, "highest n-gram order")
      ->capture_default_str();
  order->add_option("--threads", config.threads, "worker threads (0 = all cores)")
      ->capture_default_str();
  order->add_flag("--dump-matrices", config.dump_matrices, "also write matrices.jsonl");
  add_split_options(order, split, ratios, seed);

  // evaluate
  std::string instances_path;
  std::string orderings_path;
  auto* evaluate = app.add_subcommand("evaluate", "score an orderings file against gold");
  evaluate->add_option("--instances", instances_path, "shuffled instances .jsonl")->required();
  evaluate->add_option("--orderings", orderings_path, "orderings .jsonl")->required();
  evaluate->add_option("--out", out_path, "write the report JSON here");

  // compare
  std::vector<std::string> reports;
  auto* compare = app.add_subcommand("compare", "side-by-side table of report.json files");
  compare->add_option("reports", reports, "report.json paths")->required();
  compare->add_option("--out", out_path, "also write the table here");

  for (auto* sub : {shuffle, order, evaluate, compare}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simd_backend != "auto") sentorder::simd::set_backend(sentorder::simd::parse_backend(simd_backend));

    if (*shuffle) {
      const auto instances = sentorder::prepare_instances(
          corpus_path, sentorder::parse_split_name(split), to_ratios(ratios), seed);
      sentorder::write_instances(std::filesystem::path(out_path), instances);
      std::cerr << "wrote " << instances.size() << " instances to " << out_path << '\n';
    } else if (*order) {
      config.corpus_path = corpus_path;
      config.split = sentorder::parse_split_name(split);
      config.split_ratios = to_ratios(ratios);
      config.scorer = sentorder::parse_scorer(scorer);
      config.orderer = sentorder::parse_orderer(orderer);
      if (!embeddings.empty()) config.embeddings_path = embeddings;
      config.seed = seed;
      config.output_dir = out_dir;
      const auto report = sentorder::run(config);
      std::cout << sentorder::report_table(report, scorer + " + " + orderer);
    } else if (*evaluate) {
      const auto report = sentorder::evaluate(instances_path, orderings_path);
      const std::string json = sentorder::report_json(report, nullptr);
      if (!out_path.empty()) {
        std::ofstream(out_path, std::ios::binary) << json;
      }
      std::cout << sentorder::report_table(report, orderings_path);
    } else if (*compare) {
      std::vector<std::filesystem::path> paths(reports.begin(), reports.end());
      const std::string table = sentorder::compare(paths);
      if (!out_path.empty()) std::ofstream(out_path, std::ios::binary) << table;
      std::cout << table;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
