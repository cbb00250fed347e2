#include "sentorder/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sentorder/csv.hpp"
#include "sentorder/embedding_io.hpp"
#include "sentorder/error.hpp"
#include "sentorder/simd/kernels.hpp"

namespace sentorder {
namespace {

using nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fixed4(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

std::string join_perm(const Permutation& p) {
  std::string out;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k) out.push_back(' ');
    out += std::to_string(p[k]);
  }
  return out;
}

ordered_json optional_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("failed writing " + path.string());
}

bool needs_sentence_vectors(ScorerKind s) { return s == ScorerKind::kCosineSentence; }
bool needs_token_vectors(ScorerKind s) {
  return s == ScorerKind::kWordLevel || s == ScorerKind::kCbowCosine;
}

std::string missing_ids_message(const std::vector<std::string>& missing) {
  std::string msg = "missing embeddings for " + std::to_string(missing.size()) + " stor" +
                    (missing.size() == 1 ? "y" : "ies") + ":";
  for (std::size_t i = 0; i < missing.size() && i < 10; ++i) msg += " " + missing[i];
  if (missing.size() > 10) msg += " ...";
  return msg;
}

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["corpus_path"] = c.corpus_path.string();
  j["split"] = to_string(c.split);
  j["split_ratios"] = c.split_ratios;
  j["scorer"] = to_string(c.scorer);
  j["orderer"] = to_string(c.orderer);
  j["embeddings_path"] =
      c.embeddings_path ? ordered_json(c.embeddings_path->string()) : ordered_json(nullptr);
  j["seed"] = c.seed;
  j["brute_force_cap"] = c.brute_force_cap;
  j["greedy_start"] = c.greedy_start;
  j["ngram_max_n"] = c.ngram_max_n;
  return j;
}

}  // namespace

ScorerKind parse_scorer(const std::string& name) {
  if (name == "cosine-sentence") return ScorerKind::kCosineSentence;
  if (name == "word-level") return ScorerKind::kWordLevel;
  if (name == "cbow-cosine") return ScorerKind::kCbowCosine;
  if (name == "ngram-overlap") return ScorerKind::kNgramOverlap;
  throw Error("unknown scorer '" + name +
              "' (expected cosine-sentence|word-level|cbow-cosine|ngram-overlap)");
}

std::string to_string(ScorerKind kind) {
  switch (kind) {
    case ScorerKind::kCosineSentence: return "cosine-sentence";
    case ScorerKind::kWordLevel: return "word-level";
    case ScorerKind::kCbowCosine: return "cbow-cosine";
    case ScorerKind::kNgramOverlap: return "ngram-overlap";
  }
  return "?";
}

void RunConfig::validate() const {
  SplitSpec{split_ratios, seed}.validate();
  if (scorer != ScorerKind::kNgramOverlap && !embeddings_path) {
    throw Error("scorer " + to_string(scorer) + " requires --embeddings (" +
                (needs_sentence_vectors(scorer) ? "sentence" : "token") + " vector file)");
  }
  if (ngram_max_n < 1) throw Error("ngram max order must be >= 1");
  if (brute_force_cap < 1) throw Error("brute-force cap must be >= 1");
}

SimilarityMatrix build_matrix(const RunConfig& config, const ShuffledInstance& inst,
                              const RunInputs& inputs) {
  const std::size_t n = inst.size();
  auto check_count = [&](std::size_t got) {
    if (got != n) {
      throw Error("story " + inst.story_id + ": embeddings cover " + std::to_string(got) +
                  " sentences but the instance has " + std::to_string(n));
    }
  };
  switch (config.scorer) {
    case ScorerKind::kCosineSentence: {
      const SentenceVectors& v = inputs.sentence_vectors->at(inst.story_id);
      check_count(v.size());
      return sentence_matrix(v);
    }
    case ScorerKind::kWordLevel: {
      const TokenVectors& t = inputs.token_vectors->at(inst.story_id);
      check_count(t.size());
      return word_level_matrix(t);
    }
    case ScorerKind::kCbowCosine: {
      const TokenVectors& t = inputs.token_vectors->at(inst.story_id);
      check_count(t.size());
      return sentence_matrix(cbow_reduce(t));
    }
    case ScorerKind::kNgramOverlap:
      return ngram_overlap_matrix(inst.shuffled, config.ngram_max_n);
  }
  throw Error("unhandled scorer");
}

Ordering order_matrix(const RunConfig& config, const SimilarityMatrix& m) {
  switch (config.orderer) {
    case OrdererKind::kBruteForce:
      if (m.size() > std::min(config.brute_force_cap, kMaxDpSize)) return dp_order(m);
      return brute_force_order(m, config.brute_force_cap);
    case OrdererKind::kDp:
      return dp_order(m);
    case OrdererKind::kNearestNeighbor:
      return nearest_neighbor_order(m, std::min(config.greedy_start, m.size() - 1));
  }
  throw Error("unhandled orderer");
}

RunResult run_instances(const RunConfig& config, const RunInputs& inputs) {
  config.validate();
  if (inputs.instances == nullptr || inputs.instances->empty()) {
    throw Error("no instances to order");
  }
  const auto& instances = *inputs.instances;

  if (needs_sentence_vectors(config.scorer) || needs_token_vectors(config.scorer)) {
    const bool sentence = needs_sentence_vectors(config.scorer);
    if (sentence ? inputs.sentence_vectors == nullptr : inputs.token_vectors == nullptr) {
      throw Error("scorer " + to_string(config.scorer) + " needs " +
                  (sentence ? "sentence" : "token") + " vectors");
    }
    std::vector<std::string> missing;
    for (const auto& inst : instances) {
      const bool found = sentence ? inputs.sentence_vectors->count(inst.story_id) > 0
                                  : inputs.token_vectors->count(inst.story_id) > 0;
      if (!found) missing.push_back(inst.story_id);
    }
    if (!missing.empty()) throw Error(missing_ids_message(missing));
  }

  const std::size_t count = instances.size();
  std::vector<StoryOutcome> outcomes(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> cursor{0};

  auto worker = [&] {
    for (std::size_t i; (i = cursor.fetch_add(1)) < count;) {
      try {
        const ShuffledInstance& inst = instances[i];
        SimilarityMatrix m = build_matrix(config, inst, inputs);
        StoryOutcome& out = outcomes[i];
        out.ordering = order_matrix(config, m);
        out.gold_perm = inst.gold_perm;
        out.result = score_story(inst.story_id, out.ordering.perm, inst.gold_perm);
        if (config.dump_matrices) out.matrix = std::move(m);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  std::size_t threads = config.threads ? config.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, count);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  // Report the failure of the lowest story index, whatever thread hit it.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  RunResult result;
  std::vector<StoryResult> per_story;
  per_story.reserve(count);
  for (const auto& o : outcomes) {
    per_story.push_back(o.result);
    if (config.orderer == OrdererKind::kBruteForce && o.ordering.orderer_tag == "dp") {
      ++result.dp_fallbacks;
    }
  }
  if (result.dp_fallbacks > 0) {
    std::cerr << "notice: " << result.dp_fallbacks << " stor"
              << (result.dp_fallbacks == 1 ? "y exceeds" : "ies exceed")
              << " the brute-force cap of " << config.brute_force_cap
              << " sentences; solved with dp instead\n";
  }
  result.report = aggregate(std::move(per_story));
  result.outcomes = std::move(outcomes);
  return result;
}

std::vector<ShuffledInstance> prepare_instances(const std::filesystem::path& corpus_path,
                                                SplitName split,
                                                const std::array<double, 3>& ratios,
                                                std::uint64_t seed) {
  const std::vector<Story> stories = load_corpus(corpus_path);
  const CorpusSplit parts = split_corpus(stories, SplitSpec{ratios, seed});
  const std::vector<Story>& selected = select_split(parts, split, stories);
  std::vector<ShuffledInstance> instances;
  instances.reserve(selected.size());
  for (const Story& s : selected) instances.push_back(shuffle_story(s, seed));
  return instances;
}

std::string report_json(const MetricReport& report, const RunConfig* config,
                        std::size_t dp_fallbacks) {
  ordered_json j;
  j["mean_tau"] = optional_json(report.mean_tau);
  j["pmr"] = report.pmr;
  j["mean_pairwise_accuracy"] = optional_json(report.mean_pairwise_accuracy);
  j["count"] = report.count;
  if (config != nullptr) {
    j["config"] = config_json(*config);
    j["simd_backend"] = std::string(simd::backend_name(simd::active_backend()));
    j["dp_fallbacks"] = dp_fallbacks;
  }
  return j.dump(2) + "\n";
}

std::string per_story_csv(const std::vector<StoryOutcome>& outcomes) {
  std::ostringstream out;
  out << "story_id,n,tau,inversions,exact_match,pairwise_accuracy,objective,predicted,gold\n";
  for (const auto& o : outcomes) {
    const StoryResult& r = o.result;
    out << csv::escape(r.story_id) << ',' << r.n << ','
        << (r.tau ? format_double(*r.tau) : "") << ',' << r.inversions << ','
        << (r.exact_match ? 1 : 0) << ','
        << (r.pairwise_accuracy ? format_double(*r.pairwise_accuracy) : "") << ','
        << format_double(o.ordering.objective) << ',' << join_perm(o.ordering.perm) << ','
        << join_perm(o.gold_perm) << '\n';
  }
  return out.str();
}

std::string report_table(const MetricReport& report, const std::string& label) {
  std::ostringstream out;
  out << "configuration          : " << label << '\n'
      << "stories                : " << report.count << '\n'
      << "mean Kendall tau       : " << fixed4(report.mean_tau) << '\n'
      << "PMR (exact match)      : " << fixed4(report.pmr) << '\n'
      << "mean pairwise accuracy : " << fixed4(report.mean_pairwise_accuracy) << '\n';
  return out.str();
}

MetricReport run(const RunConfig& config) {
  config.validate();
  if (config.corpus_path.empty()) throw Error("a corpus path is required");
  if (config.output_dir.empty()) throw Error("an output directory is required");

  const auto instances =
      prepare_instances(config.corpus_path, config.split, config.split_ratios, config.seed);
  if (instances.empty()) {
    throw Error("split '" + to_string(config.split) + "' of " + config.corpus_path.string() +
                " is empty");
  }

  SentenceVectorMap sentence_vectors;
  TokenVectorMap token_vectors;
  RunInputs inputs;
  inputs.instances = &instances;
  if (needs_sentence_vectors(config.scorer)) {
    sentence_vectors = read_sentence_vectors(*config.embeddings_path);
    inputs.sentence_vectors = &sentence_vectors;
  } else if (needs_token_vectors(config.scorer)) {
    token_vectors = read_token_vectors(*config.embeddings_path);
    inputs.token_vectors = &token_vectors;
  }

  RunResult result = run_instances(config, inputs);

  std::filesystem::create_directories(config.output_dir);
  const auto& dir = config.output_dir;
  write_file(dir / "report.json", report_json(result.report, &config, result.dp_fallbacks));
  write_file(dir / "per_story.csv", per_story_csv(result.outcomes));
  write_file(dir / "table.txt",
             report_table(result.report, to_string(config.scorer) + " + " +
                                             to_string(config.orderer)));
  write_instances(dir / "instances.jsonl", instances);

  std::ostringstream orderings;
  for (const auto& o : result.outcomes) {
    ordered_json j;
    j["story_id"] = o.result.story_id;
    j["perm"] = o.ordering.perm;
    j["objective"] = o.ordering.objective;
    j["orderer"] = o.ordering.orderer_tag;
    orderings << j.dump() << '\n';
  }
  write_file(dir / "orderings.jsonl", orderings.str());

  if (config.dump_matrices) {
    std::ostringstream matrices;
    for (const auto& o : result.outcomes) {
      matrices << "{\"story_id\":" << ordered_json(o.result.story_id).dump() << ",\"matrix\":";
      dump_matrix_json(matrices, *o.matrix);
      matrices << "}\n";
    }
    write_file(dir / "matrices.jsonl", matrices.str());
  }
  return result.report;
}

MetricReport evaluate(const std::filesystem::path& instances_path,
                      const std::filesystem::path& orderings_path) {
  const auto instances = read_instances(instances_path);
  std::map<std::string, const ShuffledInstance*> by_id;
  for (const auto& inst : instances) by_id.emplace(inst.story_id, &inst);

  std::ifstream in(orderings_path, std::ios::binary);
  if (!in) throw Error("cannot open orderings file " + orderings_path.string());
  std::vector<StoryResult> results;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = orderings_path.string() + ":" + std::to_string(lineno);
    try {
      const auto j = nlohmann::json::parse(line);
      const auto id = j.at("story_id").get<std::string>();
      const auto perm = j.at("perm").get<Permutation>();
      const auto it = by_id.find(id);
      if (it == by_id.end()) throw Error("story " + id + " is not in the instances file");
      results.push_back(score_story(id, perm, it->second->gold_perm));
    } catch (const nlohmann::json::exception& e) {
      throw Error(where + ": " + e.what());
    } catch (const Error& e) {
      throw Error(where + ": " + e.what());
    }
  }
  return aggregate(std::move(results));
}

ReportSummary read_report_summary(const std::filesystem::path& report_path) {
  std::ifstream in(report_path, std::ios::binary);
  if (!in) throw Error("cannot open report " + report_path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
    ReportSummary s;
    auto opt = [&](const char* key) -> std::optional<double> {
      const auto& v = j.at(key);
      if (v.is_null()) return std::nullopt;
      return v.get<double>();
    };
    s.mean_tau = opt("mean_tau");
    s.pmr = j.at("pmr").get<double>();
    s.mean_pairwise_accuracy = opt("mean_pairwise_accuracy");
    s.count = j.at("count").get<std::size_t>();
    if (j.contains("config")) {
      const auto& c = j["config"];
      s.label = c.at("scorer").get<std::string>() + " + " + c.at("orderer").get<std::string>();
    } else {
      s.label = report_path.string();
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(report_path.string() + ": " + e.what());
  }
}

std::string compare(const std::vector<std::filesystem::path>& report_paths) {
  if (report_paths.empty()) throw Error("compare needs at least one report");
  struct Row {
    ReportSummary summary;
    std::string path;
  };
  std::vector<Row> rows;
  for (const auto& p : report_paths) rows.push_back({read_report_summary(p), p.string()});
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    const double ta = a.summary.mean_tau.value_or(-2.0);
    const double tb = b.summary.mean_tau.value_or(-2.0);
    if (ta != tb) return ta > tb;
    return a.summary.label < b.summary.label;
  });

  std::size_t label_width = std::string("configuration").size();
  for (const auto& r : rows) label_width = std::max(label_width, r.summary.label.size());
  auto pad = [](std::string s, std::size_t w) {
    s.resize(std::max(s.size(), w), ' ');
    return s;
  };

  std::ostringstream out;
  out << pad("configuration", label_width) << "  " << pad("mean_tau", 9) << "  "
      << pad("pmr", 9) << "  " << pad("pairwise", 9) << "  " << pad("count", 7) << "  report\n";
  for (const auto& r : rows) {
    out << pad(r.summary.label, label_width) << "  " << pad(fixed4(r.summary.mean_tau), 9) << "  "
        << pad(fixed4(r.summary.pmr), 9) << "  "
        << pad(fixed4(r.summary.mean_pairwise_accuracy), 9) << "  "
        << pad(std::to_string(r.summary.count), 7) << "  " << r.path << '\n';
  }
  return out.str();
}

}  // namespace sentorder
