#include "sentorder/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include <json.hpp>

#include "sentorder/csv.hpp"
#include "sentorder/error.hpp"
#include "sentorder/prng.hpp"

namespace sentorder {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

// Parses "sentence<k>" / "inputsentence<k>" and returns k, or 0.
std::size_t sentence_column_number(const std::string& name) {
  std::string_view v = name;
  for (std::string_view prefix : {"inputsentence", "sentence"}) {
    if (v.substr(0, prefix.size()) == prefix) {
      std::string_view digits = v.substr(prefix.size());
      if (digits.empty() || digits.size() > 6) return 0;
      std::size_t k = 0;
      for (char c : digits) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return 0;
        k = k * 10 + static_cast<std::size_t>(c - '0');
      }
      return k;
    }
  }
  return 0;
}

struct Layout {
  std::size_t columns = 0;
  std::size_t id = 0;
  std::optional<std::size_t> title;
  std::vector<std::size_t> sentences;
};

Layout parse_header(const std::vector<std::string>& header, const std::string& source) {
  Layout layout;
  layout.columns = header.size();
  std::optional<std::size_t> id;
  std::vector<std::pair<std::size_t, std::size_t>> numbered;
  for (std::size_t c = 0; c < header.size(); ++c) {
    std::string name = lower(header[c]);
    // Tolerate a UTF-8 byte order mark on the first column.
    if (c == 0 && name.rfind("\xef\xbb\xbf", 0) == 0) name = name.substr(3);
    if (name == "storyid" || name == "inputstoryid") {
      id = c;
    } else if (name == "storytitle") {
      layout.title = c;
    } else if (std::size_t k = sentence_column_number(name); k > 0) {
      numbered.emplace_back(k, c);
    }
  }
  if (!id) throw Error(source + ": header has no story id column (storyid)");
  layout.id = *id;
  std::sort(numbered.begin(), numbered.end());
  for (std::size_t i = 0; i < numbered.size(); ++i) {
    if (numbered[i].first != i + 1) {
      throw Error(source + ": sentence columns must be numbered 1..N without gaps");
    }
    layout.sentences.push_back(numbered[i].second);
  }
  if (layout.sentences.empty()) throw Error(source + ": header has no sentence columns");
  return layout;
}

}  // namespace

std::vector<std::string> ShuffledInstance::gold_sentences() const {
  std::vector<std::string> out;
  out.reserve(gold_perm.size());
  for (std::size_t p : gold_perm) out.push_back(shuffled.at(p));
  return out;
}

void SplitSpec::validate() const {
  double sum = 0.0;
  for (double r : ratios) {
    if (!(r >= 0.0)) throw Error("split ratios must be non-negative");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error("split ratios must sum to 1");
}

SplitName parse_split_name(const std::string& name) {
  if (name == "train") return SplitName::kTrain;
  if (name == "valid") return SplitName::kValid;
  if (name == "test") return SplitName::kTest;
  if (name == "all") return SplitName::kAll;
  throw Error("unknown split '" + name + "' (expected train|valid|test|all)");
}

std::string to_string(SplitName name) {
  switch (name) {
    case SplitName::kTrain: return "train";
    case SplitName::kValid: return "valid";
    case SplitName::kTest: return "test";
    case SplitName::kAll: return "all";
  }
  return "?";
}

void validate_story(const Story& story) {
  if (story.id.empty()) throw Error("story has an empty id");
  if (story.sentences.empty()) throw Error("story " + story.id + " has no sentences");
  for (std::size_t i = 0; i < story.sentences.size(); ++i) {
    if (is_blank(story.sentences[i])) {
      throw Error("story " + story.id + ": sentence " + std::to_string(i + 1) + " is empty");
    }
  }
}

std::vector<Story> parse_corpus(std::istream& in, const std::string& source) {
  csv::Reader reader(in);
  csv::Record rec;
  if (!reader.next(rec)) throw Error(source + ": empty corpus file (header row required)");
  const Layout layout = parse_header(rec.fields, source);

  std::vector<Story> stories;
  std::unordered_set<std::string> seen;
  std::size_t row = 0;
  while (reader.next(rec)) {
    if (rec.fields.size() == 1 && rec.fields[0].empty()) continue;  // blank line
    ++row;
    const std::string where =
        source + ": row " + std::to_string(row) + " (line " + std::to_string(rec.line) + ")";
    if (rec.fields.size() != layout.columns) {
      throw Error(where + ": expected " + std::to_string(layout.columns) + " columns, found " +
                  std::to_string(rec.fields.size()));
    }
    Story story;
    story.id = rec.fields[layout.id];
    if (is_blank(story.id)) throw Error(where + ": empty story id");
    if (layout.title) story.title = rec.fields[*layout.title];
    for (std::size_t k = 0; k < layout.sentences.size(); ++k) {
      std::string& cell = rec.fields[layout.sentences[k]];
      if (is_blank(cell)) {
        throw Error(where + ": empty cell in column sentence" + std::to_string(k + 1));
      }
      story.sentences.push_back(std::move(cell));
    }
    if (!seen.insert(story.id).second) throw Error(where + ": duplicate story id " + story.id);
    stories.push_back(std::move(story));
  }
  return stories;
}

std::vector<Story> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file " + path.string());
  return parse_corpus(in, path.string());
}

ShuffledInstance shuffle_story(const Story& story, std::uint64_t seed) {
  const std::size_t n = story.sentences.size();
  // source[p] = gold index of the sentence placed at shuffled position p.
  std::vector<std::size_t> source(n);
  std::iota(source.begin(), source.end(), std::size_t{0});
  SplitMix64 rng(seed ^ fnv1a64(story.id));
  for (std::size_t i = n; i-- > 1;) {
    const auto j = static_cast<std::size_t>(rng.below(i + 1));
    std::swap(source[i], source[j]);
  }

  ShuffledInstance out;
  out.story_id = story.id;
  out.seed = seed;
  out.shuffled.reserve(n);
  out.gold_perm.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    out.shuffled.push_back(story.sentences[source[p]]);
    out.gold_perm[source[p]] = p;
  }
  return out;
}

CorpusSplit split_corpus(const std::vector<Story>& stories, const SplitSpec& spec) {
  spec.validate();
  const std::size_t n = stories.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  SplitMix64 rng(spec.seed);
  for (std::size_t i = n; i-- > 1;) {
    std::swap(order[i], order[static_cast<std::size_t>(rng.below(i + 1))]);
  }

  // The epsilon absorbs products such as 0.57 * 100 = 56.999999999999993.
  auto part = [n](double r) {
    return std::min(n, static_cast<std::size_t>(std::floor(r * static_cast<double>(n) + 1e-9)));
  };
  const std::size_t n_train = part(spec.ratios[0]);
  const std::size_t n_valid = std::min(n - n_train, part(spec.ratios[1]));

  auto take = [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> idx(order.begin() + static_cast<std::ptrdiff_t>(begin),
                                 order.begin() + static_cast<std::ptrdiff_t>(end));
    std::sort(idx.begin(), idx.end());
    std::vector<Story> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(stories[i]);
    return out;
  };
  CorpusSplit split;
  split.train = take(0, n_train);
  split.valid = take(n_train, n_train + n_valid);
  split.test = take(n_train + n_valid, n);
  return split;
}

const std::vector<Story>& select_split(const CorpusSplit& split, SplitName name,
                                       const std::vector<Story>& all) {
  switch (name) {
    case SplitName::kTrain: return split.train;
    case SplitName::kValid: return split.valid;
    case SplitName::kTest: return split.test;
    case SplitName::kAll: return all;
  }
  return all;
}

void validate_instance(const ShuffledInstance& inst) {
  const std::size_t n = inst.shuffled.size();
  if (n == 0) throw Error("instance " + inst.story_id + " has no sentences");
  if (inst.gold_perm.size() != n) {
    throw Error("instance " + inst.story_id + ": gold_perm length differs from shuffled");
  }
  std::vector<bool> hit(n, false);
  for (std::size_t p : inst.gold_perm) {
    if (p >= n || hit[p]) {
      throw Error("instance " + inst.story_id + ": gold_perm is not a permutation");
    }
    hit[p] = true;
  }
}

void write_instances(std::ostream& out, const std::vector<ShuffledInstance>& instances) {
  for (const auto& inst : instances) {
    nlohmann::ordered_json j;
    j["story_id"] = inst.story_id;
    j["seed"] = inst.seed;
    j["shuffled"] = inst.shuffled;
    j["gold_perm"] = inst.gold_perm;
    out << j.dump() << '\n';
  }
}

void write_instances(const std::filesystem::path& path,
                     const std::vector<ShuffledInstance>& instances) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_instances(out, instances);
}

std::vector<ShuffledInstance> read_instances(std::istream& in, const std::string& source) {
  std::vector<ShuffledInstance> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line)) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    try {
      const auto j = nlohmann::json::parse(line);
      ShuffledInstance inst;
      inst.story_id = j.at("story_id").get<std::string>();
      inst.seed = j.at("seed").get<std::uint64_t>();
      inst.shuffled = j.at("shuffled").get<std::vector<std::string>>();
      inst.gold_perm = j.at("gold_perm").get<std::vector<std::size_t>>();
      validate_instance(inst);
      out.push_back(std::move(inst));
    } catch (const nlohmann::json::exception& e) {
      throw Error(where + ": " + e.what());
    } catch (const Error& e) {
      throw Error(where + ": " + e.what());
    }
  }
  return out;
}

std::vector<ShuffledInstance> read_instances(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open instances file " + path.string());
  return read_instances(in, path.string());
}

}  // namespace sentorder
