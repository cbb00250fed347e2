#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sentorder {

struct Story {
  std::string id;
  std::optional<std::string> title;
  std::vector<std::string> sentences;
};

// A story presented in shuffled order. gold_perm[k] is the position in
// `shuffled` of the k-th gold sentence, so shuffled[gold_perm[k]] is the
// k-th sentence of the original story.
struct ShuffledInstance {
  std::string story_id;
  std::vector<std::string> shuffled;
  std::vector<std::size_t> gold_perm;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return shuffled.size(); }
  // The sentences back in gold order.
  std::vector<std::string> gold_sentences() const;
};

struct SplitSpec {
  std::array<double, 3> ratios{0.8, 0.1, 0.1};
  std::uint64_t seed = 42;

  // Throws if any ratio is negative or they do not sum to 1 within 1e-9.
  void validate() const;
};

struct CorpusSplit {
  std::vector<Story> train;
  std::vector<Story> valid;
  std::vector<Story> test;
};

enum class SplitName { kTrain, kValid, kTest, kAll };

SplitName parse_split_name(const std::string& name);
std::string to_string(SplitName name);

// Reads a ROCStories-style CSV. The header must name a story id column
// ("storyid" or "InputStoryid"), may name "storytitle", and names the sentence
// columns "sentence1".."sentenceN" (or "InputSentence1".. ). Sentences are
// taken in numeric column order. Rows are validated strictly: wrong column
// count, blank sentence cells and duplicate ids are hard errors naming the row.
std::vector<Story> load_corpus(const std::filesystem::path& path);
std::vector<Story> parse_corpus(std::istream& in, const std::string& source_name = "<stream>");

// Throws if the story violates its invariants (empty id, no sentences, blank sentence).
void validate_story(const Story& story);

// Fisher-Yates over positions, driven by SplitMix64 seeded with
// seed ^ fnv1a64(story.id). Draws for i = n-1 .. 1: j = below(i + 1), swap(i, j).
ShuffledInstance shuffle_story(const Story& story, std::uint64_t seed);

// Seeded partition of the corpus. The index list is Fisher-Yates shuffled with
// SplitMix64(spec.seed); the first floor(r0*N) go to train, the next
// floor(r1*N) to valid, the remainder to test. Each part keeps corpus order.
CorpusSplit split_corpus(const std::vector<Story>& stories, const SplitSpec& spec);

const std::vector<Story>& select_split(const CorpusSplit& split, SplitName name,
                                       const std::vector<Story>& all);

// Shuffled-instance JSON Lines: one object per line with keys
// story_id, seed, shuffled, gold_perm (in that order).
void write_instances(std::ostream& out, const std::vector<ShuffledInstance>& instances);
void write_instances(const std::filesystem::path& path,
                     const std::vector<ShuffledInstance>& instances);
std::vector<ShuffledInstance> read_instances(std::istream& in,
                                             const std::string& source_name = "<stream>");
std::vector<ShuffledInstance> read_instances(const std::filesystem::path& path);

// Throws unless gold_perm is a permutation of 0..n-1 matching `shuffled`.
void validate_instance(const ShuffledInstance& instance);

}  // namespace sentorder
