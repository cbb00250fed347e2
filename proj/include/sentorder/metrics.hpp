#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sentorder/orderers.hpp"

namespace sentorder {

struct TauResult {
  double tau = 0.0;
  std::uint64_t inversions = 0;
};

// Both arguments list shuffled indices: predicted[k] is the sentence placed
// k-th, gold[k] the sentence that truly comes k-th. The prediction is mapped
// to gold ranks and its inversions counted by merge sort.
// tau = 1 - 2 * inversions / (n(n-1)/2). Throws if n < 2, the sizes differ,
// or either argument is not a permutation of 0..n-1.
TauResult kendall_tau(const Permutation& predicted, const Permutation& gold);

// Fraction of sentence pairs kept in gold relative order.
double pairwise_accuracy(const Permutation& predicted, const Permutation& gold);

// Number of pairs a < b with seq[a] > seq[b].
std::uint64_t count_inversions(const std::vector<std::size_t>& seq);

struct StoryResult {
  std::string story_id;
  std::size_t n = 0;
  // Undefined (empty) for single-sentence stories.
  std::optional<double> tau;
  std::uint64_t inversions = 0;
  bool exact_match = false;
  std::optional<double> pairwise_accuracy;
};

StoryResult score_story(const std::string& story_id, const Permutation& predicted,
                        const Permutation& gold);

struct MetricReport {
  // Mean over stories with n >= 2; empty when there are none.
  std::optional<double> mean_tau;
  double pmr = 0.0;
  std::optional<double> mean_pairwise_accuracy;
  std::size_t count = 0;
  std::vector<StoryResult> per_story;
};

// Throws on an empty list.
MetricReport aggregate(std::vector<StoryResult> results);

}  // namespace sentorder
