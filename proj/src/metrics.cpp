#include "sentorder/metrics.hpp"

#include "sentorder/error.hpp"

namespace sentorder {
namespace {

std::uint64_t merge_count(std::vector<std::size_t>& v, std::vector<std::size_t>& tmp,
                          std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t inv = merge_count(v, tmp, lo, mid) + merge_count(v, tmp, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      inv += mid - i;
      tmp[k++] = v[j++];
    } else {
      tmp[k++] = v[i++];
    }
  }
  while (i < mid) tmp[k++] = v[i++];
  while (j < hi) tmp[k++] = v[j++];
  std::copy(tmp.begin() + static_cast<std::ptrdiff_t>(lo),
            tmp.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return inv;
}

// Gold rank of each predicted position.
std::vector<std::size_t> ranks_in_gold(const Permutation& predicted, const Permutation& gold) {
  const std::size_t n = predicted.size();
  if (gold.size() != n) throw Error("predicted and gold orderings differ in length");
  if (n < 2) throw Error("rank correlation is undefined for fewer than 2 sentences");
  if (!is_permutation_of_iota(predicted)) throw Error("predicted ordering is not a permutation");
  if (!is_permutation_of_iota(gold)) throw Error("gold ordering is not a permutation");
  std::vector<std::size_t> gold_rank(n);
  for (std::size_t k = 0; k < n; ++k) gold_rank[gold[k]] = k;
  std::vector<std::size_t> ranks(n);
  for (std::size_t a = 0; a < n; ++a) ranks[a] = gold_rank[predicted[a]];
  return ranks;
}

std::int64_t pair_count(std::size_t n) { return static_cast<std::int64_t>(n * (n - 1) / 2); }

// 1 - 2 inv / P, evaluated as (P - 2 inv) / P so that tau(reverse) == -tau exactly.
double tau_from(std::uint64_t inv, std::size_t n) {
  const std::int64_t pairs = pair_count(n);
  return static_cast<double>(pairs - 2 * static_cast<std::int64_t>(inv)) /
         static_cast<double>(pairs);
}

double accuracy_from(std::uint64_t inv, std::size_t n) {
  const std::int64_t pairs = pair_count(n);
  return static_cast<double>(pairs - static_cast<std::int64_t>(inv)) / static_cast<double>(pairs);
}

}  // namespace

std::uint64_t count_inversions(const std::vector<std::size_t>& seq) {
  std::vector<std::size_t> v = seq;
  std::vector<std::size_t> tmp(v.size());
  return merge_count(v, tmp, 0, v.size());
}

TauResult kendall_tau(const Permutation& predicted, const Permutation& gold) {
  const auto ranks = ranks_in_gold(predicted, gold);
  const std::uint64_t inv = count_inversions(ranks);
  return {tau_from(inv, ranks.size()), inv};
}

double pairwise_accuracy(const Permutation& predicted, const Permutation& gold) {
  const auto ranks = ranks_in_gold(predicted, gold);
  return accuracy_from(count_inversions(ranks), ranks.size());
}

StoryResult score_story(const std::string& story_id, const Permutation& predicted,
                        const Permutation& gold) {
  StoryResult r;
  r.story_id = story_id;
  r.n = predicted.size();
  if (gold.size() != r.n) throw Error("story " + story_id + ": ordering length mismatch");
  if (!is_permutation_of_iota(predicted) || !is_permutation_of_iota(gold)) {
    throw Error("story " + story_id + ": ordering is not a permutation");
  }
  r.exact_match = predicted == gold;
  if (r.n >= 2) {
    const TauResult t = kendall_tau(predicted, gold);
    r.tau = t.tau;
    r.inversions = t.inversions;
    r.pairwise_accuracy = accuracy_from(t.inversions, r.n);
  }
  return r;
}

MetricReport aggregate(std::vector<StoryResult> results) {
  if (results.empty()) throw Error("cannot aggregate an empty result list");
  MetricReport report;
  report.count = results.size();
  std::size_t exact = 0;
  std::size_t defined = 0;
  double tau_sum = 0.0;
  double pair_sum = 0.0;
  for (const StoryResult& r : results) {
    exact += r.exact_match ? 1 : 0;
    if (r.tau) {
      ++defined;
      tau_sum += *r.tau;
      pair_sum += r.pairwise_accuracy.value_or(0.0);
    }
  }
  report.pmr = static_cast<double>(exact) / static_cast<double>(results.size());
  if (defined > 0) {
    report.mean_tau = tau_sum / static_cast<double>(defined);
    report.mean_pairwise_accuracy = pair_sum / static_cast<double>(defined);
  }
  report.per_story = std::move(results);
  return report;
}

}  // namespace sentorder
