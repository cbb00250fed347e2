#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sentorder/similarity.hpp"

namespace sentorder {

using Permutation = std::vector<std::size_t>;

struct Ordering {
  Permutation perm;
  double objective = 0.0;
  std::string orderer_tag;
};

// Path objectives are accumulated in fixed point (scores rounded to
// multiples of 2^-40 and summed as 64-bit integers). Integer sums are
// order-independent, so a path and its reversal tie exactly on symmetric
// matrices and every exact solver agrees on the optimum to the last bit.
namespace path_score {
inline constexpr double kScale = 0x1.0p40;
// Largest |score| accepted. With kMaxPathEdges edges the sum stays below 2^63.
inline constexpr double kMaxMagnitude = 0x1.0p10;
inline constexpr std::size_t kMaxPathEdges = 8191;

std::int64_t quantize(double score);
double to_double(std::int64_t fixed) noexcept;
}  // namespace path_score

// Sum of scores(perm[k], perm[k+1]) for k = 0..n-2, via path_score.
double path_objective(const SimilarityMatrix& m, const Permutation& perm);

inline constexpr std::size_t kDefaultBruteForceCap = 9;
inline constexpr std::size_t kMaxDpSize = 20;

// Enumerates all n! permutations in lexicographic order and keeps the first
// maximum, so ties resolve to the lexicographically smallest permutation.
// Throws if n > cap.
Ordering brute_force_order(const SimilarityMatrix& m, std::size_t cap = kDefaultBruteForceCap);

// Held-Karp style subset DP for the maximum-weight Hamiltonian path, O(n^2 2^n).
// Same objective as brute force. The path is rebuilt front to back choosing
// the smallest index that remains optimal, so on ties it returns the same
// lexicographically smallest permutation as brute force. Throws if n > 20.
Ordering dp_order(const SimilarityMatrix& m);

// Greedy: start at `start`, repeatedly append the unvisited j with the largest
// scores(current, j), smallest j on ties.
Ordering nearest_neighbor_order(const SimilarityMatrix& m, std::size_t start = 0);

enum class OrdererKind { kBruteForce, kDp, kNearestNeighbor };

OrdererKind parse_orderer(const std::string& name);
std::string to_string(OrdererKind kind);

bool is_permutation_of_iota(const Permutation& perm);

}  // namespace sentorder
