#include "sentorder/orderers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sentorder/error.hpp"

namespace sentorder {
namespace path_score {

std::int64_t quantize(double score) {
  if (!std::isfinite(score) || std::abs(score) > kMaxMagnitude) {
    throw Error("score " + std::to_string(score) + " is outside the supported range [-1024, 1024]");
  }
  return std::llround(score * kScale);
}

double to_double(std::int64_t fixed) noexcept { return static_cast<double>(fixed) / kScale; }

}  // namespace path_score

namespace {

// Quantized copy of the matrix, row-major, diagonal ignored.
struct FixedMatrix {
  std::size_t n = 0;
  std::vector<std::int64_t> q;

  explicit FixedMatrix(const SimilarityMatrix& m) : n(m.size()), q(n * n, 0) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) q[i * n + j] = path_score::quantize(m(i, j));
      }
    }
  }
  std::int64_t operator()(std::size_t i, std::size_t j) const noexcept { return q[i * n + j]; }

  std::int64_t path(const Permutation& perm) const noexcept {
    std::int64_t sum = 0;
    for (std::size_t k = 0; k + 1 < perm.size(); ++k) sum += (*this)(perm[k], perm[k + 1]);
    return sum;
  }
};

void require_nonempty(const SimilarityMatrix& m) {
  if (m.size() == 0) throw Error("cannot order an empty similarity matrix");
  if (m.size() - 1 > path_score::kMaxPathEdges) throw Error("similarity matrix too large");
}

}  // namespace

bool is_permutation_of_iota(const Permutation& perm) {
  std::vector<bool> hit(perm.size(), false);
  for (std::size_t p : perm) {
    if (p >= perm.size() || hit[p]) return false;
    hit[p] = true;
  }
  return true;
}

double path_objective(const SimilarityMatrix& m, const Permutation& perm) {
  if (perm.size() != m.size() || !is_permutation_of_iota(perm)) {
    throw Error("path_objective: not a permutation of the matrix indices");
  }
  require_nonempty(m);
  return path_score::to_double(FixedMatrix(m).path(perm));
}

Ordering brute_force_order(const SimilarityMatrix& m, std::size_t cap) {
  require_nonempty(m);
  const std::size_t n = m.size();
  cap = std::min(cap, kMaxDpSize);
  if (n > cap) {
    throw Error("brute force is capped at n = " + std::to_string(cap) + " (got n = " +
                std::to_string(n) + "); use dp_order for larger instances");
  }
  const FixedMatrix q(m);
  Permutation perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Permutation best = perm;
  std::int64_t best_score = q.path(perm);
  while (std::next_permutation(perm.begin(), perm.end())) {
    const std::int64_t s = q.path(perm);
    if (s > best_score) {
      best_score = s;
      best = perm;
    }
  }
  return {std::move(best), path_score::to_double(best_score), "brute-force"};
}

Ordering dp_order(const SimilarityMatrix& m) {
  require_nonempty(m);
  const std::size_t n = m.size();
  if (n > kMaxDpSize) {
    throw Error("dp_order supports n <= " + std::to_string(kMaxDpSize) + " (got n = " +
                std::to_string(n) + ")");
  }
  const FixedMatrix q(m);
  const std::size_t subsets = std::size_t{1} << n;

  // suffix[mask * n + j]: best path that starts at j and visits exactly
  // `mask` (j in mask). Removing j from mask always yields a smaller index,
  // so ascending mask order fills every dependency first.
  std::vector<std::int64_t> suffix(subsets * n, 0);
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t bit = std::size_t{1} << j;
      if (!(mask & bit)) continue;
      const std::size_t rest = mask ^ bit;
      if (rest == 0) continue;
      std::int64_t best = std::numeric_limits<std::int64_t>::min();
      for (std::size_t k = 0; k < n; ++k) {
        if (rest & (std::size_t{1} << k)) best = std::max(best, q(j, k) + suffix[rest * n + k]);
      }
      suffix[mask * n + j] = best;
    }
  }

  // Forward reconstruction taking the smallest index that stays optimal at
  // every step, which yields the lexicographically smallest optimal path.
  const std::size_t full = subsets - 1;
  std::size_t cur = 0;
  for (std::size_t j = 1; j < n; ++j) {
    if (suffix[full * n + j] > suffix[full * n + cur]) cur = j;
  }
  const std::int64_t score = suffix[full * n + cur];

  Permutation perm{cur};
  perm.reserve(n);
  std::size_t mask = full;
  while (perm.size() < n) {
    const std::int64_t target = suffix[mask * n + cur];
    mask ^= std::size_t{1} << cur;
    std::size_t next = 0;
    while (!(mask & (std::size_t{1} << next)) || q(cur, next) + suffix[mask * n + next] != target) {
      ++next;
    }
    perm.push_back(next);
    cur = next;
  }
  return {std::move(perm), path_score::to_double(score), "dp"};
}

Ordering nearest_neighbor_order(const SimilarityMatrix& m, std::size_t start) {
  require_nonempty(m);
  const std::size_t n = m.size();
  if (start >= n) {
    throw Error("nearest neighbor start " + std::to_string(start) + " out of range for n = " +
                std::to_string(n));
  }
  const FixedMatrix q(m);
  std::vector<bool> used(n, false);
  Permutation perm{start};
  used[start] = true;
  std::int64_t score = 0;
  std::size_t cur = start;
  while (perm.size() < n) {
    std::size_t pick = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      if (pick == n || q(cur, j) > q(cur, pick)) pick = j;
    }
    score += q(cur, pick);
    used[pick] = true;
    perm.push_back(pick);
    cur = pick;
  }
  return {std::move(perm), path_score::to_double(score), "nearest-neighbor"};
}

OrdererKind parse_orderer(const std::string& name) {
  if (name == "brute-force") return OrdererKind::kBruteForce;
  if (name == "dp") return OrdererKind::kDp;
  if (name == "nearest-neighbor") return OrdererKind::kNearestNeighbor;
  throw Error("unknown orderer '" + name + "' (expected brute-force|dp|nearest-neighbor)");
}

std::string to_string(OrdererKind kind) {
  switch (kind) {
    case OrdererKind::kBruteForce: return "brute-force";
    case OrdererKind::kDp: return "dp";
    case OrdererKind::kNearestNeighbor: return "nearest-neighbor";
  }
  return "?";
}

}  // namespace sentorder
