#include "evchain/chaining.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <set>
#include <stdexcept>

namespace evchain {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

// Hungarian algorithm (potentials form) for square min-cost assignment.
// Returns the assigned column per row. O(n^3).
std::vector<int> hungarian_min(const std::vector<std::vector<std::int64_t>>& cost) {
  int n = static_cast<int>(cost.size());
  std::vector<std::int64_t> u(static_cast<std::size_t>(n) + 1, 0);
  std::vector<std::int64_t> v(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> match(static_cast<std::size_t>(n) + 1, 0);  // column -> row (1-based)
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);

  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<std::int64_t> minv(static_cast<std::size_t>(n) + 1, kInf);
    std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      int i0 = match[static_cast<std::size_t>(j0)];
      int j1 = 0;
      std::int64_t delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        std::int64_t cur = cost[static_cast<std::size_t>(i0 - 1)][static_cast<std::size_t>(j - 1)] -
                           u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      int j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j) {
    if (match[static_cast<std::size_t>(j)] > 0) {
      row_to_col[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] = j - 1;
    }
  }
  return row_to_col;
}

// Best achievable total weight over the rows/columns not yet fixed.
std::int64_t best_free_total(const std::vector<std::vector<std::int64_t>>& weight,
                             const std::vector<bool>& row_fixed,
                             const std::vector<bool>& col_fixed) {
  std::vector<int> rows, cols;
  for (std::size_t i = 0; i < row_fixed.size(); ++i) {
    if (!row_fixed[i]) rows.push_back(static_cast<int>(i));
  }
  for (std::size_t j = 0; j < col_fixed.size(); ++j) {
    if (!col_fixed[j]) cols.push_back(static_cast<int>(j));
  }
  int n = static_cast<int>(std::max(rows.size(), cols.size()));
  if (n == 0) return 0;
  std::int64_t max_w = 0;
  for (int r : rows) {
    for (int c : cols) {
      max_w = std::max(max_w, weight[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
    }
  }
  std::vector<std::vector<std::int64_t>> cost(static_cast<std::size_t>(n),
                                              std::vector<std::int64_t>(static_cast<std::size_t>(n), max_w));
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) {
      cost[a][b] = max_w - weight[static_cast<std::size_t>(rows[a])][static_cast<std::size_t>(cols[b])];
    }
  }
  std::vector<int> assignment = hungarian_min(cost);
  std::int64_t total = 0;
  for (std::size_t a = 0; a < rows.size(); ++a) {
    int b = assignment[a];
    if (b >= 0 && b < static_cast<int>(cols.size())) {
      total += weight[static_cast<std::size_t>(rows[a])][static_cast<std::size_t>(cols[static_cast<std::size_t>(b)])];
    }
  }
  return total;
}

}  // namespace

std::vector<BipartiteEdge> build_bipartite(const std::vector<Cluster>& prev,
                                           const std::vector<Cluster>& next,
                                           std::int64_t min_common) {
  if (min_common < 0) throw std::invalid_argument("min_common must be non-negative");
  std::vector<BipartiteEdge> edges;
  std::vector<std::set<Entity>> prev_sets;
  prev_sets.reserve(prev.size());
  for (const auto& c : prev) prev_sets.emplace_back(c.entities.begin(), c.entities.end());
  for (std::size_t j = 0; j < next.size(); ++j) {
    std::set<Entity> next_set(next[j].entities.begin(), next[j].entities.end());
    for (std::size_t i = 0; i < prev.size(); ++i) {
      std::int64_t common = 0;
      for (const auto& e : next_set) {
        if (prev_sets[i].count(e) > 0) ++common;
      }
      if (common > min_common) {
        edges.push_back({static_cast<int>(i), static_cast<int>(j), common});
      }
    }
  }
  return edges;
}

Matching max_weight_matching(const std::vector<BipartiteEdge>& edges, int left_size,
                             int right_size) {
  Matching result;
  if (left_size <= 0 || right_size <= 0 || edges.empty()) return result;

  std::vector<std::vector<std::int64_t>> weight(
      static_cast<std::size_t>(left_size),
      std::vector<std::int64_t>(static_cast<std::size_t>(right_size), 0));
  for (const auto& e : edges) {
    if (e.prev_index < 0 || e.prev_index >= left_size || e.next_index < 0 ||
        e.next_index >= right_size) {
      throw std::invalid_argument("bipartite edge index out of range");
    }
    if (e.weight <= 0) throw std::invalid_argument("edge weights must be positive");
    weight[static_cast<std::size_t>(e.prev_index)][static_cast<std::size_t>(e.next_index)] =
        e.weight;
  }

  std::vector<bool> row_fixed(static_cast<std::size_t>(left_size), false);
  std::vector<bool> col_fixed(static_cast<std::size_t>(right_size), false);
  std::int64_t optimum = best_free_total(weight, row_fixed, col_fixed);

  // Greedy lexicographic refinement: fix (i, j) whenever doing so still
  // reaches the optimum. The result is the lexicographically preferred
  // optimal matching.
  std::int64_t fixed_sum = 0;
  for (int i = 0; i < left_size; ++i) {
    for (int j = 0; j < right_size; ++j) {
      if (col_fixed[static_cast<std::size_t>(j)]) continue;
      std::int64_t w = weight[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (w <= 0) continue;
      row_fixed[static_cast<std::size_t>(i)] = true;
      col_fixed[static_cast<std::size_t>(j)] = true;
      std::int64_t candidate = fixed_sum + w + best_free_total(weight, row_fixed, col_fixed);
      if (candidate == optimum) {
        fixed_sum += w;
        result.pairs.emplace_back(i, j);
        break;
      }
      row_fixed[static_cast<std::size_t>(i)] = false;
      col_fixed[static_cast<std::size_t>(j)] = false;
    }
  }
  result.total_weight = fixed_sum;
  assert(result.total_weight == optimum);
  return result;
}

void extend_chains(ChainState& state, const Matching& matching,
                   const std::vector<BipartiteEdge>& edges,
                   const std::vector<Cluster>& next_clusters, int frame) {
  std::vector<int> next_to_prev(next_clusters.size(), -1);
  std::vector<std::int64_t> next_weight(next_clusters.size(), 0);
  for (const auto& [left, right] : matching.pairs) {
    assert(next_to_prev[static_cast<std::size_t>(right)] == -1);
    next_to_prev[static_cast<std::size_t>(right)] = left;
  }
  for (const auto& e : edges) {
    if (next_to_prev[static_cast<std::size_t>(e.next_index)] == e.prev_index) {
      next_weight[static_cast<std::size_t>(e.next_index)] = e.weight;
    }
  }

  std::vector<EventChain> still_open(next_clusters.size());
  std::vector<bool> prev_extended(state.open.size(), false);
  for (std::size_t j = 0; j < next_clusters.size(); ++j) {
    int prev = next_to_prev[j];
    if (prev >= 0) {
      EventChain chain = std::move(state.open[static_cast<std::size_t>(prev)]);
      prev_extended[static_cast<std::size_t>(prev)] = true;
      chain.links.push_back({frame, next_clusters[j].cluster_id});
      chain.edge_weights.push_back(static_cast<int>(next_weight[j]));
      still_open[j] = std::move(chain);
    } else {
      EventChain chain;
      chain.chain_id = state.next_chain_id++;
      chain.links.push_back({frame, next_clusters[j].cluster_id});
      still_open[j] = std::move(chain);
    }
  }
  for (std::size_t i = 0; i < state.open.size(); ++i) {
    if (!prev_extended[i]) {
      state.open[i].open = false;
      state.closed.push_back(std::move(state.open[i]));
    }
  }
  state.open = std::move(still_open);
}

void ChainTracker::advance(int frame, const std::vector<Cluster>& clusters) {
  if (frame <= last_frame_) throw std::invalid_argument("frames must advance in order");
  // A frame gap closes everything first: chains never span missing frames.
  if (last_frame_ >= 0 && frame != last_frame_ + 1) {
    Matching empty;
    extend_chains(state_, empty, {}, {}, frame);
    prev_clusters_.clear();
  }
  std::vector<BipartiteEdge> edges = build_bipartite(prev_clusters_, clusters, min_common_);
  Matching matching = max_weight_matching(edges, static_cast<int>(prev_clusters_.size()),
                                          static_cast<int>(clusters.size()));
  extend_chains(state_, matching, edges, clusters, frame);
  prev_clusters_ = clusters;
  last_frame_ = frame;
}

std::vector<EventChain> ChainTracker::chains() const {
  std::vector<EventChain> all = state_.closed;
  for (const auto& chain : state_.open) all.push_back(chain);
  std::sort(all.begin(), all.end(),
            [](const EventChain& a, const EventChain& b) { return a.chain_id < b.chain_id; });
  return all;
}

}  // namespace evchain
