#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "evchain/types.hpp"

namespace evchain {

/// Candidate link between a cluster of frame i-1 and one of frame i,
/// weighted by their common-entity count.
struct BipartiteEdge {
  int prev_index = 0;  // position in the previous frame's cluster list
  int next_index = 0;  // position in the next frame's cluster list
  std::int64_t weight = 0;
};

/// One edge per cluster pair whose entity intersection exceeds min_common
/// (strict), weighted by the intersection size.
std::vector<BipartiteEdge> build_bipartite(const std::vector<Cluster>& prev,
                                           const std::vector<Cluster>& next,
                                           std::int64_t min_common);

struct Matching {
  std::vector<std::pair<int, int>> pairs;  // (left, right), ascending left
  std::int64_t total_weight = 0;
};

/// One-to-one matching of maximum total weight via the Hungarian algorithm
/// on a zero-padded square matrix. Zero-weight and dummy assignments are
/// discarded. Among optima, the lexicographically first matching by (left,
/// right) pair preference is returned.
Matching max_weight_matching(const std::vector<BipartiteEdge>& edges, int left_size,
                             int right_size);

/// Chain bookkeeping across frames. `open` runs parallel to the previous
/// frame's cluster list: open[i] is the chain whose tail is cluster i.
struct ChainState {
  std::vector<EventChain> closed;
  std::vector<EventChain> open;
  int next_chain_id = 0;
};

/// Applies one frame transition: matched next-clusters extend the chain
/// ending at their matched previous cluster, unmatched next-clusters open
/// fresh chains, and chains whose tail went unmatched close.
void extend_chains(ChainState& state, const Matching& matching,
                   const std::vector<BipartiteEdge>& edges,
                   const std::vector<Cluster>& next_clusters, int frame);

/// Drives bipartite construction, matching, and chain extension frame by
/// frame. Frames must be advanced in increasing order.
class ChainTracker {
 public:
  explicit ChainTracker(std::int64_t min_common = 0) : min_common_(min_common) {}

  void advance(int frame, const std::vector<Cluster>& clusters);

  /// All chains, closed first then still-open ones, ordered by chain id.
  std::vector<EventChain> chains() const;

 private:
  std::int64_t min_common_;
  ChainState state_;
  std::vector<Cluster> prev_clusters_;
  int last_frame_ = -1;
};

}  // namespace evchain
