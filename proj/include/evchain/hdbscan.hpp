#pragma once

#include <vector>

#include "evchain/types.hpp"

namespace evchain {

inline constexpr int kNoiseLabel = -1;

Mat pairwise_distances(const Mat& points);

/// Distance from each point to its min_samples-th nearest neighbor
/// (capped at the farthest available neighbor; 0 for a single point).
Vec core_distances(const Mat& distances, int min_samples);

/// d_mreach(a, b) = max(core(a), core(b), d(a, b)); diagonal 0.
Mat mutual_reachability_matrix(const Mat& distances, const Vec& core);

struct MstEdge {
  int a = 0;
  int b = 0;
  double weight = 0.0;
};

/// Kruskal over the complete graph, ties broken by lexicographic (weight,
/// a, b). Edges come back in merge order (ascending weight).
std::vector<MstEdge> minimum_spanning_tree(const Mat& weights);

/// One row of the condensed cluster tree: `child` is a point (< k) falling
/// out of cluster `parent`, or a child cluster (>= k) splitting off, at
/// density level `lambda` = 1 / distance.
struct CondensedEntry {
  int parent = 0;
  int child = 0;
  double lambda = 0.0;
  int size = 0;
};

struct HdbscanParams {
  int min_cluster_size = 2;
  int min_samples = 1;
  bool leaf_extraction = false;  // default is excess-of-mass
};

struct HdbscanResult {
  std::vector<int> labels;  // cluster id per point, or kNoiseLabel
  int num_clusters = 0;
  std::vector<CondensedEntry> condensed;
};

/// Density clustering: core distances -> mutual reachability -> MST ->
/// single-linkage hierarchy -> condensed tree -> stability-based cluster
/// extraction. Deterministic given input order. Fewer points than
/// min_cluster_size yields all noise. Rejects non-finite coordinates.
HdbscanResult hdbscan(const Mat& points, const HdbscanParams& params);

/// Plain density clustering fallback for comparison runs.
std::vector<int> dbscan(const Mat& points, double eps, int min_pts);

}  // namespace evchain
