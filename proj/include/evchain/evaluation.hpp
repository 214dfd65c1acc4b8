#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evchain/types.hpp"

namespace evchain {

struct GtLabel {
  std::optional<std::string> event_id;
  bool relevant = false;
};

/// Labeled relatedness per (frame, entity). Entities absent from the ground
/// truth are unlabeled and excluded from pair counting.
class GroundTruth {
 public:
  /// Throws if a relevant entity carries no event id.
  void add(int frame, const Entity& entity, std::optional<std::string> event_id, bool relevant);

  const GtLabel* find(int frame, const Entity& entity) const;
  const std::map<Entity, GtLabel>* frame_labels(int frame) const;
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  const std::map<int, std::map<Entity, GtLabel>>& frames() const { return frames_; }

 private:
  std::map<int, std::map<Entity, GtLabel>> frames_;
  std::size_t count_ = 0;
};

/// What the pipeline emitted for one frame: clusters plus the entities that
/// were observed but left unclustered.
struct FrameOutput {
  int frame = 0;
  std::vector<Cluster> clusters;
  std::vector<Entity> noise;
};

struct SystemOutput {
  std::vector<FrameOutput> frames;
};

/// Fraction of ground-truth-related entity pairs (same event, both
/// relevant, both observed) that share a cluster. Absent when no related
/// pair is observed.
std::optional<double> consolidation(const SystemOutput& output, const GroundTruth& truth);

/// Fraction of ground-truth-unrelated entity pairs (same event, exactly one
/// relevant, both observed) that do not share a cluster. Absent when no
/// unrelated pair is observed.
std::optional<double> discrimination(const SystemOutput& output, const GroundTruth& truth);

/// Harmonic mean 2CD / (C + D); 0 when C + D = 0.
double clustering_score(double c, double d);

/// Shannon entropy (nats) of the author distribution over a tweet multiset.
double user_diversity(const std::vector<std::string>& authors);

/// Mean over clusters of the fraction of members that are relevant to the
/// cluster's majority ground-truth event. Unlabeled members count against.
double fraction_related(const std::vector<Cluster>& clusters, const GroundTruth& truth);

/// Mean silhouette over non-noise points; singleton clusters contribute 0.
/// Absent with fewer than two clusters.
std::optional<double> silhouette(const Mat& points, const std::vector<int>& labels);

/// Variance ratio criterion. +infinity when within-cluster dispersion is 0;
/// absent with fewer than two clusters.
std::optional<double> calinski_harabasz(const Mat& points, const std::vector<int>& labels);

/// Mean over clusters of the worst (s_i + s_j) / d_ij ratio. +infinity when
/// two centroids coincide; absent with fewer than two clusters.
std::optional<double> davies_bouldin(const Mat& points, const std::vector<int>& labels);

struct ChainMetrics {
  int chain_id = 0;
  double user_diversity = 0.0;
  double fraction_related = 0.0;
  std::size_t tweet_count = 0;
};

struct FrameIndexMetrics {
  int frame = 0;
  std::optional<double> silhouette;
  std::optional<double> calinski_harabasz;
  std::optional<double> davies_bouldin;
};

struct MetricsReport {
  std::optional<double> consolidation;
  std::optional<double> discrimination;
  std::optional<double> clustering_score;
  std::vector<ChainMetrics> chains;
  std::optional<double> user_diversity_mean;
  std::optional<double> fraction_related_mean;
  std::vector<FrameIndexMetrics> frames;
};

/// Full report over a run: pairwise metrics against the ground truth,
/// per-chain diversity and relatedness, and the per-frame internal indices
/// computed during clustering.
MetricsReport evaluate(const SystemOutput& output, const GroundTruth& truth,
                       const std::vector<EventChain>& chains,
                       const std::vector<FrameIndexMetrics>& frame_indices);

}  // namespace evchain
