#include "evchain/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "evchain/hdbscan.hpp"
#include "evchain/math.hpp"

namespace evchain {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// cluster assignment per observed entity: cluster id, or -1 for noise
std::map<Entity, int> frame_assignment(const FrameOutput& frame) {
  std::map<Entity, int> assignment;
  for (const auto& cluster : frame.clusters) {
    for (const auto& entity : cluster.entities) {
      assignment.emplace(entity, cluster.cluster_id);
    }
  }
  for (const auto& entity : frame.noise) assignment.emplace(entity, -1);
  return assignment;
}

struct PairTally {
  std::int64_t related_total = 0;
  std::int64_t related_shared = 0;
  std::int64_t unrelated_total = 0;
  std::int64_t unrelated_separated = 0;
};

PairTally tally_pairs(const SystemOutput& output, const GroundTruth& truth) {
  PairTally tally;
  for (const auto& frame : output.frames) {
    const auto* labels = truth.frame_labels(frame.frame);
    if (labels == nullptr) continue;
    std::map<Entity, int> assignment = frame_assignment(frame);

    // labeled entities observed this frame, grouped by event
    std::map<std::string, std::vector<std::pair<const GtLabel*, int>>> by_event;
    for (const auto& [entity, label] : *labels) {
      if (!label.event_id.has_value()) continue;
      auto it = assignment.find(entity);
      if (it == assignment.end()) continue;
      by_event[*label.event_id].emplace_back(&label, it->second);
    }
    for (const auto& [event_id, members] : by_event) {
      for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = a + 1; b < members.size(); ++b) {
          bool rel_a = members[a].first->relevant;
          bool rel_b = members[b].first->relevant;
          int cluster_a = members[a].second;
          int cluster_b = members[b].second;
          bool shared = cluster_a >= 0 && cluster_a == cluster_b;
          if (rel_a && rel_b) {
            ++tally.related_total;
            if (shared) ++tally.related_shared;
          } else if (rel_a != rel_b) {
            ++tally.unrelated_total;
            if (!shared) ++tally.unrelated_separated;
          }
        }
      }
    }
  }
  return tally;
}

Vec centroid(const Mat& points, const std::vector<std::size_t>& members) {
  Vec c(points.front().size(), 0.0);
  for (std::size_t idx : members) {
    for (std::size_t d = 0; d < c.size(); ++d) c[d] += points[idx][d];
  }
  for (auto& x : c) x /= static_cast<double>(members.size());
  return c;
}

// non-noise points grouped by label, label order
std::vector<std::vector<std::size_t>> group_members(const std::vector<int>& labels) {
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != kNoiseLabel) groups[labels[i]].push_back(i);
  }
  std::vector<std::vector<std::size_t>> out;
  out.reserve(groups.size());
  for (auto& [label, members] : groups) out.push_back(std::move(members));
  return out;
}

void check_points(const Mat& points, const std::vector<int>& labels) {
  if (points.size() != labels.size()) {
    throw std::invalid_argument("points and labels must have equal length");
  }
}

}  // namespace

void GroundTruth::add(int frame, const Entity& entity, std::optional<std::string> event_id,
                      bool relevant) {
  if (relevant && !event_id.has_value()) {
    throw std::invalid_argument("a relevant entity must carry an event id (entity '" +
                                entity.surface + "', frame " + std::to_string(frame) + ")");
  }
  GtLabel label{std::move(event_id), relevant};
  auto [it, inserted] = frames_[frame].emplace(entity, label);
  if (!inserted) {
    it->second = label;  // later rows win
  } else {
    ++count_;
  }
}

const GtLabel* GroundTruth::find(int frame, const Entity& entity) const {
  auto frame_it = frames_.find(frame);
  if (frame_it == frames_.end()) return nullptr;
  auto it = frame_it->second.find(entity);
  return it == frame_it->second.end() ? nullptr : &it->second;
}

const std::map<Entity, GtLabel>* GroundTruth::frame_labels(int frame) const {
  auto it = frames_.find(frame);
  return it == frames_.end() ? nullptr : &it->second;
}

std::optional<double> consolidation(const SystemOutput& output, const GroundTruth& truth) {
  PairTally tally = tally_pairs(output, truth);
  if (tally.related_total == 0) return std::nullopt;
  return static_cast<double>(tally.related_shared) / static_cast<double>(tally.related_total);
}

std::optional<double> discrimination(const SystemOutput& output, const GroundTruth& truth) {
  PairTally tally = tally_pairs(output, truth);
  if (tally.unrelated_total == 0) return std::nullopt;
  return static_cast<double>(tally.unrelated_separated) /
         static_cast<double>(tally.unrelated_total);
}

double clustering_score(double c, double d) {
  if (c < 0.0 || c > 1.0 || d < 0.0 || d > 1.0) {
    throw std::invalid_argument("clustering_score inputs must lie in [0, 1]");
  }
  if (c + d == 0.0) return 0.0;
  return 2.0 * c * d / (c + d);
}

double user_diversity(const std::vector<std::string>& authors) {
  if (authors.empty()) throw std::invalid_argument("user diversity needs at least one tweet");
  std::map<std::string, std::size_t> counts;
  for (const auto& user : authors) ++counts[user];
  double n = static_cast<double>(authors.size());
  double h = 0.0;
  for (const auto& [user, count] : counts) {
    double p = static_cast<double>(count) / n;
    h -= p * std::log(p);
  }
  return h < 0.0 ? 0.0 : h;
}

double fraction_related(const std::vector<Cluster>& clusters, const GroundTruth& truth) {
  if (clusters.empty()) throw std::invalid_argument("fraction_related needs clusters");
  double sum = 0.0;
  for (const auto& cluster : clusters) {
    std::map<std::string, std::size_t> relevant_events;
    for (const auto& entity : cluster.entities) {
      const GtLabel* label = truth.find(cluster.frame, entity);
      if (label != nullptr && label->relevant && label->event_id.has_value()) {
        ++relevant_events[*label->event_id];
      }
    }
    if (relevant_events.empty() || cluster.entities.empty()) continue;  // fraction 0
    // majority event: highest relevant-member count, ties to the smaller id
    std::string majority;
    std::size_t best = 0;
    for (const auto& [event_id, count] : relevant_events) {
      if (count > best) {
        best = count;
        majority = event_id;
      }
    }
    sum += static_cast<double>(best) / static_cast<double>(cluster.entities.size());
  }
  return sum / static_cast<double>(clusters.size());
}

std::optional<double> silhouette(const Mat& points, const std::vector<int>& labels) {
  check_points(points, labels);
  std::vector<std::vector<std::size_t>> groups = group_members(labels);
  if (groups.size() < 2) return std::nullopt;

  double total = 0.0;
  std::size_t counted = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t idx : groups[g]) {
      ++counted;
      if (groups[g].size() == 1) continue;  // contributes 0
      double a = 0.0;
      for (std::size_t other : groups[g]) {
        if (other != idx) a += euclidean(points[idx], points[other]);
      }
      a /= static_cast<double>(groups[g].size() - 1);
      double b = kInf;
      for (std::size_t h = 0; h < groups.size(); ++h) {
        if (h == g) continue;
        double mean = 0.0;
        for (std::size_t other : groups[h]) mean += euclidean(points[idx], points[other]);
        mean /= static_cast<double>(groups[h].size());
        b = std::min(b, mean);
      }
      double denom = std::max(a, b);
      if (denom > 0.0) total += (b - a) / denom;
    }
  }
  return total / static_cast<double>(counted);
}

std::optional<double> calinski_harabasz(const Mat& points, const std::vector<int>& labels) {
  check_points(points, labels);
  std::vector<std::vector<std::size_t>> groups = group_members(labels);
  if (groups.size() < 2) return std::nullopt;

  std::vector<std::size_t> all;
  for (const auto& g : groups) all.insert(all.end(), g.begin(), g.end());
  Vec overall = centroid(points, all);

  double within = 0.0;
  double between = 0.0;
  for (const auto& g : groups) {
    Vec c = centroid(points, g);
    for (std::size_t idx : g) {
      double d = euclidean(points[idx], c);
      within += d * d;
    }
    double d = euclidean(c, overall);
    between += static_cast<double>(g.size()) * d * d;
  }
  if (within == 0.0) return kInf;
  double n = static_cast<double>(all.size());
  double c = static_cast<double>(groups.size());
  return (between / (c - 1.0)) / (within / (n - c));
}

std::optional<double> davies_bouldin(const Mat& points, const std::vector<int>& labels) {
  check_points(points, labels);
  std::vector<std::vector<std::size_t>> groups = group_members(labels);
  if (groups.size() < 2) return std::nullopt;

  std::vector<Vec> centroids;
  std::vector<double> scatter;
  for (const auto& g : groups) {
    Vec c = centroid(points, g);
    double s = 0.0;
    for (std::size_t idx : g) s += euclidean(points[idx], c);
    scatter.push_back(s / static_cast<double>(g.size()));
    centroids.push_back(std::move(c));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < groups.size(); ++j) {
      if (j == i) continue;
      double d = euclidean(centroids[i], centroids[j]);
      double ratio = d > 0.0 ? (scatter[i] + scatter[j]) / d : kInf;
      worst = std::max(worst, ratio);
    }
    total += worst;
  }
  return total / static_cast<double>(groups.size());
}

MetricsReport evaluate(const SystemOutput& output, const GroundTruth& truth,
                       const std::vector<EventChain>& chains,
                       const std::vector<FrameIndexMetrics>& frame_indices) {
  MetricsReport report;
  report.consolidation = consolidation(output, truth);
  report.discrimination = discrimination(output, truth);
  if (report.consolidation.has_value() && report.discrimination.has_value()) {
    report.clustering_score = clustering_score(*report.consolidation, *report.discrimination);
  }
  report.frames = frame_indices;

  std::map<std::pair<int, int>, const Cluster*> cluster_index;
  for (const auto& frame : output.frames) {
    for (const auto& cluster : frame.clusters) {
      cluster_index[{frame.frame, cluster.cluster_id}] = &cluster;
    }
  }

  double diversity_sum = 0.0;
  double related_sum = 0.0;
  for (const auto& chain : chains) {
    std::vector<std::string> authors;
    std::vector<Cluster> members;
    for (const auto& link : chain.links) {
      auto it = cluster_index.find({link.frame, link.cluster_id});
      if (it == cluster_index.end()) continue;
      authors.insert(authors.end(), it->second->user_ids.begin(), it->second->user_ids.end());
      members.push_back(*it->second);
    }
    ChainMetrics metrics;
    metrics.chain_id = chain.chain_id;
    metrics.tweet_count = authors.size();
    metrics.user_diversity = authors.empty() ? 0.0 : user_diversity(authors);
    metrics.fraction_related = members.empty() ? 0.0 : fraction_related(members, truth);
    diversity_sum += metrics.user_diversity;
    related_sum += metrics.fraction_related;
    report.chains.push_back(std::move(metrics));
  }
  if (!report.chains.empty()) {
    report.user_diversity_mean = diversity_sum / static_cast<double>(report.chains.size());
    report.fraction_related_mean = related_sum / static_cast<double>(report.chains.size());
  }
  return report;
}

}  // namespace evchain
