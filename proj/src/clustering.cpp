#include "evchain/clustering.hpp"

#include <map>
#include <stdexcept>

#include "evchain/hdbscan.hpp"

namespace evchain {

std::vector<Cluster> clusters_from_labels(const SimilarityFeatures& features,
                                          const std::vector<int>& labels) {
  if (labels.size() != features.entities.size()) {
    throw std::invalid_argument("label count does not match entity count");
  }
  std::vector<Cluster> clusters;
  std::map<int, std::size_t> label_to_index;
  std::vector<std::map<std::string, std::string>> tweet_authors;  // per cluster, id -> author

  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == kNoiseLabel) continue;
    auto it = label_to_index.find(labels[i]);
    if (it == label_to_index.end()) {
      Cluster cluster;
      cluster.frame = features.entities[i].frame;
      cluster.cluster_id = static_cast<int>(clusters.size());
      clusters.push_back(std::move(cluster));
      tweet_authors.emplace_back();
      it = label_to_index.emplace(labels[i], clusters.size() - 1).first;
    }
    Cluster& cluster = clusters[it->second];
    const EntityFrameRecord& record = features.entities[i];
    cluster.entities.push_back(record.entity);
    auto& authors = tweet_authors[it->second];
    for (std::size_t j = 0; j < record.tweet_ids.size(); ++j) {
      authors.emplace(record.tweet_ids[j], record.user_ids[j]);
    }
  }
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (const auto& [tweet_id, user_id] : tweet_authors[c]) {
      clusters[c].tweet_ids.push_back(tweet_id);
      clusters[c].user_ids.push_back(user_id);
    }
  }
  return clusters;
}

std::vector<Entity> noise_entities(const SimilarityFeatures& features,
                                   const std::vector<int>& labels) {
  if (labels.size() != features.entities.size()) {
    throw std::invalid_argument("label count does not match entity count");
  }
  std::vector<Entity> noise;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == kNoiseLabel) noise.push_back(features.entities[i].entity);
  }
  return noise;
}

}  // namespace evchain
