#pragma once

#include <vector>

#include "evchain/enrichment.hpp"
#include "evchain/types.hpp"

namespace evchain {

/// Groups non-noise entities by label into Clusters, aggregating member
/// tweet bags and authors. Cluster ids follow first appearance in entity
/// order.
std::vector<Cluster> clusters_from_labels(const SimilarityFeatures& features,
                                          const std::vector<int>& labels);

/// Entities labeled noise, in entity order.
std::vector<Entity> noise_entities(const SimilarityFeatures& features,
                                   const std::vector<int>& labels);

}  // namespace evchain
