#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "evchain/embedding.hpp"
#include "evchain/types.hpp"

namespace evchain {

enum class ExtractorMode { baseline, lexicon };

/// Deterministic entity extraction. The baseline mode takes maximal runs of
/// capitalized tokens (dropping a sentence-initial run of one stop-word);
/// the lexicon mode takes longest matches from a known surface set. Hashtags
/// are always extracted from the tweet's hashtag list.
class EntityExtractor {
 public:
  EntityExtractor();  // baseline
  explicit EntityExtractor(std::set<std::string> lexicon);
  static EntityExtractor from_lexicon_file(const std::string& path);

  ExtractorMode mode() const { return mode_; }

  /// Deduplicated by (surface, kind), first-appearance order. Every surface
  /// occurs in the normalized tweet text.
  std::vector<Entity> extract(const Tweet& tweet) const;

 private:
  ExtractorMode mode_ = ExtractorMode::baseline;
  std::set<std::string> lexicon_;  // normalized surfaces
  std::size_t lexicon_max_tokens_ = 0;
};

std::vector<Entity> extract_entities(const EntityExtractor& extractor, const Tweet& tweet);

/// Union of entities over the frame's tweets, first-appearance order.
std::vector<Entity> frame_entities(const EntityExtractor& extractor, const TimeFrame& frame);

/// An entity's per-frame occurrence row plus the tweets and authors behind
/// it. occurrence_row[j] > 0 iff tweet j of the frame contains the entity.
struct EntityFrameRecord {
  Entity entity;
  int frame = 0;
  Vec occurrence_row;
  std::vector<std::string> tweet_ids;  // containing tweets, frame order
  std::vector<std::string> user_ids;   // authors aligned with tweet_ids
};

/// Thresholded cosine matrices over both representations and the
/// concatenated per-entity feature vectors (length 2k each).
struct SimilarityFeatures {
  std::vector<EntityFrameRecord> entities;
  Mat lexical_sim;
  Mat contextual_sim;
  Mat feature_vectors;
};

/// e[i][j] = occurrences of entity i's surface in tweet j, counted by
/// token-sequence match on normalized text. Hashtag entities match with or
/// without the '#' sigil.
Mat build_occurrence_matrix(const TimeFrame& frame, const std::vector<Entity>& entities);

/// Row i embeds the concatenation of entity i's top_k containing tweets by
/// descending retweet_count (ties by ascending tweet id).
Mat build_embedding_matrix(const TimeFrame& frame, const std::vector<Entity>& entities,
                           const EmbeddingProvider& provider, int top_k);

/// S[i][j] = max(0, cos(row_i, row_j)), entries below min_sim zeroed, the
/// diagonal forced to 1 for nonzero rows. A zero row yields an all-zero
/// similarity row (diagonal included) and a warning.
Mat cosine_similarity_matrix(const Mat& rows, double min_sim);

struct EnrichmentOptions {
  int top_k = 5;
  double lexical_min_sim = 0.3;
  double contextual_min_sim = 0.3;
  int min_entity_freq = 1;  // minimum containing-tweet count
};

/// Runs the full per-frame procedure. nullopt signals a frame with no
/// entities (skipped downstream).
std::optional<SimilarityFeatures> build_features(const TimeFrame& frame,
                                                 const EntityExtractor& extractor,
                                                 const EmbeddingProvider& provider,
                                                 const EnrichmentOptions& options);

}  // namespace evchain
