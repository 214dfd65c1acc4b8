#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "evchain/evaluation.hpp"
#include "evchain/types.hpp"

namespace evchain {

/// Every pipeline knob in one place. Defaults mirror the CLI flags.
struct RunConfig {
  std::int64_t window_seconds = 86400;
  std::optional<std::int64_t> origin;  // default: first tweet's UTC midnight

  double filter_threshold = 0.5;
  bool no_filter = false;
  std::optional<std::string> model_path;

  int top_k = 5;
  double min_sim = 0.3;
  std::optional<double> lexical_min_sim;     // overrides min_sim for the lexical matrix
  std::optional<double> contextual_min_sim;  // overrides min_sim for the contextual matrix
  int min_entity_freq = 1;

  int min_cluster_size = 2;
  int min_samples = 1;
  bool leaf_extraction = false;
  std::optional<double> dbscan_eps;  // switches to the DBSCAN fallback
  int dbscan_min_pts = 2;

  std::int64_t min_common = 0;
  int max_gap = 0;  // reserved; only 0 is supported

  int embed_dim = 64;
  std::uint64_t seed = 1;
  std::optional<std::string> embeddings_file;
  std::optional<std::string> lexicon_path;
  std::optional<std::string> ground_truth_path;

  std::optional<std::string> dump_matrices_dir;
  std::optional<std::string> dump_condensed_dir;
};

struct FrameResult {
  int index = 0;
  std::int64_t start = 0;
  std::int64_t end = 0;
  std::size_t tweets_total = 0;
  std::size_t tweets_kept = 0;
  std::size_t tweets_dropped = 0;
  std::size_t entity_count = 0;
  std::vector<Cluster> clusters;
  std::vector<Entity> noise;
  FrameIndexMetrics indices;
};

struct PipelineResult {
  std::vector<FrameResult> frames;
  std::vector<EventChain> chains;

  SystemOutput system_output() const;
  std::vector<FrameIndexMetrics> frame_indices() const;
  std::size_t total_entities() const;
};

/// Runs filter -> enrichment -> clustering -> chaining over the stream.
/// Frames are processed in order as they complete; per-frame progress goes
/// to the log.
PipelineResult run_pipeline(const std::vector<Tweet>& tweets, const RunConfig& config);

/// The chains document: per-frame clusters and noise, all chains with their
/// links, and optionally a metrics report. Serialization is deterministic.
nlohmann::json chains_document(const PipelineResult& result, const RunConfig& config,
                               const MetricsReport* metrics);

nlohmann::json metrics_to_json(const MetricsReport& report);

/// Per-frame index table for --csv.
std::string frames_csv(const std::vector<FrameResult>& frames);

/// What `eval` needs back out of a chains document.
struct LoadedDocument {
  SystemOutput output;
  std::vector<EventChain> chains;
  std::vector<FrameIndexMetrics> frame_indices;
};

LoadedDocument load_chains_document(const nlohmann::json& document);

MetricsReport evaluate_document(const LoadedDocument& document, const GroundTruth& truth);

}  // namespace evchain
