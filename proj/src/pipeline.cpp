#include "evchain/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <sstream>

#include "evchain/chaining.hpp"
#include "evchain/clustering.hpp"
#include "evchain/embedding.hpp"
#include "evchain/enrichment.hpp"
#include "evchain/hdbscan.hpp"
#include "evchain/io.hpp"
#include "evchain/log.hpp"
#include "evchain/text.hpp"
#include "evchain/trend.hpp"
#include "evchain/windowing.hpp"

namespace evchain {

namespace {

using nlohmann::json;

json optional_metric(const std::optional<double>& value) {
  if (!value.has_value()) return nullptr;
  if (std::isinf(*value)) return "inf";
  return *value;
}

std::optional<double> metric_from_json(const json& value) {
  if (value.is_null()) return std::nullopt;
  if (value.is_string()) return std::numeric_limits<double>::infinity();
  return value.get<double>();
}

json entity_to_json(const Entity& entity) {
  return json{{"surface", entity.surface}, {"kind", to_string(entity.kind)}};
}

Entity entity_from_json(const json& j) {
  return Entity{j.at("surface").get<std::string>(),
                entity_kind_from_string(j.at("kind").get<std::string>())};
}

void dump_matrix_csv(const std::string& dir, const std::string& name, int frame,
                     const std::vector<EntityFrameRecord>& records, const Mat& matrix) {
  std::filesystem::create_directories(dir);
  std::ostringstream path;
  path << dir << "/" << name << "_" << frame << ".csv";
  std::ofstream out(path.str());
  out << "entity";
  for (const auto& r : records) out << "," << r.entity.surface;
  out << "\n";
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    out << records[i].entity.surface;
    for (double v : matrix[i]) out << "," << v;
    out << "\n";
  }
}

void dump_condensed_csv(const std::string& dir, int frame,
                        const std::vector<CondensedEntry>& entries) {
  std::filesystem::create_directories(dir);
  std::ostringstream path;
  path << dir << "/condensed_" << frame << ".csv";
  std::ofstream out(path.str());
  out << "parent,child,lambda,size\n";
  for (const auto& e : entries) {
    out << e.parent << "," << e.child << "," << e.lambda << "," << e.size << "\n";
  }
}

}  // namespace

SystemOutput PipelineResult::system_output() const {
  SystemOutput output;
  for (const auto& frame : frames) {
    output.frames.push_back(FrameOutput{frame.index, frame.clusters, frame.noise});
  }
  return output;
}

std::vector<FrameIndexMetrics> PipelineResult::frame_indices() const {
  std::vector<FrameIndexMetrics> indices;
  for (const auto& frame : frames) indices.push_back(frame.indices);
  return indices;
}

std::size_t PipelineResult::total_entities() const {
  std::size_t total = 0;
  for (const auto& frame : frames) total += frame.entity_count;
  return total;
}

PipelineResult run_pipeline(const std::vector<Tweet>& tweets, const RunConfig& config) {
  if (config.max_gap != 0) {
    throw std::invalid_argument("max_gap values other than 0 are not supported yet");
  }

  EmbeddingProvider provider =
      config.embeddings_file.has_value()
          ? EmbeddingProvider::from_file(*config.embeddings_file, config.seed)
          : EmbeddingProvider::hashed(config.embed_dim, config.seed);

  EntityExtractor extractor = config.lexicon_path.has_value()
                                  ? EntityExtractor::from_lexicon_file(*config.lexicon_path)
                                  : EntityExtractor();

  std::unique_ptr<LogisticScorer> scorer;
  if (!config.no_filter && config.model_path.has_value()) {
    scorer = std::make_unique<LogisticScorer>(read_model(*config.model_path), &provider);
  } else if (!config.no_filter && !config.model_path.has_value()) {
    log_info("no trend model supplied; frames pass through unfiltered");
  }

  EnrichmentOptions enrichment;
  enrichment.top_k = config.top_k;
  enrichment.lexical_min_sim = config.lexical_min_sim.value_or(config.min_sim);
  enrichment.contextual_min_sim = config.contextual_min_sim.value_or(config.min_sim);
  enrichment.min_entity_freq = config.min_entity_freq;

  HdbscanParams clustering;
  clustering.min_cluster_size = config.min_cluster_size;
  clustering.min_samples = config.min_samples;
  clustering.leaf_extraction = config.leaf_extraction;

  std::int64_t origin = config.origin.value_or(default_origin(tweets));
  std::vector<TimeFrame> frames = window_stream(tweets, config.window_seconds, origin);

  PipelineResult result;
  ChainTracker tracker(config.min_common);

  for (const auto& raw_frame : frames) {
    FrameResult frame_result;
    frame_result.index = raw_frame.index;
    frame_result.start = raw_frame.start;
    frame_result.end = raw_frame.end;
    frame_result.tweets_total = raw_frame.tweets.size();

    TimeFrame frame = raw_frame;
    if (scorer != nullptr) {
      FilterCounts counts;
      frame = filter_frame(raw_frame, *scorer, config.filter_threshold, &counts);
      frame_result.tweets_kept = counts.kept;
      frame_result.tweets_dropped = counts.dropped;
    } else {
      frame_result.tweets_kept = raw_frame.tweets.size();
    }

    std::optional<SimilarityFeatures> features = build_features(frame, extractor, provider, enrichment);
    if (features.has_value()) {
      frame_result.entity_count = features->entities.size();

      std::vector<int> labels;
      if (config.dbscan_eps.has_value()) {
        labels = dbscan(features->feature_vectors, *config.dbscan_eps, config.dbscan_min_pts);
      } else {
        HdbscanResult clusters = hdbscan(features->feature_vectors, clustering);
        labels = std::move(clusters.labels);
        if (config.dump_condensed_dir.has_value()) {
          dump_condensed_csv(*config.dump_condensed_dir, frame.index, clusters.condensed);
        }
      }
      frame_result.clusters = clusters_from_labels(*features, labels);
      frame_result.noise = noise_entities(*features, labels);

      frame_result.indices.frame = frame.index;
      frame_result.indices.silhouette = silhouette(features->feature_vectors, labels);
      frame_result.indices.calinski_harabasz = calinski_harabasz(features->feature_vectors, labels);
      frame_result.indices.davies_bouldin = davies_bouldin(features->feature_vectors, labels);

      if (config.dump_matrices_dir.has_value()) {
        dump_matrix_csv(*config.dump_matrices_dir, "lexical", frame.index, features->entities,
                        features->lexical_sim);
        dump_matrix_csv(*config.dump_matrices_dir, "contextual", frame.index, features->entities,
                        features->contextual_sim);
      }
    } else {
      frame_result.indices.frame = frame.index;
    }

    tracker.advance(frame.index, frame_result.clusters);
    log_info("frame " + std::to_string(frame.index) + ": " +
             std::to_string(frame_result.tweets_kept) + "/" +
             std::to_string(frame_result.tweets_total) + " tweets, " +
             std::to_string(frame_result.entity_count) + " entities, " +
             std::to_string(frame_result.clusters.size()) + " clusters");
    result.frames.push_back(std::move(frame_result));
  }

  result.chains = tracker.chains();
  return result;
}

nlohmann::json chains_document(const PipelineResult& result, const RunConfig& config,
                               const MetricsReport* metrics) {
  json doc;
  doc["config"] = {
      {"window_seconds", config.window_seconds},
      {"filter_threshold", config.filter_threshold},
      {"no_filter", config.no_filter},
      {"top_k", config.top_k},
      {"min_sim", config.min_sim},
      {"min_entity_freq", config.min_entity_freq},
      {"min_cluster_size", config.min_cluster_size},
      {"min_samples", config.min_samples},
      {"min_common", config.min_common},
      {"embed_dim", config.embed_dim},
      {"seed", config.seed},
  };

  json frames = json::array();
  for (const auto& frame : result.frames) {
    json f;
    f["index"] = frame.index;
    f["start"] = frame.start;
    f["end"] = frame.end;
    f["tweets_total"] = frame.tweets_total;
    f["tweets_kept"] = frame.tweets_kept;
    f["tweets_dropped"] = frame.tweets_dropped;
    f["entities"] = frame.entity_count;
    json clusters = json::array();
    for (const auto& cluster : frame.clusters) {
      json c;
      c["cluster_id"] = cluster.cluster_id;
      json entities = json::array();
      for (const auto& entity : cluster.entities) entities.push_back(entity_to_json(entity));
      c["entities"] = std::move(entities);
      c["tweet_ids"] = cluster.tweet_ids;
      c["user_ids"] = cluster.user_ids;
      clusters.push_back(std::move(c));
    }
    f["clusters"] = std::move(clusters);
    json noise = json::array();
    for (const auto& entity : frame.noise) noise.push_back(entity_to_json(entity));
    f["noise_entities"] = std::move(noise);
    f["silhouette"] = optional_metric(frame.indices.silhouette);
    f["calinski_harabasz"] = optional_metric(frame.indices.calinski_harabasz);
    f["davies_bouldin"] = optional_metric(frame.indices.davies_bouldin);
    frames.push_back(std::move(f));
  }
  doc["frames"] = std::move(frames);

  std::map<std::pair<int, int>, const Cluster*> cluster_index;
  for (const auto& frame : result.frames) {
    for (const auto& cluster : frame.clusters) {
      cluster_index[{frame.index, cluster.cluster_id}] = &cluster;
    }
  }
  json chains = json::array();
  for (const auto& chain : result.chains) {
    json c;
    c["chain_id"] = chain.chain_id;
    c["status"] = chain.open ? "open" : "closed";
    c["edge_weights"] = chain.edge_weights;
    json links = json::array();
    for (const auto& link : chain.links) {
      json l;
      l["frame"] = link.frame;
      l["cluster_id"] = link.cluster_id;
      auto it = cluster_index.find({link.frame, link.cluster_id});
      if (it != cluster_index.end()) {
        json entities = json::array();
        for (const auto& entity : it->second->entities) entities.push_back(entity_to_json(entity));
        l["entities"] = std::move(entities);
        l["tweet_ids"] = it->second->tweet_ids;
      }
      links.push_back(std::move(l));
    }
    c["links"] = std::move(links);
    chains.push_back(std::move(c));
  }
  doc["chains"] = std::move(chains);

  if (metrics != nullptr) doc["metrics"] = metrics_to_json(*metrics);
  return doc;
}

nlohmann::json metrics_to_json(const MetricsReport& report) {
  json m;
  m["consolidation"] = optional_metric(report.consolidation);
  m["discrimination"] = optional_metric(report.discrimination);
  m["clustering_score"] = optional_metric(report.clustering_score);
  m["user_diversity_mean"] = optional_metric(report.user_diversity_mean);
  m["fraction_related_mean"] = optional_metric(report.fraction_related_mean);
  json chains = json::array();
  for (const auto& chain : report.chains) {
    chains.push_back(json{{"chain_id", chain.chain_id},
                          {"user_diversity", chain.user_diversity},
                          {"fraction_related", chain.fraction_related},
                          {"tweet_count", chain.tweet_count}});
  }
  m["chains"] = std::move(chains);
  json frames = json::array();
  for (const auto& frame : report.frames) {
    frames.push_back(json{{"frame", frame.frame},
                          {"silhouette", optional_metric(frame.silhouette)},
                          {"calinski_harabasz", optional_metric(frame.calinski_harabasz)},
                          {"davies_bouldin", optional_metric(frame.davies_bouldin)}});
  }
  m["frames"] = std::move(frames);
  return m;
}

std::string frames_csv(const std::vector<FrameResult>& frames) {
  std::ostringstream out;
  out << "frame,tweets_total,tweets_kept,entities,clusters,noise,"
         "silhouette,calinski_harabasz,davies_bouldin\n";
  auto cell = [](const std::optional<double>& v) -> std::string {
    if (!v.has_value()) return "";
    if (std::isinf(*v)) return "inf";
    std::ostringstream s;
    s << *v;
    return s.str();
  };
  for (const auto& frame : frames) {
    out << frame.index << "," << frame.tweets_total << "," << frame.tweets_kept << ","
        << frame.entity_count << "," << frame.clusters.size() << "," << frame.noise.size() << ","
        << cell(frame.indices.silhouette) << "," << cell(frame.indices.calinski_harabasz) << ","
        << cell(frame.indices.davies_bouldin) << "\n";
  }
  return out.str();
}

LoadedDocument load_chains_document(const nlohmann::json& document) {
  LoadedDocument loaded;
  if (!document.contains("frames") || !document.contains("chains")) {
    throw std::runtime_error("chains document missing 'frames' or 'chains'");
  }
  for (const auto& f : document["frames"]) {
    FrameOutput frame;
    frame.frame = f.at("index").get<int>();
    for (const auto& c : f.at("clusters")) {
      Cluster cluster;
      cluster.frame = frame.frame;
      cluster.cluster_id = c.at("cluster_id").get<int>();
      for (const auto& e : c.at("entities")) cluster.entities.push_back(entity_from_json(e));
      if (c.contains("tweet_ids")) cluster.tweet_ids = c["tweet_ids"].get<std::vector<std::string>>();
      if (c.contains("user_ids")) cluster.user_ids = c["user_ids"].get<std::vector<std::string>>();
      frame.clusters.push_back(std::move(cluster));
    }
    for (const auto& e : f.at("noise_entities")) frame.noise.push_back(entity_from_json(e));

    FrameIndexMetrics indices;
    indices.frame = frame.frame;
    if (f.contains("silhouette")) indices.silhouette = metric_from_json(f["silhouette"]);
    if (f.contains("calinski_harabasz")) {
      indices.calinski_harabasz = metric_from_json(f["calinski_harabasz"]);
    }
    if (f.contains("davies_bouldin")) indices.davies_bouldin = metric_from_json(f["davies_bouldin"]);
    loaded.frame_indices.push_back(std::move(indices));
    loaded.output.frames.push_back(std::move(frame));
  }
  for (const auto& c : document["chains"]) {
    EventChain chain;
    chain.chain_id = c.at("chain_id").get<int>();
    chain.open = c.at("status").get<std::string>() == "open";
    if (c.contains("edge_weights")) chain.edge_weights = c["edge_weights"].get<std::vector<int>>();
    for (const auto& l : c.at("links")) {
      chain.links.push_back({l.at("frame").get<int>(), l.at("cluster_id").get<int>()});
    }
    loaded.chains.push_back(std::move(chain));
  }
  return loaded;
}

MetricsReport evaluate_document(const LoadedDocument& document, const GroundTruth& truth) {
  return evaluate(document.output, truth, document.chains, document.frame_indices);
}

}  // namespace evchain
