#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace evchain {

/// One planted event: a disjoint pool of named entities plus a hashtag,
/// active for `duration` consecutive frames.
struct SynthEvent {
  int entity_pool = 5;
  int start_frame = 0;
  int duration = 3;
  int tweets_per_frame = 20;
  int user_pool = 10;
};

/// Generator configuration. Per frame, round(noise_ratio * tweets_per_frame)
/// tweets are background noise; active events (and their decoy tweets) share
/// the remainder, and any slack becomes extra noise.
struct SynthConfig {
  std::uint64_t seed = 42;
  int frames = 3;
  int tweets_per_frame = 100;
  double noise_ratio = 0.3;
  int vocabulary = 50;
  std::int64_t window_seconds = 86400;
  std::vector<SynthEvent> events;

  // texture of the background
  int decoy_tweets_per_frame = 2;   // per active event
  int noise_entity_pool = 20;       // distinct unlabeled background entities
  double noise_entity_ratio = 0.5;  // fraction of noise tweets carrying one
  int noise_user_pool = 200;
};

struct SynthOutput {
  std::string tweets_jsonl;
  std::string ground_truth_jsonl;
};

/// Deterministic generation: equal configs produce byte-identical output.
/// Throws std::invalid_argument with an explanation for inconsistent
/// configs (events that do not fit their frames or the per-frame budget).
SynthOutput generate(const SynthConfig& config);

/// Writes tweets.jsonl and ground_truth.jsonl under `directory`.
void write_synth_output(const SynthOutput& output, const std::string& directory);

}  // namespace evchain
