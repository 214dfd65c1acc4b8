#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "evchain/evaluation.hpp"
#include "evchain/synthgen.hpp"
#include "evchain/trend.hpp"
#include "evchain/types.hpp"

namespace evchain {

/// A malformed line in a JSON Lines input; `line` is 1-based.
class JsonlError : public std::runtime_error {
 public:
  JsonlError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct TweetReadResult {
  std::vector<Tweet> tweets;
  std::vector<std::pair<std::size_t, std::string>> skipped;  // (line, reason)
};

/// Reads the ingestion format: one tweet object per line with keys `id`,
/// `timestamp`, `text`, `user_id`, `retweet_count` and optional `hashtags`.
/// Unknown keys are ignored; a missing hashtags key derives them from '#'
/// tokens in the text. Malformed lines throw JsonlError unless
/// skip_malformed is set, in which case they are collected in `skipped`.
TweetReadResult read_tweets_jsonl(const std::string& path, bool skip_malformed);

/// Ground truth rows: `frame`, `entity`, `kind`, `event_id` (nullable),
/// `relevant`.
GroundTruth read_ground_truth(const std::string& path);

TrendModel read_model(const std::string& path);
void write_model(const TrendModel& model, const std::string& path);

/// Labeled texts for filter training: `text`, `label` (0/1) per line.
std::vector<std::pair<std::string, int>> read_labeled_texts(const std::string& path);

SynthConfig read_synth_config(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace evchain
