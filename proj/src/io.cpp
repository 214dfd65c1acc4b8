#include "evchain/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "evchain/log.hpp"
#include "evchain/text.hpp"

namespace evchain {

namespace {

using nlohmann::json;

json parse_line(const std::string& line, std::size_t line_no) {
  json parsed = json::parse(line, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw JsonlError(line_no, "not a JSON object");
  }
  return parsed;
}

Tweet tweet_from_json(const json& j, std::size_t line_no) {
  Tweet tweet;
  if (!j.contains("id") || !j["id"].is_string()) {
    throw JsonlError(line_no, "missing string field 'id'");
  }
  tweet.id = j["id"].get<std::string>();
  if (tweet.id.empty()) throw JsonlError(line_no, "'id' must be non-empty");
  if (!j.contains("timestamp") || !j["timestamp"].is_number_integer()) {
    throw JsonlError(line_no, "missing integer field 'timestamp'");
  }
  tweet.timestamp = j["timestamp"].get<std::int64_t>();
  if (tweet.timestamp < 0) throw JsonlError(line_no, "'timestamp' must be non-negative");
  if (!j.contains("text") || !j["text"].is_string()) {
    throw JsonlError(line_no, "missing string field 'text'");
  }
  tweet.text = j["text"].get<std::string>();
  if (!j.contains("user_id") || !j["user_id"].is_string()) {
    throw JsonlError(line_no, "missing string field 'user_id'");
  }
  tweet.user_id = j["user_id"].get<std::string>();
  if (!j.contains("retweet_count") || !j["retweet_count"].is_number_integer()) {
    throw JsonlError(line_no, "missing integer field 'retweet_count'");
  }
  tweet.retweet_count = j["retweet_count"].get<std::int64_t>();
  if (tweet.retweet_count < 0) throw JsonlError(line_no, "'retweet_count' must be non-negative");

  if (j.contains("hashtags")) {
    if (!j["hashtags"].is_array()) throw JsonlError(line_no, "'hashtags' must be an array");
    for (const auto& tag : j["hashtags"]) {
      if (!tag.is_string()) throw JsonlError(line_no, "'hashtags' entries must be strings");
      std::string surface = normalize(tag.get<std::string>());
      while (!surface.empty() && surface.front() == '#') surface.erase(surface.begin());
      if (!surface.empty()) tweet.hashtags.push_back(std::move(surface));
    }
  } else {
    tweet.hashtags = hashtags_from_text(tweet.text);
  }
  return tweet;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << contents;
}

TweetReadResult read_tweets_jsonl(const std::string& path, bool skip_malformed) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  TweetReadResult result;
  std::set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      Tweet tweet = tweet_from_json(parse_line(line, line_no), line_no);
      if (!seen_ids.insert(tweet.id).second) {
        throw JsonlError(line_no, "duplicate tweet id '" + tweet.id + "'");
      }
      result.tweets.push_back(std::move(tweet));
    } catch (const JsonlError& error) {
      if (!skip_malformed) throw;
      log_warn(path + ":" + std::to_string(line_no) + " skipped: " + error.what());
      result.skipped.emplace_back(line_no, error.what());
    }
  }
  return result;
}

GroundTruth read_ground_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open ground truth file: " + path);
  GroundTruth truth;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = parse_line(line, line_no);
    if (!j.contains("frame") || !j["frame"].is_number_integer()) {
      throw JsonlError(line_no, "missing integer field 'frame'");
    }
    if (!j.contains("entity") || !j["entity"].is_string()) {
      throw JsonlError(line_no, "missing string field 'entity'");
    }
    if (!j.contains("kind") || !j["kind"].is_string()) {
      throw JsonlError(line_no, "missing string field 'kind'");
    }
    if (!j.contains("relevant") || !j["relevant"].is_boolean()) {
      throw JsonlError(line_no, "missing boolean field 'relevant'");
    }
    Entity entity;
    entity.surface = normalize(j["entity"].get<std::string>());
    try {
      entity.kind = entity_kind_from_string(j["kind"].get<std::string>());
    } catch (const std::invalid_argument& error) {
      throw JsonlError(line_no, error.what());
    }
    std::optional<std::string> event_id;
    if (j.contains("event_id") && !j["event_id"].is_null()) {
      if (!j["event_id"].is_string()) throw JsonlError(line_no, "'event_id' must be a string");
      event_id = j["event_id"].get<std::string>();
    }
    try {
      truth.add(j["frame"].get<int>(), entity, std::move(event_id),
                j["relevant"].get<bool>());
    } catch (const std::invalid_argument& error) {
      throw JsonlError(line_no, error.what());
    }
  }
  return truth;
}

TrendModel read_model(const std::string& path) {
  json j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw std::runtime_error("model file is not a JSON object: " + path);
  }
  TrendModel model;
  if (!j.contains("dim") || !j.contains("weights") || !j.contains("bias")) {
    throw std::runtime_error("model file missing dim/weights/bias: " + path);
  }
  model.dim = j["dim"].get<int>();
  model.weights = j["weights"].get<Vec>();
  model.bias = j["bias"].get<double>();
  model.trained_on = j.value("trained_on", std::int64_t{0});
  if (model.dim <= 0 || static_cast<int>(model.weights.size()) != model.dim) {
    throw std::runtime_error("model file dimension mismatch: " + path);
  }
  return model;
}

void write_model(const TrendModel& model, const std::string& path) {
  json j;
  j["dim"] = model.dim;
  j["weights"] = model.weights;
  j["bias"] = model.bias;
  j["trained_on"] = model.trained_on;
  write_file(path, j.dump(2) + "\n");
}

std::vector<std::pair<std::string, int>> read_labeled_texts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open labeled file: " + path);
  std::vector<std::pair<std::string, int>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = parse_line(line, line_no);
    if (!j.contains("text") || !j["text"].is_string()) {
      throw JsonlError(line_no, "missing string field 'text'");
    }
    if (!j.contains("label") || !j["label"].is_number_integer()) {
      throw JsonlError(line_no, "missing integer field 'label'");
    }
    int label = j["label"].get<int>();
    if (label != 0 && label != 1) throw JsonlError(line_no, "'label' must be 0 or 1");
    out.emplace_back(j["text"].get<std::string>(), label);
  }
  return out;
}

SynthConfig read_synth_config(const std::string& path) {
  json j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw std::runtime_error("synth config is not a JSON object: " + path);
  }
  SynthConfig config;
  config.seed = j.value("seed", config.seed);
  config.frames = j.value("frames", config.frames);
  config.tweets_per_frame = j.value("tweets_per_frame", config.tweets_per_frame);
  config.noise_ratio = j.value("noise_ratio", config.noise_ratio);
  config.vocabulary = j.value("vocabulary", config.vocabulary);
  config.window_seconds = j.value("window_seconds", config.window_seconds);
  config.decoy_tweets_per_frame = j.value("decoy_tweets_per_frame", config.decoy_tweets_per_frame);
  config.noise_entity_pool = j.value("noise_entity_pool", config.noise_entity_pool);
  config.noise_entity_ratio = j.value("noise_entity_ratio", config.noise_entity_ratio);
  config.noise_user_pool = j.value("noise_user_pool", config.noise_user_pool);
  if (j.contains("events")) {
    if (!j["events"].is_array()) throw std::runtime_error("synth config 'events' must be an array");
    for (const auto& e : j["events"]) {
      SynthEvent event;
      event.entity_pool = e.value("entity_pool", event.entity_pool);
      event.start_frame = e.value("start_frame", event.start_frame);
      event.duration = e.value("duration", event.duration);
      event.tweets_per_frame = e.value("tweets_per_frame", event.tweets_per_frame);
      event.user_pool = e.value("user_pool", event.user_pool);
      config.events.push_back(event);
    }
  }
  return config;
}

}  // namespace evchain
