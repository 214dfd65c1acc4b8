#include "evchain/synthgen.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace evchain {

namespace {

// Self-contained splitmix64 stream so output bytes do not depend on any
// library's distribution internals.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t x = state;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }
  // uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
  double unit() { return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0); }
};

// Heavy-tailed non-negative integers without touching libm: a geometric
// magnitude from trailing zero bits plus jitter.
std::int64_t heavy_tail_count(Rng& rng) {
  std::uint64_t x = rng.next() | (1ULL << 12);  // cap the magnitude at 2^12
  int z = 0;
  while ((x & 1ULL) == 0ULL) {
    x >>= 1;
    ++z;
  }
  std::int64_t base = (std::int64_t{1} << z) - 1;
  return base + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(z) + 1));
}

struct PendingTweet {
  std::int64_t timestamp;
  std::uint64_t order;  // generation sequence, breaks timestamp ties
  nlohmann::json body;
};

void validate(const SynthConfig& config) {
  if (config.frames < 1) throw std::invalid_argument("synth config: frames must be >= 1");
  if (config.tweets_per_frame < 0) {
    throw std::invalid_argument("synth config: tweets_per_frame must be >= 0");
  }
  if (config.noise_ratio < 0.0 || config.noise_ratio > 1.0) {
    throw std::invalid_argument("synth config: noise_ratio must lie in [0, 1]");
  }
  if (config.vocabulary < 1) throw std::invalid_argument("synth config: vocabulary must be >= 1");
  if (config.window_seconds < 1) {
    throw std::invalid_argument("synth config: window_seconds must be >= 1");
  }
  for (std::size_t n = 0; n < config.events.size(); ++n) {
    const SynthEvent& ev = config.events[n];
    std::string tag = "synth config: event " + std::to_string(n);
    if (ev.entity_pool < 1) throw std::invalid_argument(tag + ": entity_pool must be >= 1");
    if (ev.start_frame < 0) throw std::invalid_argument(tag + ": start_frame must be >= 0");
    if (ev.duration < 1) throw std::invalid_argument(tag + ": duration must be >= 1");
    if (ev.start_frame + ev.duration > config.frames) {
      throw std::invalid_argument(tag + ": spans past the last frame (start " +
                                  std::to_string(ev.start_frame) + " + duration " +
                                  std::to_string(ev.duration) + " > frames " +
                                  std::to_string(config.frames) + ")");
    }
    if (ev.tweets_per_frame < 1) {
      throw std::invalid_argument(tag + ": tweets_per_frame must be >= 1");
    }
    if (ev.user_pool < 1) throw std::invalid_argument(tag + ": user_pool must be >= 1");
  }
  for (int f = 0; f < config.frames; ++f) {
    std::int64_t planted = 0;
    for (const auto& ev : config.events) {
      if (ev.start_frame <= f && f < ev.start_frame + ev.duration) {
        planted += ev.tweets_per_frame + config.decoy_tweets_per_frame;
      }
    }
    std::int64_t noise =
        std::llround(config.noise_ratio * static_cast<double>(config.tweets_per_frame));
    if (planted + noise > config.tweets_per_frame) {
      throw std::invalid_argument(
          "synth config: frame " + std::to_string(f) + " needs " + std::to_string(planted) +
          " planted tweets plus " + std::to_string(noise) + " noise tweets but only " +
          std::to_string(config.tweets_per_frame) + " fit; raise tweets_per_frame or lower " +
          "noise_ratio");
    }
  }
}

}  // namespace

SynthOutput generate(const SynthConfig& config) {
  validate(config);
  Rng rng(config.seed);
  std::uint64_t tweet_seq = 0;

  auto filler = [&](std::string& text) {
    if (!text.empty()) text += " ";
    text += "w" + std::to_string(rng.below(static_cast<std::uint64_t>(config.vocabulary)));
  };

  std::string tweets_out;
  std::string truth_out;
  nlohmann::json truth_row;

  for (int f = 0; f < config.frames; ++f) {
    std::vector<PendingTweet> frame_tweets;
    std::int64_t frame_start = static_cast<std::int64_t>(f) * config.window_seconds;
    auto stamp = [&]() {
      return frame_start +
             static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(config.window_seconds)));
    };
    auto push_tweet = [&](std::string text, std::string user, std::int64_t retweets,
                          std::vector<std::string> hashtags) {
      PendingTweet pending;
      pending.timestamp = stamp();
      pending.order = tweet_seq;
      char id[16];
      std::snprintf(id, sizeof(id), "t%08llu", static_cast<unsigned long long>(tweet_seq));
      ++tweet_seq;
      pending.body["id"] = id;
      pending.body["timestamp"] = pending.timestamp;
      pending.body["text"] = std::move(text);
      pending.body["user_id"] = std::move(user);
      pending.body["retweet_count"] = retweets;
      pending.body["hashtags"] = std::move(hashtags);
      frame_tweets.push_back(std::move(pending));
    };

    std::int64_t planted = 0;
    for (std::size_t n = 0; n < config.events.size(); ++n) {
      const SynthEvent& ev = config.events[n];
      if (!(ev.start_frame <= f && f < ev.start_frame + ev.duration)) continue;
      std::string event_id = "event" + std::to_string(n);
      std::string hashtag_token = "#event" + std::to_string(n);

      for (int t = 0; t < ev.tweets_per_frame; ++t) {
        int mentions = 2 + static_cast<int>(rng.below(3));  // 2..4 pool entities
        mentions = std::min(mentions, ev.entity_pool);
        // partial Fisher-Yates draws distinct pool indices
        std::vector<int> pool(static_cast<std::size_t>(ev.entity_pool));
        std::iota(pool.begin(), pool.end(), 0);
        for (int m = 0; m < mentions; ++m) {
          std::size_t j = static_cast<std::size_t>(m) +
                          static_cast<std::size_t>(rng.below(pool.size() - static_cast<std::size_t>(m)));
          std::swap(pool[static_cast<std::size_t>(m)], pool[j]);
        }
        std::string text;
        for (int m = 0; m < mentions; ++m) {
          filler(text);
          text += " Event" + std::to_string(n) + "_e" + std::to_string(pool[static_cast<std::size_t>(m)]);
        }
        int extra = 1 + static_cast<int>(rng.below(3));
        for (int e = 0; e < extra; ++e) filler(text);
        text += " " + hashtag_token;
        std::string user = "ev" + std::to_string(n) + "_u" +
                           std::to_string(rng.below(static_cast<std::uint64_t>(ev.user_pool)));
        push_tweet(std::move(text), std::move(user), heavy_tail_count(rng),
                   {"event" + std::to_string(n)});
        ++planted;
      }
      for (int t = 0; t < config.decoy_tweets_per_frame; ++t) {
        // bystander chatter: carries the event hashtag and the decoy entity
        // but never the pool entities
        std::string text;
        filler(text);
        text += " Decoy" + std::to_string(n);
        filler(text);
        text += " " + hashtag_token;
        int extra = 1 + static_cast<int>(rng.below(3));
        for (int e = 0; e < extra; ++e) filler(text);
        std::string user = "nu" + std::to_string(rng.below(static_cast<std::uint64_t>(
                                      std::max(1, config.noise_user_pool))));
        push_tweet(std::move(text), std::move(user),
                   static_cast<std::int64_t>(rng.below(3)), {"event" + std::to_string(n)});
        ++planted;
      }

      for (int e = 0; e < ev.entity_pool; ++e) {
        truth_row = {{"frame", f},
                     {"entity", "event" + std::to_string(n) + "_e" + std::to_string(e)},
                     {"kind", "named_entity"},
                     {"event_id", event_id},
                     {"relevant", true}};
        truth_out += truth_row.dump() + "\n";
      }
      truth_row = {{"frame", f},
                   {"entity", "event" + std::to_string(n)},
                   {"kind", "hashtag"},
                   {"event_id", event_id},
                   {"relevant", true}};
      truth_out += truth_row.dump() + "\n";
      truth_row = {{"frame", f},
                   {"entity", "decoy" + std::to_string(n)},
                   {"kind", "named_entity"},
                   {"event_id", event_id},
                   {"relevant", false}};
      truth_out += truth_row.dump() + "\n";
    }

    std::int64_t noise = config.tweets_per_frame - planted;
    for (std::int64_t t = 0; t < noise; ++t) {
      std::string text;
      filler(text);
      bool with_entity = config.noise_entity_pool > 0 && rng.unit() < config.noise_entity_ratio;
      if (with_entity) {
        text += " Noise" +
                std::to_string(rng.below(static_cast<std::uint64_t>(config.noise_entity_pool)));
      }
      int extra = 3 + static_cast<int>(rng.below(4));
      for (int e = 0; e < extra; ++e) filler(text);
      std::string user = "nu" + std::to_string(rng.below(static_cast<std::uint64_t>(
                                    std::max(1, config.noise_user_pool))));
      push_tweet(std::move(text), std::move(user), heavy_tail_count(rng), {});
    }

    std::sort(frame_tweets.begin(), frame_tweets.end(),
              [](const PendingTweet& a, const PendingTweet& b) {
                if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                return a.order < b.order;
              });
    for (const auto& pending : frame_tweets) {
      tweets_out += pending.body.dump() + "\n";
    }
  }

  return SynthOutput{std::move(tweets_out), std::move(truth_out)};
}

void write_synth_output(const SynthOutput& output, const std::string& directory) {
  std::filesystem::create_directories(directory);
  std::filesystem::path dir(directory);
  {
    std::ofstream out(dir / "tweets.jsonl", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write tweets.jsonl under " + directory);
    out << output.tweets_jsonl;
  }
  {
    std::ofstream out(dir / "ground_truth.jsonl", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write ground_truth.jsonl under " + directory);
    out << output.ground_truth_jsonl;
  }
}

}  // namespace evchain
