#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace evchain {

/// A single incoming social message.
struct Tweet {
  std::string id;
  std::int64_t timestamp = 0;  // seconds since epoch
  std::string text;
  std::string user_id;
  std::int64_t retweet_count = 0;
  std::vector<std::string> hashtags;  // normalized surfaces, '#' stripped
};

/// One fixed-duration window of the stream. Tweets keep arrival order and
/// every timestamp lies in [start, end).
struct TimeFrame {
  int index = 0;
  std::int64_t start = 0;
  std::int64_t end = 0;
  std::vector<Tweet> tweets;
};

enum class EntityKind { named_entity, hashtag };

const char* to_string(EntityKind kind);
EntityKind entity_kind_from_string(const std::string& s);

/// A named entity or hashtag. (surface, kind) is the identity key; surfaces
/// are normalized and hashtags are stored without the '#' sigil.
struct Entity {
  std::string surface;
  EntityKind kind = EntityKind::named_entity;

  bool operator==(const Entity& other) const {
    return surface == other.surface && kind == other.kind;
  }
  bool operator<(const Entity& other) const {
    return std::tie(surface, kind) < std::tie(other.surface, other.kind);
  }
};

/// A per-frame group of related entities together with the tweets and
/// authors backing them.
struct Cluster {
  int frame = 0;
  int cluster_id = 0;
  std::vector<Entity> entities;          // non-empty, first-appearance order
  std::vector<std::string> tweet_ids;    // sorted union of member tweet bags
  std::vector<std::string> user_ids;     // authors, aligned with tweet_ids
};

struct ChainLink {
  int frame = 0;
  int cluster_id = 0;
};

/// A sequence of clusters in strictly consecutive frames representing one
/// evolving event. edge_weights[i] is the common-entity count between
/// links[i] and links[i+1].
struct EventChain {
  int chain_id = 0;
  std::vector<ChainLink> links;
  std::vector<int> edge_weights;
  bool open = true;
};

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

}  // namespace evchain
