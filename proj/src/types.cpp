#include "evchain/types.hpp"

namespace evchain {

const char* to_string(EntityKind kind) {
  return kind == EntityKind::hashtag ? "hashtag" : "named_entity";
}

EntityKind entity_kind_from_string(const std::string& s) {
  if (s == "hashtag") return EntityKind::hashtag;
  if (s == "named_entity") return EntityKind::named_entity;
  throw std::invalid_argument("unknown entity kind: " + s);
}

}  // namespace evchain
