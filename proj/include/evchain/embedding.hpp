#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>

#include "evchain/types.hpp"

namespace evchain {

/// Deterministic text-to-vector provider. Two modes share one interface:
/// hashed (every component derived from a seeded hash of the token) and
/// file-backed (table lookup with hashed fallback for unseen tokens).
/// Read-only after construction; embed calls are safe to run concurrently.
class EmbeddingProvider {
 public:
  static EmbeddingProvider hashed(int dimension, std::uint64_t seed);

  /// Loads a vectors file: a `dim=<d>` header, then `token<TAB>v1 v2 ... vd`
  /// lines. A line whose vector length differs from the header is a load
  /// error. Out-of-vocabulary tokens fall back to hashed mode.
  static EmbeddingProvider from_file(const std::string& path, std::uint64_t seed);

  int dimension() const { return dim_; }
  bool file_backed() const { return file_backed_; }

  /// Same non-empty token always maps to the same finite vector of length d.
  Vec embed_token(const std::string& token) const;

  /// Mean of the token vectors (whitespace tokenization of the normalized
  /// text, '#' sigils stripped, punctuation-only tokens dropped). Throws
  /// std::invalid_argument when the text yields zero tokens.
  Vec embed_text(const std::string& text) const;

 private:
  EmbeddingProvider(int dimension, std::uint64_t seed, bool file_backed)
      : dim_(dimension), seed_(seed), file_backed_(file_backed) {}

  Vec hashed_vector(const std::string& token) const;

  int dim_ = 0;
  std::uint64_t seed_ = 0;
  bool file_backed_ = false;
  std::unordered_map<std::string, Vec> table_;
};

}  // namespace evchain
