#include "evchain/embedding.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "evchain/text.hpp"

namespace evchain {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Top 53 bits to a double in [0, 1).
double to_unit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * (1.0 / 9007199254740992.0);
}

}  // namespace

EmbeddingProvider EmbeddingProvider::hashed(int dimension, std::uint64_t seed) {
  if (dimension <= 0) throw std::invalid_argument("embedding dimension must be positive");
  return EmbeddingProvider(dimension, seed, false);
}

EmbeddingProvider EmbeddingProvider::from_file(const std::string& path, std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vectors file: " + path);

  std::string header;
  if (!std::getline(in, header) || header.rfind("dim=", 0) != 0) {
    throw std::runtime_error("vectors file missing dim=<d> header: " + path);
  }
  int dim = 0;
  try {
    dim = std::stoi(header.substr(4));
  } catch (const std::exception&) {
    throw std::runtime_error("vectors file has malformed dim header: " + path);
  }
  if (dim <= 0) throw std::runtime_error("vectors file dimension must be positive: " + path);

  EmbeddingProvider provider(dim, seed, true);
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error("vectors file line " + std::to_string(line_no) +
                               ": expected token<TAB>values");
    }
    std::string token = line.substr(0, tab);
    std::istringstream values(line.substr(tab + 1));
    Vec v;
    v.reserve(static_cast<std::size_t>(dim));
    double x = 0.0;
    while (values >> x) v.push_back(x);
    if (static_cast<int>(v.size()) != dim) {
      throw std::runtime_error("vectors file line " + std::to_string(line_no) +
                               ": dimension mismatch (got " + std::to_string(v.size()) +
                               ", header says " + std::to_string(dim) + ")");
    }
    provider.table_[token] = std::move(v);  // later entries win
  }
  return provider;
}

Vec EmbeddingProvider::hashed_vector(const std::string& token) const {
  Vec v(static_cast<std::size_t>(dim_));
  std::uint64_t base = seed_ ^ fnv1a(token);
  for (int i = 0; i < dim_; ++i) {
    std::uint64_t h = splitmix64(base + static_cast<std::uint64_t>(i + 1) * 0x9E3779B97F4A7C15ULL);
    v[static_cast<std::size_t>(i)] = 2.0 * to_unit(h) - 1.0;
  }
  return v;
}

Vec EmbeddingProvider::embed_token(const std::string& token) const {
  if (token.empty()) throw std::invalid_argument("cannot embed an empty token");
  if (file_backed_) {
    auto it = table_.find(token);
    if (it != table_.end()) return it->second;
  }
  return hashed_vector(token);
}

Vec EmbeddingProvider::embed_text(const std::string& text) const {
  std::vector<std::string> tokens = embedding_tokens(text);
  if (tokens.empty()) {
    throw std::invalid_argument("text yields no tokens to embed");
  }
  // Accumulate in sorted-token order so the mean is exactly permutation-free.
  std::sort(tokens.begin(), tokens.end());
  Vec mean(static_cast<std::size_t>(dim_), 0.0);
  for (const auto& token : tokens) {
    Vec v = embed_token(token);
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += v[i];
  }
  double inv = 1.0 / static_cast<double>(tokens.size());
  for (auto& x : mean) x *= inv;
  return mean;
}

}  // namespace evchain
