#include "evchain/enrichment.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

#include "evchain/log.hpp"
#include "evchain/math.hpp"
#include "evchain/text.hpp"

namespace evchain {

namespace {

// Kept small on purpose: only guards the sentence-initial capitalization
// artifact, it is not a linguistic stop list.
const std::set<std::string>& stopwords() {
  static const std::set<std::string> words = {
      "a",    "an",   "and",  "are",  "as",   "at",   "be",    "but",  "by",
      "did",  "do",   "does", "for",  "from", "had",  "has",   "have", "he",
      "her",  "his",  "how",  "i",    "if",   "in",   "is",    "it",   "its",
      "my",   "no",   "not",  "of",   "on",   "or",   "our",   "she",  "so",
      "that", "the",  "their", "then", "there", "these", "they", "this",
      "those", "to",  "was",  "we",   "were", "what", "when",  "where",
      "which", "who", "why",  "will", "with", "you",  "your"};
  return words;
}

std::vector<std::string> whitespace_split(const std::string& raw) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < raw.size()) {
    while (pos < raw.size() && std::isspace(static_cast<unsigned char>(raw[pos]))) ++pos;
    std::size_t start = pos;
    while (pos < raw.size() && !std::isspace(static_cast<unsigned char>(raw[pos]))) ++pos;
    if (pos > start) tokens.push_back(raw.substr(start, pos - start));
  }
  return tokens;
}

bool ends_sentence(const std::string& raw_token) {
  if (raw_token.empty()) return false;
  char c = raw_token.back();
  return c == '.' || c == '!' || c == '?';
}

void push_unique(std::vector<Entity>& out, Entity entity) {
  for (const auto& e : out) {
    if (e == entity) return;
  }
  out.push_back(std::move(entity));
}

// Tweet tokens with the sigil kept, cached per frame by callers.
std::vector<std::string> tweet_tokens(const Tweet& tweet) {
  return tokenize(normalize(tweet.text));
}

bool token_matches(const std::string& tweet_token, const std::string& entity_token,
                   bool hashtag_entity) {
  if (tweet_token == entity_token) return true;
  if (hashtag_entity && tweet_token.size() == entity_token.size() + 1 &&
      tweet_token.front() == '#' && tweet_token.compare(1, std::string::npos, entity_token) == 0) {
    return true;
  }
  return false;
}

int count_occurrences(const std::vector<std::string>& tokens,
                      const std::vector<std::string>& surface_tokens, bool hashtag_entity) {
  if (surface_tokens.empty() || tokens.size() < surface_tokens.size()) return 0;
  int count = 0;
  for (std::size_t start = 0; start + surface_tokens.size() <= tokens.size(); ++start) {
    bool match = true;
    for (std::size_t j = 0; j < surface_tokens.size(); ++j) {
      if (!token_matches(tokens[start + j], surface_tokens[j], hashtag_entity)) {
        match = false;
        break;
      }
    }
    if (match) ++count;
  }
  return count;
}

std::vector<std::string> split_surface(const std::string& surface) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < surface.size()) {
    std::size_t next = surface.find(' ', pos);
    if (next == std::string::npos) next = surface.size();
    if (next > pos) tokens.push_back(surface.substr(pos, next - pos));
    pos = next + 1;
  }
  return tokens;
}

}  // namespace

EntityExtractor::EntityExtractor() = default;

EntityExtractor::EntityExtractor(std::set<std::string> lexicon)
    : mode_(ExtractorMode::lexicon), lexicon_(std::move(lexicon)) {
  std::set<std::string> normalized;
  for (const auto& surface : lexicon_) {
    std::string n = normalize(surface);
    if (n.empty()) continue;
    lexicon_max_tokens_ = std::max(lexicon_max_tokens_, split_surface(n).size());
    normalized.insert(std::move(n));
  }
  lexicon_ = std::move(normalized);
}

EntityExtractor EntityExtractor::from_lexicon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon file: " + path);
  std::set<std::string> surfaces;
  std::string line;
  while (std::getline(in, line)) {
    std::string n = normalize(line);
    if (!n.empty()) surfaces.insert(std::move(n));
  }
  return EntityExtractor(std::move(surfaces));
}

std::vector<Entity> EntityExtractor::extract(const Tweet& tweet) const {
  std::vector<Entity> out;
  for (const auto& tag : tweet.hashtags) {
    std::string surface = normalize(tag);
    if (!surface.empty() && surface.front() == '#') surface.erase(surface.begin());
    if (!surface.empty()) push_unique(out, Entity{surface, EntityKind::hashtag});
  }

  if (mode_ == ExtractorMode::baseline) {
    std::vector<std::string> raw = whitespace_split(tweet.text);
    std::size_t i = 0;
    while (i < raw.size()) {
      if (!starts_uppercase(raw[i])) {
        ++i;
        continue;
      }
      std::size_t run_start = i;
      std::vector<std::string> parts;
      while (i < raw.size() && starts_uppercase(raw[i])) {
        std::string part = strip_edge_punct(normalize(raw[i]));
        if (!part.empty()) parts.push_back(std::move(part));
        bool run_breaks = ends_sentence(raw[i]);
        ++i;
        if (run_breaks) break;
      }
      if (parts.empty()) continue;
      bool sentence_initial = run_start == 0 || ends_sentence(raw[run_start - 1]);
      if (parts.size() == 1 && sentence_initial && stopwords().count(parts.front()) > 0) {
        continue;
      }
      std::string surface = parts.front();
      for (std::size_t j = 1; j < parts.size(); ++j) surface += " " + parts[j];
      push_unique(out, Entity{std::move(surface), EntityKind::named_entity});
    }
  } else {
    std::vector<std::string> tokens = tweet_tokens(tweet);
    for (auto& t : tokens) {
      if (!t.empty() && t.front() == '#') t.erase(t.begin());
    }
    std::size_t i = 0;
    while (i < tokens.size()) {
      bool matched = false;
      std::size_t max_len = std::min(lexicon_max_tokens_, tokens.size() - i);
      for (std::size_t len = max_len; len >= 1; --len) {
        std::string candidate = tokens[i];
        for (std::size_t j = 1; j < len; ++j) candidate += " " + tokens[i + j];
        if (lexicon_.count(candidate) > 0) {
          push_unique(out, Entity{candidate, EntityKind::named_entity});
          i += len;
          matched = true;
          break;
        }
      }
      if (!matched) ++i;
    }
  }
  return out;
}

std::vector<Entity> extract_entities(const EntityExtractor& extractor, const Tweet& tweet) {
  return extractor.extract(tweet);
}

std::vector<Entity> frame_entities(const EntityExtractor& extractor, const TimeFrame& frame) {
  std::vector<Entity> out;
  for (const auto& tweet : frame.tweets) {
    for (auto& entity : extractor.extract(tweet)) {
      push_unique(out, std::move(entity));
    }
  }
  return out;
}

Mat build_occurrence_matrix(const TimeFrame& frame, const std::vector<Entity>& entities) {
  std::vector<std::vector<std::string>> tokens;
  tokens.reserve(frame.tweets.size());
  for (const auto& tweet : frame.tweets) tokens.push_back(tweet_tokens(tweet));

  Mat matrix(entities.size(), Vec(frame.tweets.size(), 0.0));
  for (std::size_t i = 0; i < entities.size(); ++i) {
    const bool hashtag = entities[i].kind == EntityKind::hashtag;
    std::vector<std::string> surface_tokens = split_surface(entities[i].surface);
    for (std::size_t j = 0; j < tokens.size(); ++j) {
      matrix[i][j] = static_cast<double>(count_occurrences(tokens[j], surface_tokens, hashtag));
    }
  }
  return matrix;
}

Mat build_embedding_matrix(const TimeFrame& frame, const std::vector<Entity>& entities,
                           const EmbeddingProvider& provider, int top_k) {
  if (top_k < 1) throw std::invalid_argument("top_k must be at least 1");
  Mat occurrence = build_occurrence_matrix(frame, entities);
  Mat matrix(entities.size(), Vec(static_cast<std::size_t>(provider.dimension()), 0.0));
  for (std::size_t i = 0; i < entities.size(); ++i) {
    std::vector<std::size_t> containing;
    for (std::size_t j = 0; j < occurrence[i].size(); ++j) {
      if (occurrence[i][j] > 0.0) containing.push_back(j);
    }
    if (containing.empty()) continue;  // zero row; flagged by the caller
    std::stable_sort(containing.begin(), containing.end(), [&](std::size_t a, std::size_t b) {
      const Tweet& ta = frame.tweets[a];
      const Tweet& tb = frame.tweets[b];
      if (ta.retweet_count != tb.retweet_count) return ta.retweet_count > tb.retweet_count;
      return ta.id < tb.id;
    });
    if (containing.size() > static_cast<std::size_t>(top_k)) {
      containing.resize(static_cast<std::size_t>(top_k));
    }
    std::string concatenated;
    for (std::size_t idx : containing) {
      if (!concatenated.empty()) concatenated += " ";
      concatenated += frame.tweets[idx].text;
    }
    matrix[i] = provider.embed_text(concatenated);
  }
  return matrix;
}

Mat cosine_similarity_matrix(const Mat& rows, double min_sim) {
  if (min_sim < 0.0 || min_sim > 1.0) {
    throw std::invalid_argument("min_sim must lie in [0, 1]");
  }
  std::size_t k = rows.size();
  std::vector<double> norms(k, 0.0);
  bool warned = false;
  for (std::size_t i = 0; i < k; ++i) {
    norms[i] = norm(rows[i]);
    if (norms[i] == 0.0 && !warned) {
      log_warn("similarity matrix input contains a zero row; its similarities are all zero");
      warned = true;
    }
  }
  Mat sim(k, Vec(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    if (norms[i] == 0.0) continue;
    sim[i][i] = 1.0;
    for (std::size_t j = i + 1; j < k; ++j) {
      if (norms[j] == 0.0) continue;
      double value = dot(rows[i], rows[j]) / (norms[i] * norms[j]);
      if (value < 0.0) value = 0.0;
      if (value > 1.0) value = 1.0;
      if (value < min_sim) value = 0.0;
      sim[i][j] = value;
      sim[j][i] = value;
    }
  }
  return sim;
}

std::optional<SimilarityFeatures> build_features(const TimeFrame& frame,
                                                 const EntityExtractor& extractor,
                                                 const EmbeddingProvider& provider,
                                                 const EnrichmentOptions& options) {
  std::vector<Entity> entities = frame_entities(extractor, frame);
  if (entities.empty()) return std::nullopt;

  Mat occurrence = build_occurrence_matrix(frame, entities);

  if (options.min_entity_freq > 1) {
    std::vector<Entity> kept;
    Mat kept_rows;
    for (std::size_t i = 0; i < entities.size(); ++i) {
      int containing = 0;
      for (double c : occurrence[i]) {
        if (c > 0.0) ++containing;
      }
      if (containing >= options.min_entity_freq) {
        kept.push_back(entities[i]);
        kept_rows.push_back(occurrence[i]);
      }
    }
    entities = std::move(kept);
    occurrence = std::move(kept_rows);
    if (entities.empty()) return std::nullopt;
  }

  SimilarityFeatures features;
  features.entities.reserve(entities.size());
  for (std::size_t i = 0; i < entities.size(); ++i) {
    EntityFrameRecord record;
    record.entity = entities[i];
    record.frame = frame.index;
    record.occurrence_row = occurrence[i];
    for (std::size_t j = 0; j < occurrence[i].size(); ++j) {
      if (occurrence[i][j] > 0.0) {
        record.tweet_ids.push_back(frame.tweets[j].id);
        record.user_ids.push_back(frame.tweets[j].user_id);
      }
    }
    features.entities.push_back(std::move(record));
  }

  Mat embeddings = build_embedding_matrix(frame, entities, provider, options.top_k);
  features.lexical_sim = cosine_similarity_matrix(occurrence, options.lexical_min_sim);
  features.contextual_sim = cosine_similarity_matrix(embeddings, options.contextual_min_sim);

  std::size_t k = entities.size();
  features.feature_vectors.assign(k, Vec());
  for (std::size_t i = 0; i < k; ++i) {
    Vec& fv = features.feature_vectors[i];
    fv.reserve(2 * k);
    fv.insert(fv.end(), features.lexical_sim[i].begin(), features.lexical_sim[i].end());
    fv.insert(fv.end(), features.contextual_sim[i].begin(), features.contextual_sim[i].end());
  }
  return features;
}

}  // namespace evchain
