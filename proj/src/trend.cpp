#include "evchain/trend.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "evchain/math.hpp"
#include "evchain/text.hpp"

namespace evchain {

namespace {

constexpr double kProbEps = 1e-12;

void check_dim(const TrendModel& model, const Vec& x) {
  if (static_cast<int>(x.size()) != model.dim) {
    throw std::invalid_argument("feature vector length " + std::to_string(x.size()) +
                                " does not match model dimension " + std::to_string(model.dim));
  }
}

double margin(const TrendModel& model, const Vec& x) {
  return dot(model.weights, x) + model.bias;
}

// Numerically stable per-example cross-entropy in terms of the margin.
double bce_term(double z, int label) {
  double zy = z * static_cast<double>(label);
  return std::max(z, 0.0) - zy + std::log1p(std::exp(-std::fabs(z)));
}

// Fisher-Yates with an explicit engine so shuffles are reproducible
// everywhere.
void shuffle_indices(std::vector<std::size_t>& order, std::uint64_t& state) {
  auto next = [&state]() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t x = state;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  };
  for (std::size_t i = order.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(next() % i);
    std::swap(order[i - 1], order[j]);
  }
}

}  // namespace

double sigmoid(double z) {
  if (z >= 0.0) {
    double e = std::exp(-z);
    return 1.0 / (1.0 + e);
  }
  double e = std::exp(z);
  return e / (1.0 + e);
}

double score(const TrendModel& model, const Vec& x) {
  check_dim(model, x);
  double p = sigmoid(margin(model, x));
  if (p < kProbEps) p = kProbEps;
  if (p > 1.0 - kProbEps) p = 1.0 - kProbEps;
  return p;
}

double bce_loss(const TrendModel& model, const std::vector<LabeledExample>& examples) {
  if (examples.empty()) throw std::invalid_argument("bce_loss needs at least one example");
  double total = 0.0;
  for (const auto& ex : examples) {
    check_dim(model, ex.x);
    total += bce_term(margin(model, ex.x), ex.label);
  }
  return total / static_cast<double>(examples.size());
}

Gradient bce_gradient(const TrendModel& model, const std::vector<LabeledExample>& examples) {
  if (examples.empty()) throw std::invalid_argument("bce_gradient needs at least one example");
  Gradient g;
  g.weights.assign(static_cast<std::size_t>(model.dim), 0.0);
  for (const auto& ex : examples) {
    check_dim(model, ex.x);
    double residual = sigmoid(margin(model, ex.x)) - static_cast<double>(ex.label);
    for (std::size_t i = 0; i < g.weights.size(); ++i) g.weights[i] += residual * ex.x[i];
    g.bias += residual;
  }
  double inv = 1.0 / static_cast<double>(examples.size());
  for (auto& w : g.weights) w *= inv;
  g.bias *= inv;
  return g;
}

TrendModel train(const std::vector<LabeledExample>& examples, const TrainOptions& options) {
  if (examples.empty()) throw std::invalid_argument("training set is empty");
  bool has_positive = false, has_negative = false;
  for (const auto& ex : examples) {
    if (ex.label == 1) has_positive = true;
    else if (ex.label == 0) has_negative = true;
    else throw std::invalid_argument("labels must be 0 or 1");
    if (ex.x.size() != examples.front().x.size()) {
      throw std::invalid_argument("training examples have inconsistent dimensions");
    }
  }
  if (!has_positive || !has_negative) {
    throw std::invalid_argument("training requires at least one example of each label");
  }
  if (options.epochs < 0) throw std::invalid_argument("epochs must be non-negative");
  if (options.learning_rate <= 0.0) throw std::invalid_argument("learning rate must be positive");

  TrendModel model;
  model.dim = static_cast<int>(examples.front().x.size());
  model.weights.assign(static_cast<std::size_t>(model.dim), 0.0);
  model.trained_on = static_cast<std::int64_t>(examples.size());

  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::uint64_t rng_state = options.seed;

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    shuffle_indices(order, rng_state);
    for (std::size_t idx : order) {
      const auto& ex = examples[idx];
      double residual = sigmoid(margin(model, ex.x)) - static_cast<double>(ex.label);
      double step = options.learning_rate * residual;
      for (std::size_t i = 0; i < model.weights.size(); ++i) {
        model.weights[i] -= step * ex.x[i];
      }
      model.bias -= step;
    }
  }
  return model;
}

LogisticScorer::LogisticScorer(TrendModel model, const EmbeddingProvider* provider)
    : model_(std::move(model)), provider_(provider) {
  if (provider_ == nullptr) throw std::invalid_argument("scorer needs an embedding provider");
  if (provider_->dimension() != model_.dim) {
    throw std::invalid_argument("model dimension does not match the embedding provider");
  }
}

double LogisticScorer::score_tweet(const Tweet& tweet) const {
  if (embedding_tokens(tweet.text).empty()) {
    return score(model_, Vec(static_cast<std::size_t>(model_.dim), 0.0));
  }
  return score(model_, provider_->embed_text(tweet.text));
}

TimeFrame filter_frame(const TimeFrame& frame, const TweetScorer& scorer, double threshold,
                       FilterCounts* counts) {
  if (threshold < 0.0 || threshold > 1.0) {
    throw std::invalid_argument("filter threshold must lie in [0, 1]");
  }
  TimeFrame out;
  out.index = frame.index;
  out.start = frame.start;
  out.end = frame.end;
  for (const auto& tweet : frame.tweets) {
    if (scorer.score_tweet(tweet) >= threshold) {
      out.tweets.push_back(tweet);
    }
  }
  if (counts != nullptr) {
    counts->kept = out.tweets.size();
    counts->dropped = frame.tweets.size() - out.tweets.size();
  }
  return out;
}

namespace {

ClassMetrics class_metrics(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t support) {
  ClassMetrics m;
  m.true_positives = tp;
  m.false_positives = fp;
  m.false_negatives = fn;
  m.support = support;
  m.precision = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  m.recall = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

}  // namespace

ClassificationReport classification_report(const TrendModel& model,
                                           const std::vector<LabeledExample>& examples,
                                           double threshold) {
  if (examples.empty()) throw std::invalid_argument("classification report needs examples");
  std::size_t tp1 = 0, fp1 = 0, fn1 = 0, tp0 = 0, fp0 = 0, fn0 = 0, n1 = 0, n0 = 0;
  for (const auto& ex : examples) {
    int predicted = score(model, ex.x) >= threshold ? 1 : 0;
    if (ex.label == 1) ++n1; else ++n0;
    if (predicted == 1) {
      if (ex.label == 1) ++tp1; else { ++fp1; ++fn0; }
    } else {
      if (ex.label == 0) ++tp0; else { ++fp0; ++fn1; }
    }
  }
  ClassificationReport report;
  report.negative = class_metrics(tp0, fp0, fn0, n0);
  report.positive = class_metrics(tp1, fp1, fn1, n1);
  report.total = examples.size();
  report.macro_precision = (report.negative.precision + report.positive.precision) / 2.0;
  report.macro_recall = (report.negative.recall + report.positive.recall) / 2.0;
  report.macro_f1 = (report.negative.f1 + report.positive.f1) / 2.0;
  double total = static_cast<double>(report.total);
  report.weighted_precision =
      (report.negative.precision * n0 + report.positive.precision * n1) / total;
  report.weighted_recall = (report.negative.recall * n0 + report.positive.recall * n1) / total;
  report.weighted_f1 = (report.negative.f1 * n0 + report.positive.f1 * n1) / total;
  return report;
}

}  // namespace evchain
