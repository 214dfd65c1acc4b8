#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evchain/embedding.hpp"
#include "evchain/types.hpp"

namespace evchain {

/// Logistic model over embedded tweet text: p = sigmoid(weights . x + bias).
struct TrendModel {
  int dim = 0;
  Vec weights;
  double bias = 0.0;
  std::int64_t trained_on = 0;
};

struct LabeledExample {
  Vec x;
  int label = 0;  // 1 = refers to an event
};

double sigmoid(double z);

/// Event probability for a feature vector. Clamped into the open interval
/// (0, 1) so finite parameters never produce an exact 0 or 1. Throws on
/// dimension mismatch.
double score(const TrendModel& model, const Vec& x);

/// Mean binary cross-entropy of the model on the examples.
double bce_loss(const TrendModel& model, const std::vector<LabeledExample>& examples);

struct Gradient {
  Vec weights;
  double bias = 0.0;
};

/// Analytic full-batch gradient of bce_loss.
Gradient bce_gradient(const TrendModel& model, const std::vector<LabeledExample>& examples);

struct TrainOptions {
  int epochs = 50;
  double learning_rate = 0.1;
  std::uint64_t seed = 1;
};

/// Stochastic gradient descent on binary cross-entropy, one pass per epoch
/// over the examples reshuffled with the seed. Deterministic given the seed
/// and example order. Requires at least one example of each label.
TrendModel train(const std::vector<LabeledExample>& examples, const TrainOptions& options);

/// Pluggable per-tweet scorer used by the frame filter.
class TweetScorer {
 public:
  virtual ~TweetScorer() = default;
  virtual double score_tweet(const Tweet& tweet) const = 0;
};

/// The built-in scorer: embeds tweet text and applies the logistic model.
/// Text with no embeddable tokens scores as the zero vector.
class LogisticScorer final : public TweetScorer {
 public:
  LogisticScorer(TrendModel model, const EmbeddingProvider* provider);
  double score_tweet(const Tweet& tweet) const override;
  const TrendModel& model() const { return model_; }

 private:
  TrendModel model_;
  const EmbeddingProvider* provider_;
};

struct FilterCounts {
  std::size_t kept = 0;
  std::size_t dropped = 0;
};

/// Keeps exactly the tweets scoring >= threshold, preserving order and frame
/// boundaries.
TimeFrame filter_frame(const TimeFrame& frame, const TweetScorer& scorer, double threshold,
                       FilterCounts* counts = nullptr);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
};

struct ClassificationReport {
  ClassMetrics negative;  // label 0
  ClassMetrics positive;  // label 1
  double macro_precision = 0.0, macro_recall = 0.0, macro_f1 = 0.0;
  double weighted_precision = 0.0, weighted_recall = 0.0, weighted_f1 = 0.0;
  std::size_t total = 0;
};

/// Contingency-table precision/recall/F1 per class plus macro and
/// support-weighted averages, predicting positive at `threshold`.
ClassificationReport classification_report(const TrendModel& model,
                                           const std::vector<LabeledExample>& examples,
                                           double threshold = 0.5);

}  // namespace evchain
