#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scdtns/classifier.hpp"
#include "scdtns/error.hpp"
#include "scdtns/synthgen.hpp"

namespace scdtns {

struct Metrics {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  /// confusion[true][predicted]
  std::vector<std::vector<std::size_t>> confusion;
};

struct LabelPair {
  int truth;
  int predicted;
};

/// Accuracy, macro-averaged F1 and the confusion matrix. With class_count 0
/// the count is inferred as one more than the largest label seen.
inline Metrics score(std::span<const LabelPair> pairs, std::size_t class_count = 0) {
  if (pairs.empty()) throw Error(ErrorCode::invalid_argument, "score: no predictions");
  if (class_count == 0) {
    int top = 0;
    for (const auto& p : pairs) top = std::max({top, p.truth, p.predicted});
    class_count = static_cast<std::size_t>(top) + 1;
  }
  Metrics m;
  m.confusion.assign(class_count, std::vector<std::size_t>(class_count, 0));
  std::size_t correct = 0;
  for (const auto& p : pairs) {
    if (p.truth < 0 || p.predicted < 0 || static_cast<std::size_t>(p.truth) >= class_count ||
        static_cast<std::size_t>(p.predicted) >= class_count)
      throw Error(ErrorCode::invalid_argument, "score: label outside the declared class count");
    ++m.confusion[static_cast<std::size_t>(p.truth)][static_cast<std::size_t>(p.predicted)];
    if (p.truth == p.predicted) ++correct;
  }
  m.accuracy = static_cast<double>(correct) / static_cast<double>(pairs.size());

  double f1_sum = 0.0;
  for (std::size_t c = 0; c < class_count; ++c) {
    std::size_t predicted_c = 0, actual_c = 0;
    for (std::size_t k = 0; k < class_count; ++k) {
      predicted_c += m.confusion[k][c];
      actual_c += m.confusion[c][k];
    }
    const auto tp = static_cast<double>(m.confusion[c][c]);
    const double precision = predicted_c ? tp / static_cast<double>(predicted_c) : 0.0;
    const double recall = actual_c ? tp / static_cast<double>(actual_c) : 0.0;
    if (precision + recall > 0.0) f1_sum += 2.0 * precision * recall / (precision + recall);
  }
  m.macro_f1 = f1_sum / static_cast<double>(class_count);
  return m;
}

/// Scores a trained model on labeled data.
inline Metrics evaluate(const NSModel& model, std::span<const LabeledSignal> test) {
  std::vector<Signal> signals;
  signals.reserve(test.size());
  for (const auto& s : test) signals.push_back(s.signal);
  const auto predictions = predict_all(model, signals);
  std::vector<LabelPair> pairs(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) pairs[i] = {test[i].label, predictions[i].label};
  return score(pairs, model.class_count());
}

struct SweepRow {
  std::size_t train_size;
  Metrics metrics;
};

/// First k training samples of every class, in generation order.
inline std::vector<LabeledSignal> class_prefix(std::span<const LabeledSignal> pool, std::size_t k) {
  std::vector<LabeledSignal> out;
  std::vector<std::size_t> taken;
  for (const auto& s : pool) {
    const auto c = static_cast<std::size_t>(s.label);
    if (taken.size() <= c) taken.resize(c + 1, 0);
    if (taken[c] < k) {
      out.push_back(s);
      ++taken[c];
    }
  }
  return out;
}

/// Accuracy against training-set size. All sizes train on nested prefixes of
/// one generated pool and share one test set.
inline std::vector<SweepRow> sweep(DatasetSpec spec, std::span<const std::size_t> train_sizes,
                                   bool ood, const TrainConfig& config = {}) {
  if (train_sizes.empty()) throw Error(ErrorCode::invalid_argument, "sweep: no train sizes");
  for (std::size_t i = 0; i < train_sizes.size(); ++i) {
    if (train_sizes[i] < 1 || train_sizes[i] > spec.n_train)
      throw Error(ErrorCode::invalid_argument,
                  "sweep: train size " + std::to_string(train_sizes[i]) + " outside [1, n_train]");
    if (i > 0 && train_sizes[i] < train_sizes[i - 1])
      throw Error(ErrorCode::invalid_argument, "sweep: train sizes must be nondecreasing");
  }
  spec.ood = ood;
  const Dataset data = generate(spec);

  std::vector<SweepRow> rows;
  rows.reserve(train_sizes.size());
  for (std::size_t k : train_sizes) {
    const auto subset = class_prefix(data.train, k);
    const NSModel model = train(subset, config);
    rows.push_back({k, evaluate(model, data.test)});
  }
  return rows;
}

}  // namespace scdtns
