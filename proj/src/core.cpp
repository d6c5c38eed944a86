#include "sll/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sll {
namespace {

void require_finite(const std::vector<double>& values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw NonFiniteError(std::string(what) + " contains a non-finite value");
    }
  }
}

void require_finite(const Matrix& m, const char* what) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (double v : m.row(i)) {
      if (!std::isfinite(v)) {
        throw NonFiniteError(std::string(what) + " contains a non-finite value");
      }
    }
  }
}

}  // namespace

ClassDistribution::ClassDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) {
    throw InvalidDistributionError("a class distribution needs at least two classes, got " +
                                   std::to_string(probs_.size()));
  }
  require_finite(probs_, "class distribution");
  double sum = 0.0;
  for (double& p : probs_) {
    if (p < 0.0) {
      if (p < -kProbRepairTolerance) {
        throw InvalidDistributionError("probability " + std::to_string(p) + " is negative");
      }
      p = 0.0;
    } else if (p > 1.0) {
      if (p > 1.0 + kProbRepairTolerance) {
        throw InvalidDistributionError("probability " + std::to_string(p) + " exceeds one");
      }
      p = 1.0;
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbRepairTolerance) {
    throw InvalidDistributionError("probabilities sum to " + std::to_string(sum) +
                                   ", expected one");
  }
  if (std::abs(sum - 1.0) > kProbSumTolerance) {
    for (double& p : probs_) p /= sum;
  }
}

std::size_t ClassDistribution::argmax() const {
  return static_cast<std::size_t>(
      std::max_element(probs_.begin(), probs_.end()) - probs_.begin());
}

SoftDataset::SoftDataset(Matrix features_in, std::vector<ClassDistribution> labels_in)
    : features(std::move(features_in)), labels(std::move(labels_in)) {
  if (features.rows() != labels.size()) {
    throw ShapeMismatchError("feature rows (" + std::to_string(features.rows()) +
                             ") do not match label count (" + std::to_string(labels.size()) + ")");
  }
  if (labels.empty()) {
    throw DegenerateDataError("a soft dataset needs at least one example");
  }
  require_finite(features, "features");
  class_count = labels.front().size();
  for (const auto& label : labels) {
    if (label.size() != class_count) {
      throw ShapeMismatchError("soft labels disagree on class count");
    }
  }
}

HardDataset::HardDataset(Matrix features_in, std::vector<int> labels_in, std::size_t class_count_in)
    : features(std::move(features_in)), labels(std::move(labels_in)), class_count(class_count_in) {
  if (features.rows() != labels.size()) {
    throw ShapeMismatchError("feature rows (" + std::to_string(features.rows()) +
                             ") do not match label count (" + std::to_string(labels.size()) + ")");
  }
  if (labels.empty()) {
    throw DegenerateDataError("a hard dataset needs at least one example");
  }
  if (class_count < 2) {
    throw DegenerateDataError("a hard dataset needs at least two classes");
  }
  require_finite(features, "features");
  for (int label : labels) {
    if (label < 0 || static_cast<std::size_t>(label) >= class_count) {
      throw OutOfRangeError("label " + std::to_string(label) + " outside [0, " +
                            std::to_string(class_count) + ")");
    }
  }
}

WeightedHardDataset::WeightedHardDataset(Matrix features_in, std::vector<int> labels_in,
                                         std::vector<double> weights_in,
                                         std::size_t class_count_in)
    : features(std::move(features_in)),
      labels(std::move(labels_in)),
      weights(std::move(weights_in)),
      class_count(class_count_in) {
  if (features.rows() != labels.size() || labels.size() != weights.size()) {
    throw ShapeMismatchError("features, labels and weights disagree on example count");
  }
  if (labels.empty()) {
    throw DegenerateDataError("a weighted dataset needs at least one example");
  }
  if (class_count < 2) {
    throw DegenerateDataError("a weighted dataset needs at least two classes");
  }
  require_finite(features, "features");
  require_finite(weights, "weights");
  for (int label : labels) {
    if (label < 0 || static_cast<std::size_t>(label) >= class_count) {
      throw OutOfRangeError("label " + std::to_string(label) + " outside [0, " +
                            std::to_string(class_count) + ")");
    }
  }
  for (double w : weights) {
    if (w < 0.0) {
      throw OutOfRangeError("weight " + std::to_string(w) + " is negative");
    }
  }
  if (total_weight() <= 0.0) {
    throw ZeroWeightError("all example weights are zero");
  }
}

WeightedHardDataset WeightedHardDataset::unit_weights(HardDataset data) {
  std::vector<double> weights(data.labels.size(), 1.0);
  return WeightedHardDataset(std::move(data.features), std::move(data.labels), std::move(weights),
                             data.class_count);
}

double WeightedHardDataset::total_weight() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

void ProbabilisticClassifier::fit(const WeightedHardDataset& data, std::uint64_t seed) {
  bool single_class = true;
  int first = data.labels.front();
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.weights[i] > 0.0 && data.labels[i] != first) {
      single_class = false;
      break;
    }
    if (data.weights[i] > 0.0) first = data.labels[i];
  }
  // A fit where only one class carries weight cannot estimate anything useful
  // and every learner would degenerate differently; reject it uniformly.
  if (single_class) {
    throw SingleClassError("training data carries positive weight for a single class only");
  }
  Rng rng(seed);
  do_fit(data, rng);
  fitted_ = true;
  class_count_ = data.class_count;
  feature_count_ = data.features.cols();
}

Matrix ProbabilisticClassifier::predict_proba(const Matrix& features) const {
  if (!fitted_) {
    throw NotFittedError(std::string(name()) + " was asked to predict before fit");
  }
  if (features.cols() != feature_count_) {
    throw DimensionMismatchError("classifier was fitted on " + std::to_string(feature_count_) +
                                 " features but received " + std::to_string(features.cols()));
  }
  require_finite(features, "features");
  Matrix out = do_predict_proba(features);
  for (std::size_t i = 0; i < out.rows(); ++i) {
    double sum = 0.0;
    for (double p : out.row(i)) sum += p;
    if (std::abs(sum - 1.0) > kProbRepairTolerance) {
      throw InvalidDistributionError(std::string(name()) + " produced probabilities summing to " +
                                     std::to_string(sum));
    }
  }
  return out;
}

ClassDistribution normalize(std::vector<double> raw) {
  if (raw.size() < 2) {
    throw InvalidDistributionError("normalize needs at least two entries");
  }
  require_finite(raw, "normalize input");
  double sum = 0.0;
  for (double& v : raw) {
    v = std::clamp(v, 0.0, 1.0);
    sum += v;
  }
  if (sum <= 0.0) {
    throw AllZeroError("normalize input has no positive mass after truncation");
  }
  for (double& v : raw) v /= sum;
  return ClassDistribution(std::move(raw));
}

ClassDistribution one_hot(int label, std::size_t k) {
  if (k < 2) {
    throw InvalidDistributionError("one-hot encoding needs at least two classes");
  }
  if (label < 0 || static_cast<std::size_t>(label) >= k) {
    throw OutOfRangeError("label " + std::to_string(label) + " outside [0, " + std::to_string(k) +
                          ")");
  }
  std::vector<double> probs(k, 0.0);
  probs[static_cast<std::size_t>(label)] = 1.0;
  return ClassDistribution(std::move(probs));
}

ClassDistribution confidence_to_soft(int label, int confidence) {
  if (label != 0 && label != 1) {
    throw OutOfRangeError("confidence conversion is defined for binary labels, got " +
                          std::to_string(label));
  }
  if (confidence < 5 || confidence > 10) {
    throw OutOfRangeError("confidence " + std::to_string(confidence) + " outside 5..10");
  }
  // Both entries are divided from integers so each equals the decimal
  // literal it prints as (1.0 - 0.8 would round differently from 0.2).
  double c = confidence / 10.0;
  double rest = (10 - confidence) / 10.0;
  if (label == 0) {
    return ClassDistribution({c, rest});
  }
  return ClassDistribution({rest, c});
}

}  // namespace sll
