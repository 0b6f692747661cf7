#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pomdebt/ngram.hpp"

namespace pomdebt {

enum class Algorithm { NaiveBayes, Knn, Svm };

std::string_view to_string(Algorithm a) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view name);

struct Hyperparams {
  double alpha = 1.0;  // NB Laplace smoothing
  std::size_t k = 5;   // KNN
  double c = 1.0;      // SVM regularization
  int epochs = 20;     // SVM
  std::uint64_t seed = 0;

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

/// Feature vectors with label indices into label_names. The order of
/// label_names is the tie-breaking order.
struct Dataset {
  std::vector<std::string> label_names;
  std::vector<FeatureVector> x;
  std::vector<std::size_t> y;
};

struct TrainedModel {
  static constexpr int kVersion = 1;

  Algorithm algorithm = Algorithm::NaiveBayes;
  Hyperparams hyperparams;
  std::vector<std::string> label_names;
  std::size_t dim = 0;

  // NaiveBayes
  std::vector<double> log_prior;
  std::vector<std::vector<double>> log_likelihood;  // [class][feature]
  // Knn: unit-norm vectors (zero vectors stay zero)
  std::vector<FeatureVector> stored;
  std::vector<std::size_t> stored_labels;
  // Svm: one-vs-rest
  std::vector<std::vector<double>> weights;  // [class][feature]
  std::vector<double> bias;
  std::vector<std::vector<double>> loss_history;  // [class][epoch], pocket objective

  nlohmann::json to_json() const;
  static TrainedModel from_json(const nlohmann::json& j);
};

struct ModelPrediction {
  std::size_t label = 0;
  std::vector<double> scores;  // NB: posterior; KNN: vote share; SVM: margin
};

/// NB consumes raw term frequencies (negative entries are treated as 0);
/// KNN and SVM consume weighted vectors.
/// Errors: EmptyTrainingSet, SingleClass, InvalidHyperparam, DimensionMismatch.
TrainedModel train(Algorithm algorithm, const Hyperparams& hp, const Dataset& data);

/// Throws Error{DimensionMismatch} when v.dim differs from the model.
ModelPrediction predict(const TrainedModel& model, const FeatureVector& v);

/// Normalized log P(class | v) for a NaiveBayes model.
std::vector<double> nb_log_posteriors(const TrainedModel& model, const FeatureVector& v);

/// Primal SVM objective for one one-vs-rest class: lambda/2 |w|^2 + mean hinge,
/// with lambda = 1/(C n) and the bias regularized as an extra weight.
double svm_objective(const std::vector<double>& w, double b, double lambda, const Dataset& data,
                     std::size_t positive_class);

}  // namespace pomdebt
