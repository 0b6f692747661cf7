#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pomdebt/classifier.hpp"
#include "pomdebt/evaluation.hpp"
#include "pomdebt/labels.hpp"
#include "pomdebt/ngram.hpp"
#include "pomdebt/record.hpp"

namespace pomdebt {

enum class FeatureMode { NgramIdf, Tfidf };

std::string_view to_string(FeatureMode mode) noexcept;
std::optional<FeatureMode> parse_feature_mode(std::string_view name);

struct PipelineConfig {
  Algorithm algorithm = Algorithm::NaiveBayes;
  Hyperparams hyperparams;
  FeatureMode features = FeatureMode::NgramIdf;
  int n_max = 4;

  /// e.g. "svm(C=1,epochs=20)+ngram-idf"
  std::string describe() const;
};

/// Text in, label out: the vocabulary built on the training documents plus a
/// model over its vectors. NB sees term frequencies, KNN/SVM weighted vectors.
struct Pipeline {
  static constexpr int kSchemaVersion = 1;

  PipelineConfig config;
  std::optional<Task> task;
  NgramVocabulary ngram;
  TfidfVocabulary tfidf;
  TrainedModel model;

  const std::vector<std::string>& label_names() const { return model.label_names; }

  FeatureVector featurize(const TokenDoc& doc) const;
  ModelPrediction predict(const TokenDoc& doc) const;

  nlohmann::json to_json() const;
  static Pipeline from_json(const nlohmann::json& j);
};

Pipeline train_pipeline(const PipelineConfig& config, const Corpus& data, unsigned threads = 1);
Trainer pipeline_trainer(const PipelineConfig& config);

/// Preprocessed comment text with merged labels for `task`. Throws
/// Error{MissingLabel} naming the first record without a label.
Corpus corpus_from_records(const std::vector<SatdRecord>& records, Task task);

/// Every (algorithm, hyperparameters, feature mode) combination searched,
/// permuted by the seed.
std::vector<PipelineConfig> search_grid(std::uint64_t seed);

struct TrialLog {
  std::size_t index = 0;
  PipelineConfig config;
  double weighted_f1 = 0.0;
  std::string error;  // empty when the trial ran
};

struct SearchResult {
  Pipeline best;
  std::size_t best_trial = 0;
  double best_score = 0.0;
  std::vector<TrialLog> log;
};

inline constexpr int kSearchInnerRounds = 5;
inline constexpr double kSearchInnerTestFraction = 0.2;

/// Seeded random search scored by weighted F1 under an inner stratified
/// shuffle split; trial i uses seed ^ i. Requires >= 20 samples, >= 2 classes
/// and budget >= 1 (Error{Precondition}).
SearchResult model_search(const Corpus& data, std::size_t budget, std::uint64_t seed,
                          unsigned threads = 1);

}  // namespace pomdebt
