#include "pomdebt/pipeline.hpp"

#include <fmt/format.h>

#include <memory>

#include "pomdebt/error.hpp"
#include "pomdebt/parallel.hpp"

namespace pomdebt {

std::string_view to_string(FeatureMode mode) noexcept {
  return mode == FeatureMode::NgramIdf ? "ngram-idf" : "tfidf";
}

std::optional<FeatureMode> parse_feature_mode(std::string_view name) {
  if (name == "ngram-idf") return FeatureMode::NgramIdf;
  if (name == "tfidf") return FeatureMode::Tfidf;
  return std::nullopt;
}

std::string PipelineConfig::describe() const {
  std::string params;
  switch (algorithm) {
    case Algorithm::NaiveBayes: params = fmt::format("alpha={}", hyperparams.alpha); break;
    case Algorithm::Knn: params = fmt::format("k={}", hyperparams.k); break;
    case Algorithm::Svm:
      params = fmt::format("C={},epochs={}", hyperparams.c, hyperparams.epochs);
      break;
  }
  return fmt::format("{}({})+{}", to_string(algorithm), params, to_string(features));
}

FeatureVector Pipeline::featurize(const TokenDoc& doc) const {
  const bool counts = config.algorithm == Algorithm::NaiveBayes;
  if (config.features == FeatureMode::NgramIdf) {
    return counts ? term_frequencies(doc, ngram) : vectorize(doc, ngram);
  }
  return counts ? tfidf.term_frequencies(doc) : tfidf.vectorize(doc);
}

ModelPrediction Pipeline::predict(const TokenDoc& doc) const {
  return pomdebt::predict(model, featurize(doc));
}

nlohmann::json Pipeline::to_json() const {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["version"] = kSchemaVersion;
  j["task"] = task ? nlohmann::json(std::string(to_string(*task))) : nlohmann::json(nullptr);
  j["feature_mode"] = std::string(to_string(config.features));
  j["n_max"] = config.n_max;
  j["vocabulary"] =
      config.features == FeatureMode::NgramIdf ? ngram.to_json() : tfidf.to_json();
  j["model"] = model.to_json();
  return j;
}

Pipeline Pipeline::from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema_version").get<int>() != kSchemaVersion) {
      throw Error(ErrorCode::SchemaError, "unsupported model file version");
    }
    Pipeline p;
    if (!j.at("task").is_null()) {
      p.task = parse_task(j.at("task").get<std::string>());
      if (!p.task) throw Error(ErrorCode::SchemaError, "unknown task");
    }
    const auto mode = parse_feature_mode(j.at("feature_mode").get<std::string>());
    if (!mode) throw Error(ErrorCode::SchemaError, "unknown feature mode");
    p.model = TrainedModel::from_json(j.at("model"));
    p.config.algorithm = p.model.algorithm;
    p.config.hyperparams = p.model.hyperparams;
    p.config.features = *mode;
    p.config.n_max = j.at("n_max").get<int>();
    std::size_t dim = 0;
    if (*mode == FeatureMode::NgramIdf) {
      p.ngram = NgramVocabulary::from_json(j.at("vocabulary"));
      dim = p.ngram.terms.size();
    } else {
      p.tfidf = TfidfVocabulary::from_json(j.at("vocabulary"));
      dim = p.tfidf.terms.size();
    }
    if (dim != p.model.dim) throw Error(ErrorCode::SchemaError, "vocabulary size != model dimension");
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("model file: ") + e.what());
  }
}

Pipeline train_pipeline(const PipelineConfig& config, const Corpus& data, unsigned threads) {
  if (data.docs.empty()) throw Error(ErrorCode::EmptyTrainingSet, "no training documents");
  Pipeline p;
  p.config = config;
  if (config.features == FeatureMode::NgramIdf) {
    std::vector<LabelledDoc> labelled;
    labelled.reserve(data.docs.size());
    for (std::size_t i = 0; i < data.docs.size(); ++i) {
      labelled.push_back({data.docs[i], data.label_names.at(data.labels[i])});
    }
    p.ngram = build_ngram_vocabulary(labelled, config.n_max, threads);
  } else {
    p.tfidf = build_tfidf_vocabulary(data.docs);
  }
  Dataset ds;
  ds.label_names = data.label_names;
  ds.y = data.labels;
  ds.x.reserve(data.docs.size());
  for (const auto& d : data.docs) ds.x.push_back(p.featurize(d));
  p.model = train(config.algorithm, config.hyperparams, ds);
  return p;
}

Trainer pipeline_trainer(const PipelineConfig& config) {
  return [config](const Corpus& train) -> Predictor {
    auto p = std::make_shared<const Pipeline>(train_pipeline(config, train));
    return [p](const TokenDoc& doc) { return p->predict(doc).label; };
  };
}

Corpus corpus_from_records(const std::vector<SatdRecord>& records, Task task) {
  Corpus c;
  c.label_names = merged_label_names(task);
  for (const auto& r : records) {
    std::optional<MergedLabel> label;
    if (task == Task::Reason && r.reason) label = merge_labels(*r.reason);
    if (task == Task::Purpose && r.purpose) label = merge_labels(*r.purpose);
    if (!label) {
      throw Error(ErrorCode::MissingLabel,
                  fmt::format("record {} has no {} label", r.id, to_string(task)));
    }
    auto doc = preprocess(r.comment.text);
    doc.source_id = r.id;
    c.docs.push_back(std::move(doc));
    c.labels.push_back(label->value);
  }
  return c;
}

std::vector<PipelineConfig> search_grid(std::uint64_t seed) {
  std::vector<PipelineConfig> grid;
  for (auto mode : {FeatureMode::NgramIdf, FeatureMode::Tfidf}) {
    for (double alpha : {0.1, 0.5, 1.0, 2.0}) {
      PipelineConfig c;
      c.algorithm = Algorithm::NaiveBayes;
      c.hyperparams.alpha = alpha;
      c.features = mode;
      grid.push_back(c);
    }
    for (std::size_t k : {1, 3, 5, 7, 9}) {
      PipelineConfig c;
      c.algorithm = Algorithm::Knn;
      c.hyperparams.k = k;
      c.features = mode;
      grid.push_back(c);
    }
    for (double cost : {0.01, 0.1, 1.0, 10.0}) {
      for (int epochs : {10, 20, 50}) {
        PipelineConfig c;
        c.algorithm = Algorithm::Svm;
        c.hyperparams.c = cost;
        c.hyperparams.epochs = epochs;
        c.hyperparams.seed = seed;
        c.features = mode;
        grid.push_back(c);
      }
    }
  }
  SplitMix rng(seed);
  shuffle(grid, rng);
  return grid;
}

SearchResult model_search(const Corpus& data, std::size_t budget, std::uint64_t seed,
                          unsigned threads) {
  if (budget < 1) throw Error(ErrorCode::Precondition, "search budget must be >= 1");
  if (data.docs.size() < 20) throw Error(ErrorCode::Precondition, "model search needs >= 20 samples");
  std::vector<bool> present(data.label_names.size(), false);
  std::size_t classes = 0;
  for (auto y : data.labels) {
    if (!present.at(y)) {
      present[y] = true;
      ++classes;
    }
  }
  if (classes < 2) throw Error(ErrorCode::Precondition, "model search needs >= 2 classes");

  auto grid = search_grid(seed);
  const auto trials = std::min(budget, grid.size());
  grid.resize(trials);

  SearchResult result;
  result.log.resize(trials);
  parallel_for(trials, threads, [&](std::size_t i) {
    auto& entry = result.log[i];
    entry.index = i;
    entry.config = grid[i];
    try {
      const auto report = cross_validate(data, pipeline_trainer(grid[i]), kSearchInnerRounds,
                                         kSearchInnerTestFraction, seed ^ i);
      entry.weighted_f1 = report.weighted.f1;
    } catch (const Error& e) {
      entry.weighted_f1 = -1.0;
      entry.error = e.what();
    }
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < trials; ++i) {
    if (result.log[i].weighted_f1 > result.log[best].weighted_f1) best = i;
  }
  if (!result.log[best].error.empty()) {
    throw Error(ErrorCode::Precondition, "every search trial failed: " + result.log[best].error);
  }
  result.best_trial = best;
  result.best_score = result.log[best].weighted_f1;
  result.best = train_pipeline(grid[best], data, threads);
  return result;
}

}  // namespace pomdebt
