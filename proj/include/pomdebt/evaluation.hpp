#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pomdebt/random.hpp"
#include "pomdebt/text.hpp"

namespace pomdebt {

/// Rows are true classes, columns predicted classes.
using Confusion = std::vector<std::vector<std::size_t>>;

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double support = 0.0;
};

struct Metrics {
  std::vector<ClassScores> per_class;
  ClassScores macro;
  ClassScores weighted;
};

/// Throws Error{NonSquare} for ragged or non-square input and
/// Error{EmptyInput} for a 0x0 matrix.
Metrics metrics(const Confusion& confusion);

/// Throws Error{LengthMismatch} / Error{EmptyInput}.
double cohen_kappa(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// Cochran's sample size with p = 0.25 and finite-population correction.
/// Throws Error{InvalidMargin}, Error{UnsupportedConfidence} or
/// Error{Precondition} (population 0).
std::size_t representative_sample_size(std::size_t population, double confidence = 0.95,
                                       double margin = 0.05);

/// Labelled token documents; label indices refer to label_names.
struct Corpus {
  std::vector<std::string> label_names;
  std::vector<TokenDoc> docs;
  std::vector<std::size_t> labels;

  Corpus subset(const std::vector<std::size_t>& indices) const;
};

/// Per-class test counts for one stratified split: floor of each class's
/// proportional share of ceil(fraction * n), remainder by largest fractional
/// part, never taking the last sample of a class.
std::vector<std::size_t> test_allocation(const std::vector<std::size_t>& class_counts,
                                         double test_fraction);

struct Split {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

Split stratified_split(const std::vector<std::size_t>& labels, std::size_t n_classes,
                       double test_fraction, SplitMix& rng);

using Predictor = std::function<std::size_t(const TokenDoc&)>;
using Trainer = std::function<Predictor(const Corpus& train)>;

struct EvalReport {
  static constexpr int kSchemaVersion = 1;

  std::string model;
  std::vector<std::string> label_names;
  std::uint64_t seed = 0;
  int rounds = 0;
  double test_fraction = 0.0;

  // Means over rounds.
  std::vector<ClassScores> per_class;
  ClassScores macro;
  ClassScores weighted;

  Confusion confusion;  // summed over rounds
  std::vector<Confusion> round_confusions;
  std::vector<double> round_weighted_f1;

  nlohmann::json to_json() const;
};

/// Repeated stratified shuffle split. Test sets of different rounds may
/// overlap. Round r draws from seed ^ r. Errors: InvalidFraction,
/// ClassTooSmall (a present class with fewer than 2 samples), plus whatever
/// the trainer throws.
EvalReport cross_validate(const Corpus& data, const Trainer& trainer, int rounds = 10,
                          double test_fraction = 0.1, std::uint64_t seed = 0,
                          unsigned threads = 1);

}  // namespace pomdebt
