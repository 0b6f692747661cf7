#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pomdebt/text.hpp"

namespace pomdebt {

/// Sparse vector with entries sorted by index.
struct FeatureVector {
  std::size_t dim = 0;
  std::vector<std::pair<std::size_t, double>> entries;

  double at(std::size_t index) const;
  double dot(const FeatureVector& other) const;
  double norm() const;
  bool is_zero() const { return entries.empty(); }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// ln(N * df_phrase / df_set^2). Requires 1 <= df_phrase <= df_set <= N,
/// otherwise throws Error{DomainError}.
double ngram_idf_weight(std::size_t df_phrase, std::size_t df_set, std::size_t n);

struct NgramTerm {
  std::vector<std::string> ngram;
  double weight = 0.0;
  std::map<std::string, std::size_t> class_freq;
  std::size_t df_phrase = 0;
  std::size_t df_set = 0;

  std::string text() const;
};

struct NgramVocabulary {
  static constexpr int kVersion = 1;

  int n_max = 4;
  std::size_t corpus_size = 0;
  std::vector<NgramTerm> terms;

  /// Index of a space-joined n-gram, or npos.
  std::size_t find(const std::string& joined) const;
  void reindex();

  nlohmann::json to_json() const;
  static NgramVocabulary from_json(const nlohmann::json& j);

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

struct LabelledDoc {
  TokenDoc doc;
  std::string label;
};

/// Contiguous n-grams of length 1..n_max, hapax-filtered per class, ordered by
/// (length, lexicographic). Throws Error{EmptyCorpus} / Error{InvalidHyperparam}.
NgramVocabulary build_ngram_vocabulary(const std::vector<LabelledDoc>& docs, int n_max = 4,
                                       unsigned threads = 1);

/// Raw term frequencies of vocabulary n-grams in the document.
FeatureVector term_frequencies(const TokenDoc& doc, const NgramVocabulary& vocab);

/// tf x weight.
FeatureVector vectorize(const TokenDoc& doc, const NgramVocabulary& vocab);

/// Unigram vocabulary with classic idf = ln(N/df).
struct TfidfVocabulary {
  static constexpr int kVersion = 1;

  std::size_t corpus_size = 0;
  std::vector<std::string> terms;  // sorted
  std::vector<double> idf;

  std::size_t find(const std::string& term) const;
  FeatureVector term_frequencies(const TokenDoc& doc) const;
  FeatureVector vectorize(const TokenDoc& doc) const;

  nlohmann::json to_json() const;
  static TfidfVocabulary from_json(const nlohmann::json& j);
};

/// Throws Error{EmptyCorpus} for an empty list.
TfidfVocabulary build_tfidf_vocabulary(const std::vector<TokenDoc>& docs);
std::pair<TfidfVocabulary, std::vector<FeatureVector>> vectorize_tfidf(
    const std::vector<TokenDoc>& docs);

}  // namespace pomdebt
