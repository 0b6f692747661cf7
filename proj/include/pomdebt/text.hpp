#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace pomdebt {

inline constexpr std::string_view kUrlToken = "abstracturl";

struct TokenDoc {
  std::vector<std::string> tokens;  // each matches [a-z0-9]+
  std::string source_id;

  friend bool operator==(const TokenDoc&, const TokenDoc&) = default;
};

/// Suffix-rule lemmatizer with an exception table. Idempotent: lemmatizing a
/// lemma returns it unchanged.
class Lemmatizer {
 public:
  /// The bundled table (data/lemmas.tsv).
  static const Lemmatizer& bundled();

  /// Parses "surface<TAB>lemma" lines ('#' comments allowed). Throws
  /// LineError{SchemaError} on malformed or conflicting entries.
  static Lemmatizer from_tsv(std::string_view tsv);

  std::string lemma(std::string_view token) const;

  std::size_t table_size() const { return table_.size(); }

 private:
  std::string apply_rules(std::string_view word) const;

  std::unordered_map<std::string, std::string> table_;
  std::unordered_set<std::string> lemmas_;
};

/// Hyperlinks -> "abstracturl", non-alphanumeric runs -> space, lowercase,
/// lemmatize. Stop words are kept.
TokenDoc preprocess(std::string_view raw, const Lemmatizer& lemmatizer = Lemmatizer::bundled());

std::string join_tokens(const TokenDoc& doc);

}  // namespace pomdebt
