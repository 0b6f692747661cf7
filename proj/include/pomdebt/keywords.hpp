#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pomdebt {

enum class MatchMode { WordBoundary, Substring };

struct KeywordPattern {
  std::string phrase;  // lowercase, single-spaced
  MatchMode mode = MatchMode::WordBoundary;

  friend bool operator==(const KeywordPattern&, const KeywordPattern&) = default;
};

struct KeywordSet {
  std::vector<KeywordPattern> patterns;
  std::string source_tag;

  bool contains(std::string_view phrase) const;
};

struct Detection {
  bool is_satd = false;
  std::vector<std::string> matched;  // phrases, in keyword-set order

  friend bool operator==(const Detection&, const Detection&) = default;
};

inline constexpr std::string_view kDefaultKeywordTag = "default-v1";

/// The bundled list (tag "default-v1").
KeywordSet default_keyword_set();

/// Parses the keyword file format: one phrase per line, '#' starts a comment
/// line, a leading '!' selects substring matching. Throws LineError with
/// MalformedKeywordFile, or Error{EmptyKeywordSet}.
KeywordSet parse_keyword_set(std::string_view text, std::string source_tag);

/// The bundled set when `source` is empty, else the file's contents.
KeywordSet load_keyword_set(const std::optional<std::filesystem::path>& source);

/// Case-insensitive keyword matching on raw comment text. Whitespace runs are
/// treated as single spaces so multiword phrases match across line breaks.
Detection detect_satd(std::string_view text, const KeywordSet& keywords);

}  // namespace pomdebt
