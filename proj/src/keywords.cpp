#include "pomdebt/keywords.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "pomdebt/error.hpp"

namespace pomdebt {
namespace data {
extern const std::string_view kDefaultKeywords;
}

namespace {

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

// Lowercases ASCII and collapses whitespace runs into one space.
std::string normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      in_space = true;
      continue;
    }
    if (in_space && !out.empty()) out.push_back(' ');
    in_space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

bool matches(std::string_view haystack, const KeywordPattern& p) {
  if (p.mode == MatchMode::Substring) return haystack.find(p.phrase) != std::string_view::npos;
  for (auto pos = haystack.find(p.phrase); pos != std::string_view::npos;
       pos = haystack.find(p.phrase, pos + 1)) {
    const auto end = pos + p.phrase.size();
    const bool left = pos == 0 || !is_alnum(haystack[pos - 1]);
    const bool right = end == haystack.size() || !is_alnum(haystack[end]);
    if (left && right) return true;
  }
  return false;
}

}  // namespace

bool KeywordSet::contains(std::string_view phrase) const {
  return std::any_of(patterns.begin(), patterns.end(),
                     [&](const KeywordPattern& p) { return p.phrase == phrase; });
}

KeywordSet parse_keyword_set(std::string_view text, std::string source_tag) {
  KeywordSet set;
  set.source_tag = std::move(source_tag);
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin < text.size()) {
    auto end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(begin, end - begin);
    begin = end + 1;
    ++line_no;

    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    KeywordPattern pattern;
    if (line.front() == '!') {
      pattern.mode = MatchMode::Substring;
      line.remove_prefix(1);
    }
    pattern.phrase = normalize(line);
    if (pattern.phrase.empty()) {
      throw LineError(ErrorCode::MalformedKeywordFile, line_no, "empty phrase");
    }
    if (pattern.phrase.find("<!--") != std::string::npos ||
        pattern.phrase.find("-->") != std::string::npos) {
      throw LineError(ErrorCode::MalformedKeywordFile, line_no,
                      "phrase contains a comment delimiter");
    }
    if (!set.contains(pattern.phrase)) set.patterns.push_back(std::move(pattern));
  }
  if (set.patterns.empty()) {
    throw Error(ErrorCode::EmptyKeywordSet, "keyword set '" + set.source_tag + "' is empty");
  }
  return set;
}

KeywordSet default_keyword_set() {
  return parse_keyword_set(data::kDefaultKeywords, std::string(kDefaultKeywordTag));
}

KeywordSet load_keyword_set(const std::optional<std::filesystem::path>& source) {
  if (!source) return default_keyword_set();
  std::ifstream in(*source, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open keyword file " + source->string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_keyword_set(buffer.str(), source->string());
}

Detection detect_satd(std::string_view text, const KeywordSet& keywords) {
  const auto haystack = normalize(text);
  Detection d;
  for (const auto& pattern : keywords.patterns) {
    if (matches(haystack, pattern)) d.matched.push_back(pattern.phrase);
  }
  d.is_satd = !d.matched.empty();
  return d;
}

}  // namespace pomdebt
