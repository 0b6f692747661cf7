#include "pomdebt/text.hpp"

#include <algorithm>
#include <array>
#include <regex>

#include "pomdebt/error.hpp"
#include "pomdebt/links.hpp"

namespace pomdebt {
namespace data {
extern const std::string_view kLemmaTable;
}

namespace {

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool has_vowel(std::string_view s) { return std::any_of(s.begin(), s.end(), is_vowel); }

bool ends_with(std::string_view s, std::string_view suffix) { return s.ends_with(suffix); }

// Stems that lost a silent 'e' when -ed/-ing was removed.
bool wants_final_e(std::string_view stem) {
  const auto n = stem.size();
  if (n < 2) return false;
  const char last = stem[n - 1];
  const char prev = stem[n - 2];
  const char before = n >= 3 ? stem[n - 3] : '\0';
  if (last == 'v') return true;
  if (last == 'z' && prev == 'i') return true;
  if (last == 'l' && std::string_view("bdtpgkcfz").find(prev) != std::string_view::npos) {
    return true;
  }
  if (last == 'c' && std::string_view("nru").find(prev) != std::string_view::npos) return true;
  if (last == 'g' && (prev == 'r' || prev == 'd' || prev == 'a')) return true;
  if (last == 's' && (is_vowel(prev) || std::string_view("rnpl").find(prev) != std::string_view::npos)) {
    return true;
  }
  if (last == 'd' && prev == 'u') return true;
  if (last == 't' && prev == 'u') return true;
  // at, ir, ur, am, um: only after a consonant ("repeat", "pair" keep as is).
  const bool consonant_before = before != '\0' && !is_vowel(before);
  if (consonant_before && ((prev == 'a' && last == 't') || (prev == 'i' && last == 'r') ||
                           (prev == 'u' && last == 'r') || (prev == 'a' && last == 'm') ||
                           (prev == 'u' && last == 'm'))) {
    return true;
  }
  return false;
}

std::string finish_stem(std::string stem) {
  const auto n = stem.size();
  if (n >= 3 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) &&
      std::string_view("lsz").find(stem[n - 1]) == std::string_view::npos) {
    stem.pop_back();
    return stem;
  }
  if (wants_final_e(stem)) stem.push_back('e');
  return stem;
}

}  // namespace

const Lemmatizer& Lemmatizer::bundled() {
  static const Lemmatizer instance = from_tsv(data::kLemmaTable);
  return instance;
}

Lemmatizer Lemmatizer::from_tsv(std::string_view tsv) {
  Lemmatizer out;
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin < tsv.size()) {
    auto end = tsv.find('\n', begin);
    if (end == std::string_view::npos) end = tsv.size();
    auto line = tsv.substr(begin, end - begin);
    begin = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0 || tab + 1 >= line.size()) {
      throw LineError(ErrorCode::SchemaError, line_no, "expected surface<TAB>lemma");
    }
    std::string surface(line.substr(0, tab));
    std::string lemma(line.substr(tab + 1));
    const auto [it, inserted] = out.table_.emplace(surface, lemma);
    if (!inserted && it->second != lemma) {
      throw LineError(ErrorCode::SchemaError, line_no, "conflicting lemma for '" + surface + "'");
    }
    out.lemmas_.insert(lemma);
  }
  for (const auto& lemma : out.lemmas_) {
    const auto it = out.table_.find(lemma);
    if (it != out.table_.end() && it->second != lemma) {
      throw Error(ErrorCode::SchemaError,
                  "lemma '" + lemma + "' is itself mapped to '" + it->second + "'");
    }
  }
  return out;
}

std::string Lemmatizer::apply_rules(std::string_view w) const {
  const auto n = w.size();
  if (n <= 3) return std::string(w);
  if ((ends_with(w, "ies") || ends_with(w, "ied")) && n >= 5) {
    return std::string(w.substr(0, n - 3)) + "y";
  }
  if (ends_with(w, "sses") || ends_with(w, "xes") || ends_with(w, "ches") ||
      ends_with(w, "shes") || ends_with(w, "zzes")) {
    return std::string(w.substr(0, n - 2));
  }
  if (ends_with(w, "s")) {
    if (ends_with(w, "ss") || ends_with(w, "us") || ends_with(w, "is")) return std::string(w);
    return std::string(w.substr(0, n - 1));
  }
  if (ends_with(w, "ed") && !ends_with(w, "eed") && n >= 5) {
    const auto stem = w.substr(0, n - 2);
    if (!has_vowel(stem)) return std::string(w);
    return finish_stem(std::string(stem));
  }
  if (ends_with(w, "ing") && n >= 6) {
    const auto stem = w.substr(0, n - 3);
    if (!has_vowel(stem)) return std::string(w);
    return finish_stem(std::string(stem));
  }
  return std::string(w);
}

std::string Lemmatizer::lemma(std::string_view token) const {
  if (std::any_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return std::string(token);
  }
  const std::string word(token);
  if (const auto it = table_.find(word); it != table_.end()) return it->second;
  if (lemmas_.count(word)) return word;
  auto reduced = apply_rules(word);
  if (reduced == word) return word;
  if (const auto it = table_.find(reduced); it != table_.end()) return it->second;
  if (lemmas_.count(reduced)) return reduced;
  // Rules that would fire again on their own output are not trusted.
  if (apply_rules(reduced) != reduced) return word;
  return reduced;
}

TokenDoc preprocess(std::string_view raw, const Lemmatizer& lemmatizer) {
  const std::string input(raw);
  const std::string without_urls =
      std::regex_replace(input, hyperlink_regex(), std::string(kUrlToken));

  TokenDoc doc;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      doc.tokens.push_back(lemmatizer.lemma(current));
      current.clear();
    }
  };
  for (char c : without_urls) {
    if ((c >= 'A' && c <= 'Z')) {
      current.push_back(static_cast<char>(c - 'A' + 'a'));
    } else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      current.push_back(c);
    } else {
      flush();
    }
  }
  flush();
  return doc;
}

std::string join_tokens(const TokenDoc& doc) {
  std::string out;
  for (const auto& t : doc.tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

}  // namespace pomdebt
