#include "pomdebt/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "pomdebt/error.hpp"
#include "pomdebt/parallel.hpp"

namespace pomdebt {

namespace {

std::string join(const std::vector<std::string>& tokens, std::size_t begin, std::size_t len) {
  std::string out;
  for (std::size_t i = begin; i < begin + len; ++i) {
    if (i != begin) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::vector<std::string> split_words(const std::string& joined) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (begin <= joined.size()) {
    auto end = joined.find(' ', begin);
    if (end == std::string::npos) end = joined.size();
    out.push_back(joined.substr(begin, end - begin));
    begin = end + 1;
  }
  return out;
}

bool term_less(const NgramTerm& a, const NgramTerm& b) {
  if (a.ngram.size() != b.ngram.size()) return a.ngram.size() < b.ngram.size();
  return a.ngram < b.ngram;
}

FeatureVector from_counts(std::map<std::size_t, double> counts, std::size_t dim) {
  FeatureVector v;
  v.dim = dim;
  v.entries.assign(counts.begin(), counts.end());
  return v;
}

std::size_t intersect_count(const std::vector<const std::vector<std::size_t>*>& lists) {
  // Postings are sorted document ids; walk the shortest one.
  const auto* shortest = *std::min_element(
      lists.begin(), lists.end(), [](auto* a, auto* b) { return a->size() < b->size(); });
  std::size_t count = 0;
  for (auto doc : *shortest) {
    bool all = true;
    for (auto* list : lists) {
      if (list == shortest) continue;
      if (!std::binary_search(list->begin(), list->end(), doc)) {
        all = false;
        break;
      }
    }
    if (all) ++count;
  }
  return count;
}

}  // namespace

double FeatureVector::at(std::size_t index) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), index,
                             [](const auto& e, std::size_t i) { return e.first < i; });
  return (it != entries.end() && it->first == index) ? it->second : 0.0;
}

double FeatureVector::dot(const FeatureVector& other) const {
  double sum = 0.0;
  auto a = entries.begin();
  auto b = other.entries.begin();
  while (a != entries.end() && b != other.entries.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      sum += a->second * b->second;
      ++a;
      ++b;
    }
  }
  return sum;
}

double FeatureVector::norm() const {
  double sum = 0.0;
  for (const auto& [i, v] : entries) sum += v * v;
  return std::sqrt(sum);
}

double ngram_idf_weight(std::size_t df_phrase, std::size_t df_set, std::size_t n) {
  if (df_phrase < 1 || df_set < df_phrase || n < df_set) {
    throw Error(ErrorCode::DomainError, "ngram_idf_weight requires 1 <= df_phrase <= df_set <= N");
  }
  const double p = static_cast<double>(df_phrase);
  const double s = static_cast<double>(df_set);
  const double total = static_cast<double>(n);
  if (df_phrase == df_set) return std::log(total / p);
  return std::log(total * p / (s * s));
}

std::string NgramTerm::text() const {
  return join(ngram, 0, ngram.size());
}

std::size_t NgramVocabulary::find(const std::string& joined) const {
  auto it = index_.find(joined);
  return it == index_.end() ? std::string::npos : it->second;
}

void NgramVocabulary::reindex() {
  index_.clear();
  for (std::size_t i = 0; i < terms.size(); ++i) index_.emplace(terms[i].text(), i);
}

nlohmann::json NgramVocabulary::to_json() const {
  nlohmann::json out;
  out["version"] = kVersion;
  out["n_max"] = n_max;
  out["N"] = corpus_size;
  auto& list = out["terms"] = nlohmann::json::array();
  for (const auto& t : terms) {
    list.push_back({{"ngram", t.ngram},
                    {"weight", t.weight},
                    {"class_freq", t.class_freq},
                    {"df_phrase", t.df_phrase},
                    {"df_set", t.df_set}});
  }
  return out;
}

NgramVocabulary NgramVocabulary::from_json(const nlohmann::json& j) {
  try {
    if (j.at("version").get<int>() != kVersion) {
      throw Error(ErrorCode::SchemaError, "unsupported vocabulary version");
    }
    NgramVocabulary v;
    v.n_max = j.at("n_max").get<int>();
    v.corpus_size = j.at("N").get<std::size_t>();
    for (const auto& t : j.at("terms")) {
      NgramTerm term;
      term.ngram = t.at("ngram").get<std::vector<std::string>>();
      term.weight = t.at("weight").get<double>();
      term.class_freq = t.at("class_freq").get<std::map<std::string, std::size_t>>();
      term.df_phrase = t.value("df_phrase", std::size_t{0});
      term.df_set = t.value("df_set", std::size_t{0});
      v.terms.push_back(std::move(term));
    }
    v.reindex();
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("vocabulary: ") + e.what());
  }
}

NgramVocabulary build_ngram_vocabulary(const std::vector<LabelledDoc>& docs, int n_max,
                                       unsigned threads) {
  if (docs.empty()) throw Error(ErrorCode::EmptyCorpus, "no documents to build a vocabulary from");
  if (n_max < 1) throw Error(ErrorCode::InvalidHyperparam, "n_max must be >= 1");

  // Distinct n-grams per document, computed independently then merged in order.
  std::vector<std::vector<std::string>> per_doc(docs.size());
  parallel_for(docs.size(), threads, [&](std::size_t d) {
    const auto& tokens = docs[d].doc.tokens;
    std::unordered_set<std::string> seen;
    for (std::size_t len = 1; len <= static_cast<std::size_t>(n_max); ++len) {
      for (std::size_t i = 0; i + len <= tokens.size(); ++i) seen.insert(join(tokens, i, len));
    }
    per_doc[d].assign(seen.begin(), seen.end());
    std::sort(per_doc[d].begin(), per_doc[d].end());
  });

  std::map<std::string, std::map<std::string, std::size_t>> class_freq;
  std::unordered_map<std::string, std::vector<std::size_t>> postings;  // unigram -> docs
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const auto& g : per_doc[d]) {
      ++class_freq[g][docs[d].label];
      if (g.find(' ') == std::string::npos) postings[g].push_back(d);
    }
  }

  NgramVocabulary vocab;
  vocab.n_max = n_max;
  vocab.corpus_size = docs.size();
  for (auto& [joined, freq] : class_freq) {
    const bool keep = std::any_of(freq.begin(), freq.end(), [](const auto& kv) { return kv.second > 1; });
    if (!keep) continue;
    NgramTerm term;
    term.ngram = split_words(joined);
    term.class_freq = std::move(freq);
    for (const auto& [label, count] : term.class_freq) term.df_phrase += count;
    std::set<std::string> distinct(term.ngram.begin(), term.ngram.end());
    std::vector<const std::vector<std::size_t>*> lists;
    for (const auto& w : distinct) lists.push_back(&postings.at(w));
    term.df_set = intersect_count(lists);
    term.weight = ngram_idf_weight(term.df_phrase, term.df_set, vocab.corpus_size);
    vocab.terms.push_back(std::move(term));
  }
  std::sort(vocab.terms.begin(), vocab.terms.end(), term_less);
  vocab.reindex();
  return vocab;
}

FeatureVector term_frequencies(const TokenDoc& doc, const NgramVocabulary& vocab) {
  std::map<std::size_t, double> counts;
  const auto& tokens = doc.tokens;
  for (std::size_t len = 1; len <= static_cast<std::size_t>(vocab.n_max); ++len) {
    for (std::size_t i = 0; i + len <= tokens.size(); ++i) {
      const auto idx = vocab.find(join(tokens, i, len));
      if (idx != std::string::npos) counts[idx] += 1.0;
    }
  }
  return from_counts(std::move(counts), vocab.terms.size());
}

FeatureVector vectorize(const TokenDoc& doc, const NgramVocabulary& vocab) {
  auto v = term_frequencies(doc, vocab);
  for (auto& [i, value] : v.entries) value *= vocab.terms[i].weight;
  return v;
}

std::size_t TfidfVocabulary::find(const std::string& term) const {
  auto it = std::lower_bound(terms.begin(), terms.end(), term);
  return (it != terms.end() && *it == term) ? static_cast<std::size_t>(it - terms.begin())
                                            : std::string::npos;
}

FeatureVector TfidfVocabulary::term_frequencies(const TokenDoc& doc) const {
  std::map<std::size_t, double> counts;
  for (const auto& t : doc.tokens) {
    const auto idx = find(t);
    if (idx != std::string::npos) counts[idx] += 1.0;
  }
  return from_counts(std::move(counts), terms.size());
}

FeatureVector TfidfVocabulary::vectorize(const TokenDoc& doc) const {
  auto v = term_frequencies(doc);
  for (auto& [i, value] : v.entries) value *= idf[i];
  return v;
}

nlohmann::json TfidfVocabulary::to_json() const {
  return {{"version", kVersion}, {"N", corpus_size}, {"terms", terms}, {"idf", idf}};
}

TfidfVocabulary TfidfVocabulary::from_json(const nlohmann::json& j) {
  try {
    if (j.at("version").get<int>() != kVersion) {
      throw Error(ErrorCode::SchemaError, "unsupported vocabulary version");
    }
    TfidfVocabulary v;
    v.corpus_size = j.at("N").get<std::size_t>();
    v.terms = j.at("terms").get<std::vector<std::string>>();
    v.idf = j.at("idf").get<std::vector<double>>();
    if (v.terms.size() != v.idf.size() || !std::is_sorted(v.terms.begin(), v.terms.end())) {
      throw Error(ErrorCode::SchemaError, "vocabulary terms/idf mismatch");
    }
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("vocabulary: ") + e.what());
  }
}

TfidfVocabulary build_tfidf_vocabulary(const std::vector<TokenDoc>& docs) {
  if (docs.empty()) throw Error(ErrorCode::EmptyCorpus, "no documents to build a vocabulary from");
  std::map<std::string, std::size_t> df;
  for (const auto& d : docs) {
    std::set<std::string> seen(d.tokens.begin(), d.tokens.end());
    for (const auto& t : seen) ++df[t];
  }
  TfidfVocabulary v;
  v.corpus_size = docs.size();
  const double n = static_cast<double>(docs.size());
  for (const auto& [term, count] : df) {
    v.terms.push_back(term);
    v.idf.push_back(std::log(n / static_cast<double>(count)));
  }
  return v;
}

std::pair<TfidfVocabulary, std::vector<FeatureVector>> vectorize_tfidf(
    const std::vector<TokenDoc>& docs) {
  auto vocab = build_tfidf_vocabulary(docs);
  std::vector<FeatureVector> vectors;
  vectors.reserve(docs.size());
  for (const auto& d : docs) vectors.push_back(vocab.vectorize(d));
  return {std::move(vocab), std::move(vectors)};
}

}  // namespace pomdebt
