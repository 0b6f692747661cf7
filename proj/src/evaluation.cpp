#include "pomdebt/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "pomdebt/error.hpp"
#include "pomdebt/parallel.hpp"

namespace pomdebt {

namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

double harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

void accumulate(ClassScores& into, const ClassScores& s, double w) {
  into.precision += w * s.precision;
  into.recall += w * s.recall;
  into.f1 += w * s.f1;
}

void add(ClassScores& into, const ClassScores& s) {
  into.precision += s.precision;
  into.recall += s.recall;
  into.f1 += s.f1;
  into.support += s.support;
}

void divide(ClassScores& s, double n) {
  s.precision /= n;
  s.recall /= n;
  s.f1 /= n;
  s.support /= n;
}

}  // namespace

Metrics metrics(const Confusion& confusion) {
  const auto n = confusion.size();
  if (n == 0) throw Error(ErrorCode::EmptyInput, "empty confusion matrix");
  for (const auto& row : confusion) {
    if (row.size() != n) throw Error(ErrorCode::NonSquare, "confusion matrix must be square");
  }
  Metrics m;
  m.per_class.resize(n);
  double total = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    const double tp = static_cast<double>(confusion[c][c]);
    double predicted = 0.0;
    double actual = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      predicted += static_cast<double>(confusion[k][c]);
      actual += static_cast<double>(confusion[c][k]);
    }
    auto& s = m.per_class[c];
    s.precision = ratio(tp, predicted);
    s.recall = ratio(tp, actual);
    s.f1 = harmonic(s.precision, s.recall);
    s.support = actual;
    total += actual;
  }
  for (const auto& s : m.per_class) {
    accumulate(m.macro, s, 1.0 / static_cast<double>(n));
    if (total > 0.0) accumulate(m.weighted, s, s.support / total);
  }
  m.macro.support = total;
  m.weighted.support = total;
  return m;
}

double cohen_kappa(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "label lists differ in length");
  if (a.empty()) throw Error(ErrorCode::EmptyInput, "no labels");
  const double n = static_cast<double>(a.size());
  std::map<std::string, double> freq_a;
  std::map<std::string, double> freq_b;
  double agree = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    freq_a[a[i]] += 1.0;
    freq_b[b[i]] += 1.0;
    if (a[i] == b[i]) agree += 1.0;
  }
  const double p_o = agree / n;
  double p_e = 0.0;
  for (const auto& [label, count] : freq_a) {
    auto it = freq_b.find(label);
    if (it != freq_b.end()) p_e += (count / n) * (it->second / n);
  }
  if (p_e >= 1.0) return p_o >= 1.0 ? 1.0 : 0.0;
  return (p_o - p_e) / (1.0 - p_e);
}

std::size_t representative_sample_size(std::size_t population, double confidence, double margin) {
  if (!(margin > 0.0 && margin < 1.0)) throw Error(ErrorCode::InvalidMargin, "margin must be in (0, 1)");
  double z = 0.0;
  if (confidence == 0.90) {
    z = 1.645;
  } else if (confidence == 0.95) {
    z = 1.960;
  } else if (confidence == 0.99) {
    z = 2.576;
  } else {
    throw Error(ErrorCode::UnsupportedConfidence, "confidence must be 0.90, 0.95 or 0.99");
  }
  if (population < 1) throw Error(ErrorCode::Precondition, "population must be >= 1");
  const double n0 = z * z * 0.25 / (margin * margin);
  const double n = n0 / (1.0 + (n0 - 1.0) / static_cast<double>(population));
  return static_cast<std::size_t>(std::ceil(n));
}

Corpus Corpus::subset(const std::vector<std::size_t>& indices) const {
  Corpus out;
  out.label_names = label_names;
  out.docs.reserve(indices.size());
  out.labels.reserve(indices.size());
  for (auto i : indices) {
    out.docs.push_back(docs[i]);
    out.labels.push_back(labels[i]);
  }
  return out;
}

std::vector<std::size_t> test_allocation(const std::vector<std::size_t>& class_counts,
                                         double test_fraction) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidFraction, "test fraction must be in (0, 1)");
  }
  const std::size_t n = std::accumulate(class_counts.begin(), class_counts.end(), std::size_t{0});
  std::vector<std::size_t> alloc(class_counts.size(), 0);
  if (n == 0) return alloc;
  std::size_t capacity = 0;
  for (auto c : class_counts) capacity += c > 0 ? c - 1 : 0;
  const auto n_test = std::min<std::size_t>(
      static_cast<std::size_t>(std::ceil(test_fraction * static_cast<double>(n))), capacity);

  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < class_counts.size(); ++c) {
    const double quota = static_cast<double>(n_test) * static_cast<double>(class_counts[c]) /
                         static_cast<double>(n);
    const auto cap = class_counts[c] > 0 ? class_counts[c] - 1 : 0;
    alloc[c] = std::min<std::size_t>(static_cast<std::size_t>(std::floor(quota)), cap);
    assigned += alloc[c];
    remainders.emplace_back(quota - std::floor(quota), c);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  // Hand out the remainder one sample at a time in largest-remainder order,
  // skipping classes already at capacity.
  while (assigned < n_test) {
    bool progressed = false;
    for (const auto& [frac, c] : remainders) {
      if (assigned == n_test) break;
      const auto cap = class_counts[c] > 0 ? class_counts[c] - 1 : 0;
      if (alloc[c] < cap) {
        ++alloc[c];
        ++assigned;
        progressed = true;
      }
    }
    if (!progressed) break;
  }
  return alloc;
}

Split stratified_split(const std::vector<std::size_t>& labels, std::size_t n_classes,
                       double test_fraction, SplitMix& rng) {
  std::vector<std::vector<std::size_t>> by_class(n_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) by_class.at(labels[i]).push_back(i);
  std::vector<std::size_t> counts;
  for (const auto& members : by_class) counts.push_back(members.size());
  const auto alloc = test_allocation(counts, test_fraction);
  Split split;
  for (std::size_t c = 0; c < n_classes; ++c) {
    auto members = by_class[c];
    shuffle(members, rng);
    split.test.insert(split.test.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(alloc[c]));
    split.train.insert(split.train.end(), members.begin() + static_cast<std::ptrdiff_t>(alloc[c]), members.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

nlohmann::json EvalReport::to_json() const {
  auto scores = [](const ClassScores& s) {
    return nlohmann::json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}, {"support", s.support}};
  };
  nlohmann::json classes = nlohmann::json::object();
  for (std::size_t c = 0; c < label_names.size(); ++c) classes[label_names[c]] = scores(per_class[c]);
  return {{"schema_version", kSchemaVersion},
          {"model", model},
          {"labels", label_names},
          {"seed", seed},
          {"rounds", rounds},
          {"test_fraction", test_fraction},
          {"per_class", classes},
          {"macro", scores(macro)},
          {"weighted", scores(weighted)},
          {"confusion", confusion},
          {"round_confusions", round_confusions},
          {"round_weighted_f1", round_weighted_f1}};
}

EvalReport cross_validate(const Corpus& data, const Trainer& trainer, int rounds,
                          double test_fraction, std::uint64_t seed, unsigned threads) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidFraction, "test fraction must be in (0, 1)");
  }
  if (rounds < 1) throw Error(ErrorCode::InvalidHyperparam, "rounds must be >= 1");
  if (data.docs.size() != data.labels.size()) {
    throw Error(ErrorCode::LengthMismatch, "documents and labels differ in length");
  }
  const auto n_classes = data.label_names.size();
  std::vector<std::size_t> counts(n_classes, 0);
  for (auto y : data.labels) {
    if (y >= n_classes) throw Error(ErrorCode::UnknownCategory, "label index out of range");
    ++counts[y];
  }
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (counts[c] == 1) {
      throw Error(ErrorCode::ClassTooSmall, "class '" + data.label_names[c] + "' has a single sample");
    }
  }

  std::vector<Confusion> confusions(static_cast<std::size_t>(rounds));
  parallel_for(confusions.size(), threads, [&](std::size_t r) {
    SplitMix rng(seed ^ static_cast<std::uint64_t>(r));
    const auto split = stratified_split(data.labels, n_classes, test_fraction, rng);
    const auto predictor = trainer(data.subset(split.train));
    Confusion conf(n_classes, std::vector<std::size_t>(n_classes, 0));
    for (auto i : split.test) {
      const auto predicted = predictor(data.docs[i]);
      ++conf[data.labels[i]].at(predicted);
    }
    confusions[r] = std::move(conf);
  });

  EvalReport report;
  report.label_names = data.label_names;
  report.seed = seed;
  report.rounds = rounds;
  report.test_fraction = test_fraction;
  report.per_class.assign(n_classes, ClassScores{});
  report.confusion.assign(n_classes, std::vector<std::size_t>(n_classes, 0));
  for (const auto& conf : confusions) {
    const auto m = metrics(conf);
    for (std::size_t c = 0; c < n_classes; ++c) {
      add(report.per_class[c], m.per_class[c]);
      for (std::size_t k = 0; k < n_classes; ++k) report.confusion[c][k] += conf[c][k];
    }
    add(report.macro, m.macro);
    add(report.weighted, m.weighted);
    report.round_weighted_f1.push_back(m.weighted.f1);
  }
  const auto n = static_cast<double>(rounds);
  for (auto& s : report.per_class) divide(s, n);
  divide(report.macro, n);
  divide(report.weighted, n);
  report.round_confusions = std::move(confusions);
  return report;
}

}  // namespace pomdebt
