#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pomdebt/error.hpp"
#include "pomdebt/evaluation.hpp"

using namespace pomdebt;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::IoError;
}

Corpus labelled(const std::vector<std::size_t>& labels, std::size_t classes) {
  Corpus c;
  for (std::size_t k = 0; k < classes; ++k) c.label_names.push_back("c" + std::to_string(k));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    c.docs.push_back(TokenDoc{{"d" + std::to_string(i)}, std::to_string(i)});
  }
  c.labels = labels;
  return c;
}

Predictor majority_of(const Corpus& train) {
  std::vector<std::size_t> counts(train.label_names.size(), 0);
  for (auto y : train.labels) ++counts[y];
  const auto best = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  return [best](const TokenDoc&) { return best; };
}

// Predicts the label encoded in the document's source id.
Trainer oracle_trainer(const std::vector<std::size_t>& labels) {
  return [labels](const Corpus&) {
    return [labels](const TokenDoc& d) { return labels[std::stoul(d.source_id)]; };
  };
}

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("metrics oracle") {
  const auto m = metrics({{8, 2}, {4, 6}});
  CHECK(m.per_class[0].precision == doctest::Approx(8.0 / 12).epsilon(1e-12));
  CHECK(m.per_class[0].recall == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(m.per_class[0].f1 == doctest::Approx(2 * (8.0 / 12) * 0.8 / (8.0 / 12 + 0.8)).epsilon(1e-12));
  CHECK(std::abs(m.per_class[0].precision - 0.6667) < 1e-4);
  CHECK(std::abs(m.per_class[0].f1 - 0.7273) < 1e-4);
  CHECK(m.per_class[1].precision == doctest::Approx(0.75));
  CHECK(m.per_class[1].recall == doctest::Approx(0.6));
  CHECK(m.macro.f1 == doctest::Approx(m.weighted.f1));

  const auto diag = metrics({{3, 0, 0}, {0, 5, 0}, {0, 0, 1}});
  for (const auto& s : diag.per_class) {
    CHECK(s.precision == 1.0);
    CHECK(s.recall == 1.0);
    CHECK(s.f1 == 1.0);
  }
  CHECK(diag.macro.f1 == 1.0);
  CHECK(diag.weighted.f1 == 1.0);

  const auto never = metrics({{5, 0}, {3, 0}});
  CHECK(never.per_class[1].precision == 0.0);
  CHECK(never.per_class[1].f1 == 0.0);

  CHECK(code_of([] { metrics({{1, 2}, {3}}); }) == ErrorCode::NonSquare);
  CHECK(code_of([] { metrics({{1, 2}}); }) == ErrorCode::NonSquare);
  CHECK(code_of([] { metrics({}); }) == ErrorCode::EmptyInput);
}

TEST_CASE("weighted F1 lies between the per-class extremes") {
  SplitMix rng(12);
  for (int t = 0; t < 300; ++t) {
    const auto k = 2 + rng.below(4);
    Confusion c(k, std::vector<std::size_t>(k));
    for (auto& row : c) {
      for (auto& v : row) v = rng.below(6);
      row[rng.below(k)] += 1;
    }
    const auto m = metrics(c);
    double lo = 1, hi = 0;
    for (const auto& s : m.per_class) {
      lo = std::min(lo, s.f1);
      hi = std::max(hi, s.f1);
      for (double v : {s.precision, s.recall, s.f1}) CHECK((v >= 0.0 && v <= 1.0));
    }
    CHECK(m.weighted.f1 >= lo - 1e-12);
    CHECK(m.weighted.f1 <= hi + 1e-12);
  }
}

TEST_CASE("cohen kappa") {
  std::vector<std::string> a, b;
  auto add = [&](const char* x, const char* y, int n) {
    for (int i = 0; i < n; ++i) {
      a.push_back(x);
      b.push_back(y);
    }
  };
  add("yes", "yes", 20);
  add("yes", "no", 5);
  add("no", "yes", 10);
  add("no", "no", 15);
  CHECK(std::abs(cohen_kappa(a, b) - 0.4) < 1e-9);
  CHECK(cohen_kappa(a, a) == 1.0);
  CHECK(cohen_kappa({"x", "x"}, {"x", "x"}) == 1.0);
  CHECK(code_of([] { cohen_kappa({"a"}, {"a", "b"}); }) == ErrorCode::LengthMismatch);
  CHECK(code_of([] { cohen_kappa({}, {}); }) == ErrorCode::EmptyInput);

  SplitMix rng(31);
  for (int t = 0; t < 500; ++t) {
    const auto n = 1 + rng.below(30);
    std::vector<std::string> x, y;
    for (std::uint64_t i = 0; i < n; ++i) {
      x.push_back(std::to_string(rng.below(3)));
      y.push_back(std::to_string(rng.below(3)));
    }
    const double k = cohen_kappa(x, y);
    CHECK(k >= -1.0 - 1e-12);
    CHECK(k <= 1.0 + 1e-12);
  }
  std::vector<std::string> x, y;
  for (int i = 0; i < 20000; ++i) {
    x.push_back(std::to_string(rng.below(4)));
    y.push_back(std::to_string(rng.below(4)));
  }
  CHECK(std::abs(cohen_kappa(x, y)) < 0.03);
}

TEST_CASE("representative sample size") {
  CHECK(representative_sample_size(248502, 0.95, 0.05) == 384);
  CHECK(representative_sample_size(1000000000, 0.95, 0.05) == 385);
  for (std::size_t pop : {1u, 10u, 384u, 5000u, 100000u}) {
    for (auto [conf, z] : {std::pair{0.90, 1.645}, {0.95, 1.960}, {0.99, 2.576}}) {
      const double n0 = z * z * 0.25 / (0.05 * 0.05);
      const double n = n0 / (1.0 + (n0 - 1.0) / static_cast<double>(pop));
      CHECK(representative_sample_size(pop, conf, 0.05) == static_cast<std::size_t>(std::ceil(n)));
      CHECK(representative_sample_size(pop, conf, 0.05) <= pop);
    }
  }
  CHECK(code_of([] { representative_sample_size(100, 0.95, 0.0); }) == ErrorCode::InvalidMargin);
  CHECK(code_of([] { representative_sample_size(100, 0.95, 1.0); }) == ErrorCode::InvalidMargin);
  CHECK(code_of([] { representative_sample_size(100, 0.8, 0.05); }) == ErrorCode::UnsupportedConfidence);
  CHECK(code_of([] { representative_sample_size(0, 0.95, 0.05); }) == ErrorCode::Precondition);
}

TEST_CASE("test allocation") {
  CHECK(test_allocation({16, 4}, 0.25) == std::vector<std::size_t>{4, 1});
  CHECK(test_allocation({18, 2}, 0.1) == std::vector<std::size_t>{2, 0});
  CHECK(test_allocation({2, 2}, 0.9) == std::vector<std::size_t>{1, 1});
  CHECK(code_of([] { test_allocation({3, 3}, 0.0); }) == ErrorCode::InvalidFraction);
  CHECK(code_of([] { test_allocation({3, 3}, 1.0); }) == ErrorCode::InvalidFraction);
}

TEST_CASE("stratified split keeps class proportions within one sample") {
  SplitMix rng(17);
  for (int t = 0; t < 300; ++t) {
    const auto k = 2 + rng.below(4);
    std::vector<std::size_t> labels;
    for (std::size_t c = 0; c < k; ++c) {
      const auto n = 2 + rng.below(40);
      labels.insert(labels.end(), n, c);
    }
    shuffle(labels, rng);
    const double f = 0.05 + 0.45 * rng.unit();
    const auto split = stratified_split(labels, k, f, rng);
    CHECK(split.train.size() + split.test.size() == labels.size());
    CHECK(std::is_sorted(split.test.begin(), split.test.end()));
    std::vector<std::size_t> all = split.train;
    all.insert(all.end(), split.test.begin(), split.test.end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i] == i);

    std::vector<double> total(k), test(k);
    for (auto y : labels) total[y] += 1;
    for (auto i : split.test) test[labels[i]] += 1;
    const double n_test = static_cast<double>(split.test.size());
    for (std::size_t c = 0; c < k; ++c) {
      CHECK(std::abs(test[c] - n_test * total[c] / static_cast<double>(labels.size())) <= 1.0 + 1e-9);
      CHECK(test[c] < total[c]);
    }
  }
}

TEST_CASE("majority classifier matches the hand-computed report") {
  std::vector<std::size_t> labels(20, 0);
  for (std::size_t i : {3u, 8u, 12u, 19u}) labels[i] = 1;
  const auto report = cross_validate(labelled(labels, 2), majority_of, 10, 0.25, 5);
  CHECK(report.rounds == 10);
  CHECK(report.confusion == Confusion{{40, 0}, {10, 0}});
  for (const auto& round : report.round_confusions) CHECK(round == Confusion{{4, 0}, {1, 0}});
  CHECK(std::abs(report.per_class[0].precision - 0.8) < 1e-12);
  CHECK(report.per_class[0].recall == 1.0);
  CHECK(std::abs(report.per_class[0].f1 - 16.0 / 18.0) < 1e-12);
  CHECK(report.per_class[1].f1 == 0.0);
  CHECK(std::abs(report.weighted.precision - 0.64) < 1e-12);
  CHECK(std::abs(report.weighted.recall - 0.8) < 1e-12);
  CHECK(std::abs(report.weighted.f1 - 0.8 * 16.0 / 18.0) < 1e-12);
  CHECK(std::abs(report.macro.f1 - 8.0 / 18.0) < 1e-12);

  std::vector<std::size_t> skew(20, 0);
  skew[4] = skew[11] = 1;
  const auto r = cross_validate(labelled(skew, 2), majority_of, 10, 0.1, 1);
  CHECK(r.per_class[0].recall == 1.0);
}

TEST_CASE("cross_validate determinism, confusion supports and errors") {
  SplitMix rng(40);
  std::vector<std::size_t> labels;
  for (int i = 0; i < 90; ++i) labels.push_back(rng.below(3));
  const auto data = labelled(labels, 3);
  const auto a = cross_validate(data, oracle_trainer(labels), 10, 0.1, 7, 1);
  const auto b = cross_validate(data, oracle_trainer(labels), 10, 0.1, 7, 4);
  CHECK(a.to_json().dump() == b.to_json().dump());
  CHECK(a.weighted.f1 == 1.0);
  for (const auto& round : a.round_confusions) {
    std::size_t total = 0;
    for (const auto& row : round) total += std::accumulate(row.begin(), row.end(), std::size_t{0});
    CHECK(total == 9);
  }
  CHECK(a.to_json().at("schema_version") == 1);

  std::vector<std::size_t> lonely(10, 0);
  lonely[3] = 1;
  CHECK(code_of([&] { cross_validate(labelled(lonely, 2), majority_of); }) == ErrorCode::ClassTooSmall);
  CHECK(code_of([&] { cross_validate(data, majority_of, 10, 1.5); }) == ErrorCode::InvalidFraction);
}

}  // TEST_SUITE
