#include <doctest.h>

#include <algorithm>
#include <cctype>
#include <sstream>

#include "pomdebt/corpus.hpp"
#include "pomdebt/error.hpp"
#include "pomdebt/keywords.hpp"
#include "pomdebt/random.hpp"
#include "support.hpp"

using namespace pomdebt;
namespace fs = std::filesystem;

namespace {

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string jsonl(const CorpusScan& scan) {
  std::ostringstream out;
  write_jsonl(out, scan.records);
  return out.str();
}

}  // namespace

TEST_SUITE("satd-detect") {

TEST_CASE("default keyword set") {
  const auto ks = load_keyword_set(std::nullopt);
  CHECK(ks.source_tag == "default-v1");
  for (const char* p : {"todo", "fixme", "xxx", "hack", "workaround", "temporary", "hack alert",
                        "broken", "remove once"}) {
    CAPTURE(p);
    CHECK(ks.contains(p));
  }
}

TEST_CASE("keyword file parsing") {
  const auto dup = parse_keyword_set("todo\ntodo\n", "f");
  REQUIRE(dup.patterns.size() == 1);
  CHECK(dup.patterns[0].phrase == "todo");
  CHECK(dup.patterns[0].mode == MatchMode::WordBoundary);

  const auto mixed = parse_keyword_set("# header\n\n  TODO \n!Hack\nRemove   Once\n", "f");
  REQUIRE(mixed.patterns.size() == 3);
  CHECK(mixed.patterns[1].phrase == "hack");
  CHECK(mixed.patterns[1].mode == MatchMode::Substring);
  CHECK(mixed.patterns[2].phrase == "remove once");

  try {
    parse_keyword_set("", "f");
    FAIL("expected EmptyKeywordSet");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyKeywordSet);
  }
  CHECK_THROWS_AS(parse_keyword_set("# only a comment\n", "f"), Error);
  try {
    parse_keyword_set("todo\nbad-->\n", "f");
    FAIL("expected MalformedKeywordFile");
  } catch (const LineError& e) {
    CHECK(e.code() == ErrorCode::MalformedKeywordFile);
    CHECK(e.line() == 2);
  }
}

TEST_CASE("keyword file from disk") {
  const auto dir = test::scratch_dir("keywords");
  test::write_file(dir / "k.txt", "kludge\n");
  const auto ks = load_keyword_set(dir / "k.txt");
  CHECK(ks.source_tag == (dir / "k.txt").string());
  CHECK(detect_satd("a Kludge here", ks).is_satd);
  CHECK_THROWS_AS(load_keyword_set(dir / "missing.txt"), Error);
  fs::remove_all(dir);
}

TEST_CASE("detect_satd examples") {
  const auto ks = default_keyword_set();
  const auto a = detect_satd("XXX: workaround for an issue with maven-shade-plugin", ks);
  CHECK(a.is_satd);
  CHECK(contains(a.matched, "xxx"));
  CHECK(contains(a.matched, "workaround"));

  const auto b = detect_satd("Licensed to the Apache Software Foundation", ks);
  CHECK_FALSE(b.is_satd);
  CHECK(b.matched.empty());

  const auto c = detect_satd("TODO remove exclusions after we fix netty module", ks);
  CHECK(c.is_satd);
  CHECK(contains(c.matched, "todo"));
}

TEST_CASE("word boundary versus substring") {
  const auto ks = default_keyword_set();
  CHECK_FALSE(detect_satd("shackle the version", ks).is_satd);
  CHECK(detect_satd("a hack.", ks).is_satd);
  CHECK(detect_satd("hack", ks).is_satd);
  CHECK(detect_satd("remove\n   once released", ks).matched == std::vector<std::string>{"remove once"});
  const auto sub = parse_keyword_set("!hack\n", "f");
  CHECK(detect_satd("shackle", sub).is_satd);
}

TEST_CASE("matched follows keyword order") {
  const auto ks = parse_keyword_set("fixme\ntodo\n", "f");
  CHECK(detect_satd("todo then fixme", ks).matched == std::vector<std::string>{"fixme", "todo"});
}

TEST_CASE("case invariance and monotonicity") {
  const auto ks = default_keyword_set();
  SplitMix rng(3);
  const std::vector<std::string> words = {"ToDo", "HACK", "fine", "Work", "around", "workAround",
                                          "x", "XXX", "temporary", "Broken", "shackle", "-", ":"};
  auto bigger = ks;
  bigger.patterns.push_back({"around", MatchMode::WordBoundary});
  for (int i = 0; i < 500; ++i) {
    std::string text;
    const auto n = rng.below(6);
    for (std::uint64_t k = 0; k < n; ++k) text += words[rng.below(words.size())] + " ";
    CAPTURE(text);
    const auto d = detect_satd(text, ks);
    CHECK(d == detect_satd(lower(text), ks));
    CHECK(d.is_satd == !d.matched.empty());
    CHECK(detect_satd(text, bigger).matched.size() >= d.matched.size());
  }
}

TEST_CASE("scan_corpus on the small fixture corpus") {
  const auto scan = scan_corpus(test::fixtures() / "corpus_small", default_keyword_set());
  CHECK(scan.n_repos == 2);
  CHECK(scan.n_build_files == 3);
  CHECK(scan.n_comments == 10);
  CHECK(scan.n_satd == 4);
  CHECK(scan.records.size() == scan.n_satd);
  CHECK(scan.skipped.empty());
  REQUIRE(scan.records.size() == 4);
  CHECK(scan.records[0].location == LocationCategory::ExternalDependenciesConfiguration);
  CHECK(scan.records[1].location == LocationCategory::PluginConfiguration);
  CHECK(scan.records[3].location == LocationCategory::RepositoryConfiguration);
}

TEST_CASE("malformed file is skipped, other counts unaffected") {
  const auto root = test::scratch_dir("malformed");
  fs::copy(test::fixtures() / "corpus_small", root, fs::copy_options::recursive);
  test::write_file(root / "gamma/pom.xml", "<project>\n  <!-- TODO -->\n  <build>\n</project>\n");
  const auto scan = scan_corpus(root, default_keyword_set());
  REQUIRE(scan.skipped.size() == 1);
  CHECK(scan.skipped[0].path == "gamma/pom.xml");
  CHECK(scan.n_comments == 10);
  CHECK(scan.n_satd == 4);
  CHECK(scan.n_build_files == 3);
  fs::remove_all(root);
}

TEST_CASE("empty and missing roots") {
  const auto root = test::scratch_dir("empty-root");
  const auto scan = scan_corpus(root, default_keyword_set());
  CHECK(scan.n_repos == 0);
  CHECK(scan.n_build_files == 0);
  CHECK(scan.n_comments == 0);
  CHECK(scan.n_satd == 0);
  try {
    scan_corpus(root / "nope", default_keyword_set());
    FAIL("expected RootNotFound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RootNotFound);
  }
  fs::remove_all(root);
}

TEST_CASE("scan output is deterministic across thread counts") {
  const auto root = test::fixtures() / "detection60";
  const auto one = jsonl(scan_corpus(root, default_keyword_set(), {}, 1));
  CHECK(one == jsonl(scan_corpus(root, default_keyword_set(), {}, 1)));
  CHECK(one == jsonl(scan_corpus(root, default_keyword_set(), {}, 4)));
}

TEST_CASE("detect_in_records matches scan_corpus") {
  const auto root = test::fixtures() / "corpus_small";
  const auto comments = scan_comments(root);
  std::vector<SatdRecord> records;
  for (const auto& f : comments.files) {
    for (const auto& c : f.comments) {
      SatdRecord r;
      r.comment = c;
      r.location = classify_location(c);
      records.push_back(r);
    }
  }
  make_record_ids(records);
  const auto a = detect_in_records(records, default_keyword_set());
  const auto b = scan_corpus(root, default_keyword_set());
  CHECK(a.n_comments == b.n_comments);
  CHECK(a.n_satd == b.n_satd);
  CHECK(a.n_repos == b.n_repos);
  CHECK(a.n_build_files == b.n_build_files);
}

TEST_CASE("corpus summary") {
  const auto scan = scan_corpus(test::fixtures() / "corpus_small", default_keyword_set());
  const auto text = format_corpus_summary(scan);
  CHECK(text.find("10") != std::string::npos);
  CHECK(text.find("4") != std::string::npos);
}

}  // TEST_SUITE
