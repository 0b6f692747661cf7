#include <doctest.h>

#include <sstream>

#include "pomdebt/corpus.hpp"
#include "pomdebt/error.hpp"
#include "pomdebt/record.hpp"
#include "support.hpp"

using namespace pomdebt;

namespace {

std::vector<SatdRecord> parse(const std::string& text) {
  std::istringstream in(text);
  return read_records(in);
}

std::size_t failing_line(const std::string& text, ErrorCode code) {
  try {
    parse(text);
  } catch (const LineError& e) {
    CHECK(e.code() == code);
    return e.line();
  }
  FAIL("expected a LineError");
  return 0;
}

}  // namespace

TEST_SUITE("cli-report") {

TEST_CASE("ingest coded corpus") {
  const auto dir = test::scratch_dir("ingest");
  test::write_file(dir / "empty.jsonl", "");
  CHECK(ingest_coded_corpus(dir / "empty.jsonl").empty());
  CHECK_THROWS_AS(ingest_coded_corpus(dir / "missing.jsonl"), Error);
  std::filesystem::remove_all(dir);

  const auto ok = parse(
      R"({"repo":"r","path":"pom.xml","line_start":3,"line_end":3,"text":"x","reason":"Limitation","reason_subcategory":"External library limitation","purpose":"Document workaround"})"
      "\n");
  REQUIRE(ok.size() == 1);
  CHECK(ok[0].reason->category == ReasonCategory::Limitation);
  CHECK(ok[0].reason->subcategory == ReasonSubcategory::ExternalLibraryLimitation);
  CHECK(ok[0].id == "r/pom.xml:3");

  const std::string head = R"({"repo":"r","path":"pom.xml","line_start":1,"line_end":1,"text":"x")";
  CHECK(failing_line(head + "}\n" + head + R"(,"reason":"Laziness"})" + "\n", ErrorCode::UnknownCategory) == 2);
  CHECK(failing_line("\n" + head + R"(,"reason":"Dependency","reason_subcategory":"Licensing"})",
                     ErrorCode::UnknownCategory) == 2);
  CHECK(failing_line("{not json", ErrorCode::SchemaError) == 1);
  CHECK(failing_line(R"({"repo":"r"})", ErrorCode::SchemaError) == 1);
  CHECK(failing_line(head + R"(,"schema_version":9})", ErrorCode::SchemaError) == 1);
  CHECK(failing_line(head + R"(,"location":"Basement"})", ErrorCode::UnknownCategory) == 1);
}

TEST_CASE("record JSONL round trip") {
  auto records = scan_corpus(test::fixtures() / "corpus_small", default_keyword_set()).records;
  records[0].reason = make_reason(ReasonCategory::Dependency, ReasonSubcategory::StaleDependency);
  records[0].purpose = PurposeLabel::DocumentForLaterFix;
  records[1].predicted_reason = Prediction{{Task::Reason, 2}, {0.25, 0.25, 0.5}};
  records[1].cross_reference = true;
  records[1].origin = "acme/widgets";
  records[2].links = extract_links(records[2].comment.text);
  for (auto& l : records[2].links) l.comment_ref = records[2].id;
  std::ostringstream out;
  write_jsonl(out, records);
  const auto back = parse(out.str());
  CHECK(back == records);
  std::ostringstream again;
  write_jsonl(again, back);
  CHECK(again.str() == out.str());
}

TEST_CASE("record ids are unique") {
  std::vector<SatdRecord> rs(3);
  for (auto& r : rs) {
    r.comment.repo = "a";
    r.comment.path = "pom.xml";
    r.comment.line_start = 4;
  }
  make_record_ids(rs);
  CHECK(rs[0].id == "a/pom.xml:4");
  CHECK(rs[1].id == "a/pom.xml:4#2");
  CHECK(rs[2].id == "a/pom.xml:4#3");
}

}  // TEST_SUITE
