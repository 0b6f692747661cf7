#include <doctest.h>

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "pomdebt/readiness.hpp"
#include "pomdebt/record.hpp"
#include "support.hpp"

using namespace pomdebt;

namespace {

std::string cli(const std::string& args) {
  return fmt::format("\"{}\" {}", test::cli_binary().string(), args);
}

std::string quoted(const std::filesystem::path& p) { return "\"" + p.string() + "\""; }

std::vector<SatdRecord> reload(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return read_records(in);
}

}  // namespace

TEST_SUITE("cli-report") {

TEST_CASE("usage errors exit 2") {
  CHECK(test::run(cli("frobnicate 2>/dev/null")).status == 2);
  CHECK(test::run(cli("detect --nope 2>/dev/null")).status == 2);
  CHECK(test::run(cli("2>/dev/null")).status == 2);
  CHECK(test::run(cli("train --in x.jsonl 2>/dev/null")).status == 2);
  CHECK(test::run(cli("--help >/dev/null")).status == 0);
}

TEST_CASE("scan, detect and report over the small corpus") {
  const auto dir = test::scratch_dir("cli-scan");
  const auto corpus = test::fixtures() / "corpus_small";

  const auto detect = test::run(cli("detect --root " + quoted(corpus) + " --out " + quoted(dir / "satd.jsonl")));
  CHECK(detect.status == 0);
  CHECK(detect.out.find("10") != std::string::npos);
  const auto satd = reload(dir / "satd.jsonl");
  CHECK(satd.size() == 4);
  for (const auto& r : satd) CHECK(r.detection.is_satd);

  const auto json = test::run(cli("detect --format json --root " + quoted(corpus) + " --out " + quoted(dir / "b.jsonl")));
  const auto summary = nlohmann::json::parse(json.out);
  CHECK(summary.at("comments") == 10);
  CHECK(summary.at("satd_comments") == 4);

  CHECK(test::run(cli("scan --root " + quoted(corpus) + " --out " + quoted(dir / "comments.jsonl") + " 2>/dev/null")).status == 0);
  const auto comments = reload(dir / "comments.jsonl");
  CHECK(comments.size() == 10);
  CHECK(test::run(cli("detect --in " + quoted(dir / "comments.jsonl") + " --out " + quoted(dir / "again.jsonl"))).status == 0);
  CHECK(reload(dir / "again.jsonl") == satd);

  const auto coded = test::fixtures() / "coded10.jsonl";
  CHECK(test::run(cli("report --in " + quoted(coded) + " --out " + quoted(dir / "report") + " --top 3")).status == 0);
  for (const char* name : {"locations.md", "reasons.md", "purposes.md", "location_reason.csv", "summary.md"}) {
    CAPTURE(name);
    CHECK(std::filesystem::exists(dir / "report" / name));
  }
  const auto table = test::read_file(dir / "report/location_reason.csv");
  CHECK(table.find("Plugin configuration,2,0,0,0,1,0,1,0,0,4") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("readiness over recorded payloads") {
  const auto dir = test::scratch_dir("cli-ready");
  const auto base = test::fixtures() / "readiness";
  const auto args = "readiness --in " + quoted(base / "records.jsonl") + " --fixtures " + quoted(base / "forge") +
                    " --drafts " + quoted(dir / "drafts");
  const auto a = test::run(cli(args + " --threads 1 2>/dev/null"));
  const auto b = test::run(cli(args + " --threads 3 2>/dev/null"));
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  std::istringstream in(a.out);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    CHECK_NOTHROW(verdict_from_json(nlohmann::json::parse(line)));
    ++n;
  }
  CHECK(n == 10);
  CHECK(test::read_file(dir / "drafts/r08.md") == test::read_file(base / "golden/r08.md"));
  CHECK(test::read_file(dir / "drafts/r10.md") == test::read_file(base / "golden/r10.md"));
  CHECK_FALSE(std::filesystem::exists(dir / "drafts/r02.md"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("train, classify and eval on a synthetic corpus") {
  const auto dir = test::scratch_dir("cli-train");
  std::ofstream(dir / "coded.jsonl", std::ios::binary) << [] {
    std::ostringstream out;
    write_jsonl(out, test::synthetic_corpus(120, 3));
    return out.str();
  }();
  const auto coded = quoted(dir / "coded.jsonl");
  CHECK(test::run(cli("train --in " + coded + " --model " + quoted(dir / "m.json") +
                      " --algorithm nb --task purpose")).status == 0);
  CHECK(test::run(cli("classify --model " + quoted(dir / "m.json") + " --in " + coded + " --out " +
                      quoted(dir / "pred.jsonl"))).status == 0);
  const auto predicted = reload(dir / "pred.jsonl");
  REQUIRE(predicted.size() == 120);
  CHECK(predicted[0].predicted_purpose.has_value());
  CHECK_FALSE(predicted[0].predicted_reason.has_value());

  const auto eval = test::run(cli("eval --in " + coded + " --rounds 2 --budget 2 --seed 3 --format csv"));
  CHECK(eval.status == 0);
  CHECK(eval.out.rfind("Measure,Category,", 0) == 0);
  CHECK(eval.out.find("F1-score,Avg. (weighted)") != std::string::npos);

  CHECK(test::run(cli("classify --model " + quoted(dir / "missing.json") + " --in " + coded + " 2>/dev/null")).status == 2);
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
