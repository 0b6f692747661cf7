#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "pomdebt/error.hpp"
#include "pomdebt/forge.hpp"
#include "pomdebt/random.hpp"
#include "pomdebt/readiness.hpp"
#include "support.hpp"

using namespace pomdebt;

namespace {

class MapTransport final : public HttpTransport {
 public:
  std::map<std::string, HttpResponse> responses;
  std::vector<std::string> requested;

  HttpResponse get(const std::string& url) override {
    requested.push_back(url);
    auto it = responses.find(url);
    if (it == responses.end()) throw Error(ErrorCode::FetchError, "offline: " + url);
    return it->second;
  }
};

HttpResponse ok(const std::string& body) { return {200, {}, body, "2024-01-01T00:00:00Z"}; }

std::vector<SatdRecord> fixture_records() {
  std::ifstream in(test::fixtures() / "readiness/records.jsonl");
  return read_records(in);
}

std::map<std::string, std::pair<std::string, std::string>> expected_verdicts() {
  std::map<std::string, std::pair<std::string, std::string>> out;
  std::ifstream in(test::fixtures() / "readiness/expected.tsv");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string id, outcome, rule;
    ss >> id >> outcome >> rule;
    out[id] = {outcome, rule};
  }
  return out;
}

LinkEvidence bug(bool resolved, bool archived = false) {
  LinkEvidence e;
  e.link.kind = LinkKind::GitHubIssue;
  e.link.owner = "o";
  e.link.repo = "r";
  e.link.number = 1;
  e.type = LinkTargetType::BugReport;
  IssueStatus s;
  s.state = resolved ? "closed" : "open";
  s.repo = "o/r";
  s.repo_archived = archived;
  e.status = s;
  return e;
}

std::string verdicts_jsonl(const std::vector<ReadinessVerdict>& vs) {
  std::string out;
  for (const auto& v : vs) out += verdict_to_json(v).dump() + "\n";
  return out;
}

}  // namespace

TEST_SUITE("link-readiness") {

TEST_CASE("fixture path normalization") {
  const std::filesystem::path d = "/f";
  CHECK(fixture_path(d, "https://api.github.com/repos/a/b/issues/1") == "/f/api.github.com/repos/a/b/issues/1.json");
  CHECK(fixture_path(d, "https://issues.apache.org/jira/rest/api/2/issue/X-1?fields=status") ==
        "/f/issues.apache.org/jira/rest/api/2/issue/X-1.json");
  CHECK(fixture_path(d, "http://localhost:8080/") == "/f/localhost_8080/index.json");
  CHECK(fixture_path(d, "https://example.org/a/") == "/f/example.org/a.json");
}

TEST_CASE("fixture transport replays payloads") {
  FixtureTransport t(test::fixtures() / "readiness/forge");
  const auto r = t.get("https://api.github.com/repos/acme/widgets/issues/12");
  CHECK(r.status == 200);
  CHECK(r.headers.at("x-ratelimit-remaining") == "4999");
  CHECK(nlohmann::json::parse(r.body).at("state") == "open");
  CHECK(r.fetched_at == "2024-05-01T12:00:00Z");
  for (const char* url : {"https://api.github.com/repos/none/none", "https://issues.apache.org/jira/rest/api/2/issue/SUREFIRE-1588"}) {
    try {
      t.get(url);
      FAIL("expected FetchError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::FetchError);
    }
  }
}

TEST_CASE("fetch_issue_status normalizes GitHub and JIRA payloads") {
  FixtureTransport t(test::fixtures() / "readiness/forge");
  const auto gh = fetch_issue_status(extract_links("eclipse/xtext#1231").at(0), t);
  CHECK(gh.forge == Forge::GitHub);
  CHECK(gh.state == "closed");
  CHECK_FALSE(gh.exposes_resolution);
  CHECK_FALSE(gh.repo_archived);
  CHECK(gh.url == "https://github.com/eclipse/xtext/issues/1231");
  CHECK_FALSE(gh.fetched_at.empty());

  const auto jira = fetch_issue_status(extract_links("MJARSIGNER-53").at(0), t);
  CHECK(jira.forge == Forge::Jira);
  CHECK(jira.state == "resolved");
  CHECK(jira.resolution == "fixed");
  CHECK(jira.exposes_resolution);
  CHECK(jira.url == "https://issues.apache.org/jira/browse/MJARSIGNER-53");

  try {
    fetch_issue_status(extract_links("https://example.org/x").at(0), t);
    FAIL("expected UnsupportedForge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedForge);
  }
  try {
    fetch_issue_status(extract_links("acme/widgets#9999").at(0), t);
    FAIL("expected NotFound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotFound);
  }
}

TEST_CASE("JIRA base comes from the written URL, else the configuration") {
  MapTransport t;
  t.responses["https://jira.example.org/rest/api/2/issue/ABC-1?fields=status,resolution"] =
      ok(R"({"fields":{"status":{"name":"Open"},"resolution":null}})");
  t.responses["https://tracker.local/rest/api/2/issue/ABC-1?fields=status,resolution"] =
      ok(R"({"fields":{"status":{"name":"Closed"},"resolution":{"name":"Won't Fix"}}})");
  const auto a = fetch_issue_status(extract_links("https://jira.example.org/browse/ABC-1").at(0), t);
  CHECK(a.state == "open");
  CHECK_FALSE(a.resolution.has_value());
  ForgeConfig cfg;
  cfg.jira_base = "https://tracker.local/";
  const auto b = fetch_issue_status(extract_links("ABC-1").at(0), t, cfg);
  CHECK(b.resolution == "won't fix");
  CHECK_FALSE(is_resolved_fixed(b));
}

TEST_CASE("HTTP status mapping") {
  MapTransport t;
  const std::string base = "https://api.github.com/repos/o/r/issues/";
  t.responses[base + "1"] = {429, {{"retry-after", "30"}}, "", ""};
  t.responses[base + "2"] = {403, {{"x-ratelimit-remaining", "0"}}, "", ""};
  t.responses[base + "3"] = {403, {{"x-ratelimit-remaining", "12"}}, "", ""};
  t.responses[base + "4"] = {500, {}, "", ""};
  t.responses[base + "5"] = {410, {}, "", ""};
  t.responses[base + "6"] = ok("not json");
  auto ref = [](int n) { return extract_links("o/r#" + std::to_string(n)).at(0); };
  try {
    fetch_issue_status(ref(1), t);
    FAIL("expected RateLimited");
  } catch (const RateLimitedError& e) {
    CHECK(e.code() == ErrorCode::RateLimited);
    CHECK(e.retry_after() == 30.0);
  }
  CHECK_THROWS_AS(fetch_issue_status(ref(2), t), RateLimitedError);
  for (int n : {3, 4, 6, 7}) {
    try {
      fetch_issue_status(ref(n), t);
      FAIL("expected FetchError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::FetchError);
    }
  }
  try {
    fetch_issue_status(ref(5), t);
    FAIL("expected NotFound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotFound);
  }
}

TEST_CASE("live options read tokens from the environment") {
  ::setenv("GITHUB_TOKEN", "gh-secret", 1);
  ::setenv("JIRA_TOKEN", "jira-secret", 1);
  const auto o = LiveOptions::from_environment();
  CHECK(o.github_token == "gh-secret");
  CHECK(o.jira_token == "jira-secret");
  ::unsetenv("GITHUB_TOKEN");
  ::unsetenv("JIRA_TOKEN");
  CHECK(LiveOptions::from_environment().github_token.empty());
}

TEST_CASE("resolution predicate") {
  IssueStatus s;
  for (const char* state : {"resolved", "Closed", "VERIFIED", "completed"}) {
    s.state = state;
    CHECK(is_resolved_fixed(s));
  }
  s.state = "open";
  CHECK_FALSE(is_resolved_fixed(s));
  s.state = "resolved";
  s.exposes_resolution = true;
  CHECK_FALSE(is_resolved_fixed(s));
  s.resolution = "Fixed";
  CHECK(is_resolved_fixed(s));
  s.resolution = "duplicate";
  CHECK_FALSE(is_resolved_fixed(s));
}

TEST_CASE("fixture suite yields the hand-assigned verdicts") {
  FixtureTransport t(test::fixtures() / "readiness/forge");
  const auto records = fixture_records();
  const auto expected = expected_verdicts();
  REQUIRE(records.size() == 10);
  REQUIRE(expected.size() == 10);
  const auto verdicts = assess_records(records, t, {}, 1);
  for (const auto& v : verdicts) {
    CAPTURE(v.record_id);
    const auto& [outcome, rule] = expected.at(v.record_id);
    CHECK(to_string(v.outcome) == outcome);
    CHECK((v.rule ? std::string(to_string(*v.rule)) : std::string("-")) == rule);
  }
  CHECK(verdicts_jsonl(verdicts) == verdicts_jsonl(assess_records(records, t, {}, 4)));

  const auto& error_case = verdicts[8];
  REQUIRE(error_case.evidence.size() == 1);
  CHECK(error_case.evidence[0].error.rfind("FetchError", 0) == 0);
  CHECK(verdicts[5].evidence[0].type == LinkTargetType::NotFound404);
  CHECK(verdicts[9].evidence.size() == 4);
  CHECK(verdicts[9].evidence[3].type == LinkTargetType::StackOverflow);
}

TEST_CASE("exclusion precedence") {
  SatdRecord r;
  r.id = "x";
  for (int mask = 0; mask < 16; ++mask) {
    const bool origin_archived = mask & 1, issue_archived = mask & 2, mirror = mask & 4, xref = mask & 8;
    ReadinessEvidence ev;
    ev.links = {bug(true, issue_archived)};
    ev.origin = RepoStatus{"a/b", origin_archived, mirror, ""};
    r.cross_reference = xref;
    const auto v = assess_readiness(r, ev);
    CAPTURE(mask);
    if (mask == 0) {
      CHECK(v.outcome == Outcome::Ready);
      continue;
    }
    CHECK(v.outcome == Outcome::Excluded);
    const auto expected = origin_archived  ? ExclusionRule::I
                          : issue_archived ? ExclusionRule::II
                          : mirror         ? ExclusionRule::III
                                           : ExclusionRule::IV;
    CHECK(v.rule == expected);
  }
}

TEST_CASE("no bug report means no actionable link, whatever else holds") {
  SatdRecord r;
  r.cross_reference = true;
  ReadinessEvidence ev;
  ev.origin = RepoStatus{"a/b", true, true, ""};
  CHECK(assess_readiness(r, ev).outcome == Outcome::NoActionableLink);
  auto pr = bug(true);
  pr.type = LinkTargetType::PullRequest;
  ev.links = {pr};
  CHECK(assess_readiness(r, ev).outcome == Outcome::NoActionableLink);
}

TEST_CASE("adding a resolved issue never moves away from ready") {
  SplitMix rng(13);
  SatdRecord r;
  for (int t = 0; t < 500; ++t) {
    ReadinessEvidence ev;
    const auto n = rng.below(4);
    for (std::uint64_t k = 0; k < n; ++k) {
      auto e = bug(rng.below(2), rng.below(6) == 0);
      if (rng.below(4) == 0) {
        e.status.reset();
        e.error = "FetchError: offline";
      }
      ev.links.push_back(e);
    }
    if (rng.below(3) == 0) ev.origin = RepoStatus{"a/b", rng.below(5) == 0, rng.below(5) == 0, ""};
    r.cross_reference = rng.below(6) == 0;
    const auto before = assess_readiness(r, ev);
    ev.links.insert(ev.links.begin() + static_cast<std::ptrdiff_t>(rng.below(ev.links.size() + 1)), bug(true));
    const auto after = assess_readiness(r, ev);
    if (after.outcome != Outcome::Excluded) CHECK(after.outcome == Outcome::Ready);
    if (before.outcome == Outcome::Ready) CHECK(after.outcome == Outcome::Ready);
  }
}

TEST_CASE("remediation drafts") {
  FixtureTransport t(test::fixtures() / "readiness/forge");
  const auto records = fixture_records();
  const auto verdicts = assess_records(records, t, {});
  CHECK(draft_remediation_report(records[7], verdicts[7]) ==
        test::read_file(test::fixtures() / "readiness/golden/r08.md"));
  const auto multi = draft_remediation_report(records[9], verdicts[9]);
  CHECK(multi == test::read_file(test::fixtures() / "readiness/golden/r10.md"));
  const auto first = multi.find("MSHADE-148");
  const auto second = multi.find("MJARSIGNER-53");
  CHECK(first < second);
  CHECK(multi.find("acme/widgets#12") == multi.rfind("acme/widgets#12"));
  try {
    draft_remediation_report(records[1], verdicts[1]);
    FAIL("expected NotReady");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotReady);
  }
}

TEST_CASE("verdict JSON round trip") {
  FixtureTransport t(test::fixtures() / "readiness/forge");
  const auto records = fixture_records();
  for (const auto& v : assess_records(records, t, {})) {
    const auto j = verdict_to_json(v);
    CHECK(j.at("schema_version") == 1);
    const auto back = verdict_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back == v);
  }
  CHECK_THROWS_AS(verdict_from_json(nlohmann::json{{"schema_version", 2}}), Error);
}

}  // TEST_SUITE
