#include <doctest.h>

#include "pomdebt/error.hpp"
#include "pomdebt/links.hpp"
#include "pomdebt/random.hpp"

using namespace pomdebt;

namespace {

LinkTargetType type_of(int status, const std::string& host, const std::string& path) {
  return classify_link_target(LinkRef{}, LinkProbe{status, host, path});
}

}  // namespace

TEST_SUITE("link-readiness") {

TEST_CASE("extract_links examples") {
  const auto gh = extract_links("workaround https://github.com/eclipse/xtext/issues/1231");
  REQUIRE(gh.size() == 1);
  CHECK(gh[0].kind == LinkKind::GitHubIssue);
  CHECK(gh[0].owner == "eclipse");
  CHECK(gh[0].repo == "xtext");
  CHECK(gh[0].number == 1231);
  CHECK(gh[0].display() == "eclipse/xtext#1231");

  const auto jira = extract_links("Java 9 workaround for missing bval-jsr dependency declaration BVAL-155");
  REQUIRE(jira.size() == 1);
  CHECK(jira[0].kind == LinkKind::JiraKey);
  CHECK(jira[0].project == "BVAL");
  CHECK(jira[0].number == 155);
  CHECK(jira[0].raw == "BVAL-155");

  CHECK(extract_links("no links here").empty());
}

TEST_CASE("extract_links kinds and order") {
  const auto links = extract_links(
      "see eclipse/xtext#12, https://issues.apache.org/jira/browse/MJARSIGNER-53 and "
      "https://stackoverflow.com/questions/1/x then MNG-1 and MNG-1 again; utf-8 and log4j-2 are not keys");
  REQUIRE(links.size() == 5);
  CHECK(links[0].kind == LinkKind::GitHubIssue);
  CHECK(links[0].number == 12);
  CHECK(links[1].kind == LinkKind::JiraKey);
  CHECK(links[1].display() == "MJARSIGNER-53");
  CHECK(links[1].url == "https://issues.apache.org/jira/browse/MJARSIGNER-53");
  CHECK(links[2].kind == LinkKind::Url);
  CHECK(links[3].display() == "MNG-1");
  CHECK(links[4].display() == "MNG-1");
  for (std::size_t i = 1; i < links.size(); ++i) CHECK(links[i - 1].offset < links[i].offset);
}

TEST_CASE("link spans reconstruct the input") {
  SplitMix rng(6);
  const std::vector<std::string> parts = {"see ",      "https://github.com/a/b/issues/3", " ", "MNG-42",
                                          ",",         "a/b#7",   "http://x.org/p?q=1", "(", ")",
                                          "text",      "BVAL-",   "-155",  "\n", "www.example.com/x"};
  for (int t = 0; t < 1000; ++t) {
    std::string text;
    const auto n = rng.below(10);
    for (std::uint64_t k = 0; k < n; ++k) text += parts[rng.below(parts.size())];
    CAPTURE(text);
    const auto links = extract_links(text);
    std::string rebuilt;
    std::size_t at = 0;
    for (const auto& l : links) {
      REQUIRE(l.offset >= at);
      CHECK(text.compare(l.offset, l.raw.size(), l.raw) == 0);
      rebuilt += text.substr(at, l.offset - at) + l.raw;
      at = l.offset + l.raw.size();
    }
    rebuilt += text.substr(at);
    CHECK(rebuilt == text);
    for (const auto& l : links) {
      if (l.kind == LinkKind::GitHubIssue) CHECK(l.number >= 1);
      if (l.kind == LinkKind::JiraKey) {
        CHECK(l.project.size() >= 2);
        CHECK((l.project[0] >= 'A' && l.project[0] <= 'Z'));
      }
    }
  }
}

TEST_CASE("classify_link_target rule table") {
  CHECK(type_of(200, "issues.apache.org", "/jira/browse/MJARSIGNER-53") == LinkTargetType::BugReport);
  CHECK(type_of(404, "github.com", "/a/b/issues/1") == LinkTargetType::NotFound404);
  CHECK(type_of(410, "x.org", "/") == LinkTargetType::NotFound404);
  CHECK(type_of(200, "stackoverflow.com", "/questions/123/title") == LinkTargetType::StackOverflow);
  CHECK(type_of(200, "github.com", "/a/b/pull/9") == LinkTargetType::PullRequest);
  CHECK(type_of(200, "bugs.eclipse.org", "/bugs/show_bug.cgi") == LinkTargetType::BugReport);
  CHECK(type_of(200, "maven.apache.org", "/guides/mini/guide-multiple-modules.html") ==
        LinkTargetType::TutorialOrArticle);
  CHECK(type_of(200, "blog.example.com", "/2020/01/post") == LinkTargetType::BlogPost);
  CHECK(type_of(200, "lists.apache.org", "/thread/abc") == LinkTargetType::ForumThread);
  CHECK(type_of(200, "github.com", "/eclipse/xtext") == LinkTargetType::SoftwareHomepage);
  CHECK(type_of(200, "www.example.org", "/") == LinkTargetType::SoftwareHomepage);
  CHECK(type_of(200, "example.org", "/some/odd/page") == LinkTargetType::Unknown);
  try {
    classify_link_target(LinkRef{}, std::nullopt);
    FAIL("expected MissingProbe");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingProbe);
  }
  for (auto t : {LinkTargetType::BugReport, LinkTargetType::NotFound404, LinkTargetType::Unknown,
                 LinkTargetType::BlogPost}) {
    CHECK(parse_link_target(display_name(t)) == t);
  }
}

TEST_CASE("static probe") {
  const auto p = static_probe("https://WWW.Example.org/a/b?x=1#frag");
  CHECK(p.http_status == 0);
  CHECK(p.final_host == "example.org");
  CHECK(p.final_path == "/a/b");
}

}  // TEST_SUITE
