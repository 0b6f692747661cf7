#pragma once

#include <cstddef>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace pomdebt {

enum class LinkKind { Url, GitHubIssue, JiraKey };

std::string_view to_string(LinkKind kind) noexcept;

/// A hyperlink or issue reference mined from a comment. `offset` is the byte
/// position of `raw` in the comment text.
struct LinkRef {
  LinkKind kind = LinkKind::Url;
  std::string raw;
  std::size_t offset = 0;
  std::string comment_ref;

  std::string url;  // set when the reference was written as a URL
  // GitHubIssue
  std::string owner;
  std::string repo;
  // JiraKey: project; GitHubIssue and JiraKey: number
  std::string project;
  unsigned long number = 0;

  /// "owner/repo#N", "PROJ-N" or the URL.
  std::string display() const;

  friend bool operator==(const LinkRef&, const LinkRef&) = default;
};

/// The hyperlink pattern shared by link mining and text preprocessing.
const std::regex& hyperlink_regex();

/// URLs, owner/repo#N shorthands and JIRA keys, in order of appearance.
/// Spans never overlap; GitHub issue and JIRA browse URLs are parsed into
/// their structured kinds.
std::vector<LinkRef> extract_links(std::string_view text);

enum class LinkTargetType {
  BugReport,
  NotFound404,
  TutorialOrArticle,
  StackOverflow,
  PullRequest,
  SoftwareHomepage,
  ForumThread,
  BlogPost,
  Unknown,
};

std::string_view display_name(LinkTargetType type) noexcept;
std::optional<LinkTargetType> parse_link_target(std::string_view name);

/// What a HEAD/GET of the link returned, after redirects. http_status 0 means
/// the target was not contacted and only the URL itself is known.
struct LinkProbe {
  int http_status = 0;
  std::string final_host;
  std::string final_path;
};

/// Host/path of a URL, lowercased host, path including the leading '/'.
LinkProbe static_probe(std::string_view url);

/// Rule table over the probe; throws Error{MissingProbe} for an empty optional.
LinkTargetType classify_link_target(const LinkRef& ref, const std::optional<LinkProbe>& probe);

}  // namespace pomdebt
