#include "pomdebt/links.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <regex>

#include "pomdebt/error.hpp"

namespace pomdebt {
namespace {

// Hyperlink pattern used for both link mining and text preprocessing.
const std::regex& url_regex() {
  static const std::regex re(
      R"(https?:\/\/(www\.)?[-a-zA-Z0-9@:._\+~#=#]{2,256}\.[a-z]{2,6}\b([-a-zA-Z0-9@:._\+~#?&\/=]*))");
  return re;
}

// Uppercase prefixes that look like issue keys but name standards or encodings.
constexpr std::array<std::string_view, 10> kKeyDenyList = {
    "UTF", "ISO", "SHA", "MD", "RFC", "JSR", "CVE", "CP", "IEC", "HTTP"};

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string_view> path_segments(std::string_view path) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;
    const auto j = path.find('/', i);
    const auto end = j == std::string_view::npos ? path.size() : j;
    if (end > i) out.push_back(path.substr(i, end - i));
    i = end;
  }
  return out;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), is_digit);
}

// Parses "KEY-123" at the start of `s`. Returns the consumed length (0 if none).
std::size_t parse_jira_key(std::string_view s, std::string& project, unsigned long& number) {
  if (s.empty() || !is_upper(s[0])) return 0;
  std::size_t i = 1;
  while (i < s.size() && (is_upper(s[i]) || is_digit(s[i]))) ++i;
  if (i < 2 || i >= s.size() || s[i] != '-') return 0;
  std::size_t j = i + 1;
  while (j < s.size() && is_digit(s[j])) ++j;
  if (j == i + 1) return 0;
  if (j < s.size() && is_alnum(s[j])) return 0;
  const auto digits = s.substr(i + 1, j - i - 1);
  if (digits.size() > 9) return 0;
  const auto key = s.substr(0, i);
  if (std::find(kKeyDenyList.begin(), kKeyDenyList.end(), key) != kKeyDenyList.end()) return 0;
  project = std::string(key);
  number = std::stoul(std::string(digits));
  return j;
}

void type_url(LinkRef& link) {
  const auto probe = static_probe(link.url);
  const auto segs = path_segments(probe.final_path);
  if (probe.final_host == "github.com" && segs.size() >= 4 && segs[2] == "issues" &&
      all_digits(segs[3]) && segs[3].size() <= 9 && std::stoul(std::string(segs[3])) >= 1) {
    link.kind = LinkKind::GitHubIssue;
    link.owner = std::string(segs[0]);
    link.repo = std::string(segs[1]);
    link.number = std::stoul(std::string(segs[3]));
    return;
  }
  for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
    if (segs[i] != "browse") continue;
    std::string project;
    unsigned long number = 0;
    if (parse_jira_key(segs[i + 1], project, number) == segs[i + 1].size()) {
      link.kind = LinkKind::JiraKey;
      link.project = project;
      link.number = number;
      return;
    }
  }
}

struct Candidate {
  std::size_t begin;
  std::size_t end;
  LinkRef ref;
};

// owner/repo#N and KEY-N references inside a URL-free stretch of text.
void scan_plain(std::string_view text, std::size_t base, std::vector<Candidate>& out) {
  std::size_t i = 0;
  while (i < text.size()) {
    const bool left_ok = i == 0 || !is_alnum(text[i - 1]);
    if (!left_ok || !is_alnum(text[i])) {
      ++i;
      continue;
    }
    // GitHub shorthand: owner/repo#N
    {
      std::size_t j = i;
      while (j < text.size() && (is_alnum(text[j]) || text[j] == '-')) ++j;
      const bool owner_ok = i == 0 || (text[i - 1] != '/' && text[i - 1] != '.');
      if (owner_ok && j < text.size() && text[j] == '/') {
        std::size_t k = j + 1;
        while (k < text.size() &&
               (is_alnum(text[k]) || text[k] == '.' || text[k] == '_' || text[k] == '-')) {
          ++k;
        }
        if (k > j + 1 && k < text.size() && text[k] == '#') {
          std::size_t m = k + 1;
          while (m < text.size() && is_digit(text[m])) ++m;
          const auto digits = text.substr(k + 1, m - k - 1);
          if (!digits.empty() && digits.size() <= 9 && (m == text.size() || !is_alnum(text[m]))) {
            const auto number = std::stoul(std::string(digits));
            if (number >= 1) {
              LinkRef ref;
              ref.kind = LinkKind::GitHubIssue;
              ref.owner = std::string(text.substr(i, j - i));
              ref.repo = std::string(text.substr(j + 1, k - j - 1));
              ref.number = number;
              ref.raw = std::string(text.substr(i, m - i));
              ref.offset = base + i;
              out.push_back({base + i, base + m, std::move(ref)});
              i = m;
              continue;
            }
          }
        }
      }
    }
    // JIRA key
    {
      std::string project;
      unsigned long number = 0;
      if (const auto n = parse_jira_key(text.substr(i), project, number); n > 0) {
        LinkRef ref;
        ref.kind = LinkKind::JiraKey;
        ref.project = project;
        ref.number = number;
        ref.raw = std::string(text.substr(i, n));
        ref.offset = base + i;
        out.push_back({base + i, base + i + n, std::move(ref)});
        i += n;
        continue;
      }
    }
    // Skip the rest of this word.
    while (i < text.size() && is_alnum(text[i])) ++i;
  }
}

bool host_is(std::string_view host, std::string_view domain) {
  return host == domain ||
         (host.size() > domain.size() && host.ends_with(domain) &&
          host[host.size() - domain.size() - 1] == '.');
}

bool contains(std::string_view hay, std::string_view needle) {
  return hay.find(needle) != std::string_view::npos;
}

struct TargetName {
  LinkTargetType type;
  std::string_view display;
};

constexpr std::array<TargetName, 9> kTargetNames = {{
    {LinkTargetType::BugReport, "bug report"},
    {LinkTargetType::NotFound404, "404"},
    {LinkTargetType::TutorialOrArticle, "tutorial or article"},
    {LinkTargetType::StackOverflow, "Stack Overflow"},
    {LinkTargetType::PullRequest, "pull request"},
    {LinkTargetType::SoftwareHomepage, "software homepage"},
    {LinkTargetType::ForumThread, "forum thread"},
    {LinkTargetType::BlogPost, "blog post"},
    {LinkTargetType::Unknown, "unknown"},
}};

}  // namespace

const std::regex& hyperlink_regex() { return url_regex(); }

std::string_view to_string(LinkKind kind) noexcept {
  switch (kind) {
    case LinkKind::Url: return "url";
    case LinkKind::GitHubIssue: return "github_issue";
    case LinkKind::JiraKey: return "jira_key";
  }
  return "url";
}

std::string LinkRef::display() const {
  switch (kind) {
    case LinkKind::GitHubIssue: return owner + "/" + repo + "#" + std::to_string(number);
    case LinkKind::JiraKey: return project + "-" + std::to_string(number);
    case LinkKind::Url: break;
  }
  return url.empty() ? raw : url;
}

std::vector<LinkRef> extract_links(std::string_view text) {
  std::vector<Candidate> found;
  const std::string subject(text);
  std::size_t cursor = 0;
  for (auto it = std::sregex_iterator(subject.begin(), subject.end(), url_regex());
       it != std::sregex_iterator(); ++it) {
    const auto begin = static_cast<std::size_t>(it->position());
    const auto end = begin + static_cast<std::size_t>(it->length());
    scan_plain(text.substr(cursor, begin - cursor), cursor, found);
    LinkRef ref;
    ref.kind = LinkKind::Url;
    ref.raw = it->str();
    ref.url = ref.raw;
    ref.offset = begin;
    type_url(ref);
    found.push_back({begin, end, std::move(ref)});
    cursor = end;
  }
  scan_plain(text.substr(cursor), cursor, found);

  std::stable_sort(found.begin(), found.end(),
                   [](const Candidate& a, const Candidate& b) { return a.begin < b.begin; });
  std::vector<LinkRef> out;
  std::size_t covered = 0;
  for (auto& c : found) {
    if (c.begin < covered) continue;
    covered = c.end;
    out.push_back(std::move(c.ref));
  }
  return out;
}

std::string_view display_name(LinkTargetType type) noexcept {
  for (const auto& t : kTargetNames) {
    if (t.type == type) return t.display;
  }
  return "unknown";
}

std::optional<LinkTargetType> parse_link_target(std::string_view name) {
  for (const auto& t : kTargetNames) {
    if (t.display == name) return t.type;
  }
  return std::nullopt;
}

LinkProbe static_probe(std::string_view url) {
  LinkProbe probe;
  auto rest = url;
  if (const auto scheme = rest.find("://"); scheme != std::string_view::npos) {
    rest.remove_prefix(scheme + 3);
  }
  const auto slash = rest.find_first_of("/?#");
  auto authority = rest.substr(0, slash);
  if (const auto at = authority.rfind('@'); at != std::string_view::npos) {
    authority.remove_prefix(at + 1);
  }
  if (const auto colon = authority.find(':'); colon != std::string_view::npos) {
    authority = authority.substr(0, colon);
  }
  probe.final_host = lower(authority);
  if (probe.final_host.starts_with("www.")) probe.final_host.erase(0, 4);
  if (slash != std::string_view::npos && rest[slash] == '/') {
    auto path = rest.substr(slash);
    path = path.substr(0, path.find_first_of("?#"));
    probe.final_path = std::string(path);
  } else {
    probe.final_path = "/";
  }
  return probe;
}

LinkTargetType classify_link_target(const LinkRef& ref, const std::optional<LinkProbe>& probe) {
  if (!probe) {
    throw Error(ErrorCode::MissingProbe, "no probe for link " + ref.display());
  }
  if (probe->http_status == 404 || probe->http_status == 410) return LinkTargetType::NotFound404;

  std::string host = lower(probe->final_host);
  if (host.starts_with("www.")) host.erase(0, 4);
  const std::string path = lower(probe->final_path);
  const auto segs = path_segments(path);

  // Issue trackers and code review.
  if (host_is(host, "github.com") || host_is(host, "gitlab.com") ||
      host_is(host, "bitbucket.org")) {
    if (segs.size() >= 4 && (segs[2] == "issues" || (segs[2] == "-" && segs[3] == "issues"))) {
      return LinkTargetType::BugReport;
    }
    if (segs.size() >= 4 && (segs[2] == "pull" || segs[2] == "pulls" ||
                             segs[2] == "pull-requests" ||
                             (segs[2] == "-" && segs[3] == "merge_requests"))) {
      return LinkTargetType::PullRequest;
    }
  }
  if (contains(path, "/browse/") || host.starts_with("issues.") || host.starts_with("jira.") ||
      host.starts_with("bugs.") || contains(host, "bugzilla") || contains(host, "youtrack") ||
      contains(path, "show_bug.cgi") || contains(path, "/jira/") || contains(path, "/issues/") ||
      contains(path, "/tracker/")) {
    return LinkTargetType::BugReport;
  }
  if (contains(host, "gerrit") || contains(path, "/pull/") || contains(path, "/merge_requests/")) {
    return LinkTargetType::PullRequest;
  }

  if (host_is(host, "stackoverflow.com") || host_is(host, "stackexchange.com") ||
      host_is(host, "serverfault.com") || host_is(host, "superuser.com")) {
    return LinkTargetType::StackOverflow;
  }

  if (contains(host, "blog") || host_is(host, "medium.com") || host_is(host, "dev.to") ||
      host_is(host, "wordpress.com") || contains(path, "/blog/") || contains(path, "/blogs/")) {
    return LinkTargetType::BlogPost;
  }

  if (contains(host, "forum") || contains(host, "discourse") || contains(host, "discuss") ||
      host_is(host, "groups.google.com") || host.starts_with("community.") ||
      host.starts_with("lists.") || host.starts_with("mail-archives.") ||
      host_is(host, "mail-archive.com") || host_is(host, "markmail.org") ||
      host_is(host, "nabble.com") || contains(path, "/forum") || contains(path, "/thread") ||
      contains(path, "/mailing-list") || contains(path, "/mod_mbox/")) {
    return LinkTargetType::ForumThread;
  }

  if (host.starts_with("docs.") || host.starts_with("wiki.") || host.starts_with("developer.") ||
      host_is(host, "baeldung.com") || host_is(host, "mkyong.com") ||
      contains(path, "/doc/") || contains(path, "/docs/") || contains(path, "/documentation") ||
      contains(path, "/guide") || contains(path, "/tutorial") || contains(path, "/howto") ||
      contains(path, "/wiki/") || contains(path, "/manual") || contains(path, "/reference") ||
      contains(path, "/article") || contains(path, "/faq") || contains(path, "usage.html") ||
      contains(path, "examples/")) {
    return LinkTargetType::TutorialOrArticle;
  }

  const bool github_repo_root = host_is(host, "github.com") && segs.size() == 2;
  if (github_repo_root || segs.empty() ||
      (segs.size() == 1 && (segs[0] == "index.html" || segs[0] == "index.htm"))) {
    return LinkTargetType::SoftwareHomepage;
  }
  return LinkTargetType::Unknown;
}

}  // namespace pomdebt
