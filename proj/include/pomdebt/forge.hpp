#pragma once

// Issue-tracker access: a transport abstraction with a fixture-replay and a
// live implementation, and the GitHub/JIRA status queries built on it.

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "pomdebt/links.hpp"

namespace pomdebt {

enum class Forge { GitHub, Jira };

std::string_view to_string(Forge forge) noexcept;

struct HttpResponse {
  int status = 0;
  std::map<std::string, std::string> headers;  // lowercase names
  std::string body;
  std::string fetched_at;  // ISO-8601 UTC
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  /// Throws Error{FetchError} when no response could be obtained.
  virtual HttpResponse get(const std::string& url) = 0;
};

/// "<dir>/<host>/<path>.json" for a URL; the query string is dropped, a
/// trailing slash or empty path maps to "index".
std::filesystem::path fixture_path(const std::filesystem::path& dir, std::string_view url);

/// Replays recorded payloads: {"status", "headers", "body", "fetched_at"} or
/// {"error": "..."} for a recorded network failure. A missing file is a
/// FetchError.
class FixtureTransport final : public HttpTransport {
 public:
  explicit FixtureTransport(std::filesystem::path dir) : dir_(std::move(dir)) {}
  HttpResponse get(const std::string& url) override;

 private:
  std::filesystem::path dir_;
};

struct LiveOptions {
  std::string github_token;  // GITHUB_TOKEN
  std::string jira_token;    // JIRA_TOKEN
  int max_retries = 4;
  std::chrono::milliseconds initial_backoff{1000};
  std::chrono::milliseconds max_backoff{60000};
  std::chrono::seconds timeout{20};

  static LiveOptions from_environment();
};

/// HTTP(S) client. Requests to the same host are serialized; 429 and
/// rate-limit 403 responses are retried with exponential backoff (honouring
/// Retry-After) before being returned to the caller.
class LiveTransport final : public HttpTransport {
 public:
  explicit LiveTransport(LiveOptions options);
  ~LiveTransport() override;
  HttpResponse get(const std::string& url) override;

 private:
  std::mutex& host_mutex(const std::string& origin);

  LiveOptions options_;
  std::mutex table_mutex_;
  std::map<std::string, std::unique_ptr<std::mutex>> host_mutexes_;
};

struct ForgeConfig {
  std::string github_api = "https://api.github.com";
  std::string github_web = "https://github.com";
  std::string jira_base = "https://issues.apache.org/jira";
};

struct IssueStatus {
  Forge forge = Forge::GitHub;
  std::string state;  // lowercase
  bool exposes_resolution = false;
  std::optional<std::string> resolution;  // lowercase
  bool is_pull_request = false;
  std::string repo;  // GitHub owner/repo or JIRA project key
  bool repo_archived = false;
  bool repo_is_mirror = false;
  std::string url;  // human-facing link
  std::string fetched_at;

  friend bool operator==(const IssueStatus&, const IssueStatus&) = default;
};

struct RepoStatus {
  std::string repo;
  bool archived = false;
  bool mirror = false;
  std::string fetched_at;

  friend bool operator==(const RepoStatus&, const RepoStatus&) = default;
};

/// Human-facing issue URL for a GitHubIssue / JiraKey reference.
std::string issue_url(const LinkRef& ref, const ForgeConfig& config);

/// GitHub: GET /repos/{o}/{r}/issues/{n} then GET /repos/{o}/{r}.
/// JIRA: GET /rest/api/2/issue/{key}?fields=status,resolution.
/// Errors: UnsupportedForge (plain URL), NotFound, RateLimited, FetchError.
IssueStatus fetch_issue_status(const LinkRef& ref, HttpTransport& transport,
                               const ForgeConfig& config = {});

/// GET /repos/{owner}/{repo} for "owner/repo".
RepoStatus fetch_repo_status(const std::string& owner_repo, HttpTransport& transport,
                             const ForgeConfig& config = {});

/// GET of a plain URL reduced to a link probe (status + host/path).
LinkProbe fetch_probe(const std::string& url, HttpTransport& transport);

}  // namespace pomdebt
