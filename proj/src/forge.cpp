#include "pomdebt/forge.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <json.hpp>

#include "pomdebt/error.hpp"

namespace pomdebt {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim_slash(std::string s) {
  while (!s.empty() && s.back() == '/') s.pop_back();
  return s;
}

nlohmann::json parse_body(const HttpResponse& r, const std::string& url) {
  try {
    return nlohmann::json::parse(r.body);
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::FetchError, "malformed JSON from " + url);
  }
}

// Maps non-success statuses to the error taxonomy.
void check_status(const HttpResponse& r, const std::string& url) {
  if (r.status >= 200 && r.status < 300) return;
  if (r.status == 404 || r.status == 410) throw Error(ErrorCode::NotFound, "not found: " + url);
  const auto remaining = r.headers.find("x-ratelimit-remaining");
  const bool limited = r.status == 429 ||
                       (r.status == 403 && remaining != r.headers.end() && remaining->second == "0");
  if (limited) {
    double retry_after = 0.0;
    if (auto it = r.headers.find("retry-after"); it != r.headers.end()) {
      try {
        retry_after = std::stod(it->second);
      } catch (const std::exception&) {
        retry_after = 0.0;
      }
    }
    throw RateLimitedError(retry_after, "rate limited: " + url);
  }
  throw Error(ErrorCode::FetchError, "HTTP " + std::to_string(r.status) + " from " + url);
}

std::string string_or_empty(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  return (it != j.end() && it->is_string()) ? it->get<std::string>() : std::string();
}

// Base URL for a JIRA key: the URL it was written as, else the configured one.
std::string jira_base_for(const LinkRef& ref, const ForgeConfig& config) {
  if (!ref.url.empty()) {
    if (const auto pos = ref.url.find("/browse/"); pos != std::string::npos) {
      return ref.url.substr(0, pos);
    }
  }
  return trim_slash(config.jira_base);
}

}  // namespace

std::string_view to_string(Forge forge) noexcept {
  return forge == Forge::GitHub ? "github" : "jira";
}

std::filesystem::path fixture_path(const std::filesystem::path& dir, std::string_view url) {
  const auto probe = static_probe(url);
  auto authority = url;
  if (const auto scheme = authority.find("://"); scheme != std::string_view::npos) {
    authority.remove_prefix(scheme + 3);
  }
  authority = authority.substr(0, authority.find_first_of("/?#"));
  if (const auto at = authority.rfind('@'); at != std::string_view::npos) authority.remove_prefix(at + 1);
  std::string host = probe.final_host;
  if (const auto colon = authority.find(':'); colon != std::string_view::npos) {
    host += authority.substr(colon);
  }
  std::replace(host.begin(), host.end(), ':', '_');
  std::string path = probe.final_path;
  while (!path.empty() && path.front() == '/') path.erase(0, 1);
  path = trim_slash(path);
  if (path.empty()) path = "index";
  return dir / host / (path + ".json");
}

HttpResponse FixtureTransport::get(const std::string& url) {
  const auto file = fixture_path(dir_, url);
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::FetchError, "no recorded response for " + url);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::FetchError, "unreadable fixture " + file.string() + ": " + e.what());
  }
  if (j.contains("error")) {
    throw Error(ErrorCode::FetchError, j.at("error").get<std::string>() + " (" + url + ")");
  }
  HttpResponse r;
  r.status = j.value("status", 200);
  if (j.contains("headers")) {
    for (const auto& [k, v] : j.at("headers").items()) r.headers[lower(k)] = v.get<std::string>();
  }
  if (j.contains("body")) {
    const auto& body = j.at("body");
    r.body = body.is_string() ? body.get<std::string>() : body.dump();
  }
  r.fetched_at = j.value("fetched_at", std::string("1970-01-01T00:00:00Z"));
  return r;
}

std::string issue_url(const LinkRef& ref, const ForgeConfig& config) {
  switch (ref.kind) {
    case LinkKind::GitHubIssue:
      return trim_slash(config.github_web) + "/" + ref.owner + "/" + ref.repo + "/issues/" +
             std::to_string(ref.number);
    case LinkKind::JiraKey:
      return jira_base_for(ref, config) + "/browse/" + ref.display();
    case LinkKind::Url:
      break;
  }
  return ref.url;
}

RepoStatus fetch_repo_status(const std::string& owner_repo, HttpTransport& transport,
                             const ForgeConfig& config) {
  const auto url = trim_slash(config.github_api) + "/repos/" + owner_repo;
  const auto r = transport.get(url);
  check_status(r, url);
  const auto j = parse_body(r, url);
  RepoStatus s;
  s.repo = owner_repo;
  s.archived = j.value("archived", false);
  const auto mirror = j.find("mirror_url");
  s.mirror = mirror != j.end() && mirror->is_string() && !mirror->get<std::string>().empty();
  s.fetched_at = r.fetched_at;
  return s;
}

IssueStatus fetch_issue_status(const LinkRef& ref, HttpTransport& transport,
                               const ForgeConfig& config) {
  IssueStatus s;
  if (ref.kind == LinkKind::GitHubIssue) {
    s.forge = Forge::GitHub;
    s.repo = ref.owner + "/" + ref.repo;
    const auto url = trim_slash(config.github_api) + "/repos/" + s.repo + "/issues/" +
                     std::to_string(ref.number);
    const auto r = transport.get(url);
    check_status(r, url);
    const auto j = parse_body(r, url);
    s.state = lower(string_or_empty(j, "state"));
    s.is_pull_request = j.contains("pull_request");
    s.url = string_or_empty(j, "html_url");
    if (s.url.empty()) s.url = issue_url(ref, config);
    s.fetched_at = r.fetched_at;
    const auto repo = fetch_repo_status(s.repo, transport, config);
    s.repo_archived = repo.archived;
    s.repo_is_mirror = repo.mirror;
    return s;
  }
  if (ref.kind == LinkKind::JiraKey) {
    s.forge = Forge::Jira;
    s.repo = ref.project;
    const auto url =
        jira_base_for(ref, config) + "/rest/api/2/issue/" + ref.display() + "?fields=status,resolution";
    const auto r = transport.get(url);
    check_status(r, url);
    const auto j = parse_body(r, url);
    try {
      const auto& fields = j.at("fields");
      s.state = lower(fields.at("status").at("name").get<std::string>());
      s.exposes_resolution = true;
      if (auto res = fields.find("resolution"); res != fields.end() && res->is_object()) {
        s.resolution = lower(res->at("name").get<std::string>());
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::FetchError, "unexpected JIRA payload from " + url + ": " + e.what());
    }
    s.url = issue_url(ref, config);
    s.fetched_at = r.fetched_at;
    return s;
  }
  throw Error(ErrorCode::UnsupportedForge, "not an issue reference: " + ref.display());
}

LinkProbe fetch_probe(const std::string& url, HttpTransport& transport) {
  const auto r = transport.get(url);
  auto probe = static_probe(url);
  probe.http_status = r.status;
  if (auto it = r.headers.find("x-final-url"); it != r.headers.end()) {
    const auto final_probe = static_probe(it->second);
    probe.final_host = final_probe.final_host;
    probe.final_path = final_probe.final_path;
  }
  return probe;
}

}  // namespace pomdebt
