#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <cstdlib>
#include <ctime>
#include <thread>

#include "pomdebt/error.hpp"
#include "pomdebt/forge.hpp"

namespace pomdebt {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string target;  // path + query
  std::string host;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw Error(ErrorCode::FetchError, "not an absolute URL: " + url);
  const auto slash = url.find('/', scheme + 3);
  SplitUrl out;
  out.origin = url.substr(0, slash);
  out.target = slash == std::string::npos ? "/" : url.substr(slash);
  out.host = static_probe(url).final_host;
  return out;
}

std::string utc_now() {
  const auto now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool rate_limited(const httplib::Response& r) {
  if (r.status == 429) return true;
  return r.status == 403 && r.get_header_value("x-ratelimit-remaining") == "0";
}

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v ? v : "";
}

}  // namespace

LiveOptions LiveOptions::from_environment() {
  LiveOptions o;
  o.github_token = env_or_empty("GITHUB_TOKEN");
  o.jira_token = env_or_empty("JIRA_TOKEN");
  return o;
}

LiveTransport::LiveTransport(LiveOptions options) : options_(std::move(options)) {}

LiveTransport::~LiveTransport() = default;

std::mutex& LiveTransport::host_mutex(const std::string& origin) {
  std::lock_guard lock(table_mutex_);
  auto& slot = host_mutexes_[origin];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

HttpResponse LiveTransport::get(const std::string& url) {
  const auto parts = split_url(url);
  httplib::Headers headers{{"Accept", "application/json"}, {"User-Agent", "pomdebt"}};
  const bool github = parts.host == "github.com" || parts.host.ends_with(".github.com") ||
                      parts.target.rfind("/repos/", 0) == 0;
  if (github && !options_.github_token.empty()) {
    headers.emplace("Authorization", "Bearer " + options_.github_token);
  } else if (parts.target.find("/rest/api/") != std::string::npos && !options_.jira_token.empty()) {
    headers.emplace("Authorization", "Bearer " + options_.jira_token);
  }

  std::lock_guard serialize(host_mutex(parts.origin));
  httplib::Client client(parts.origin);
  client.set_follow_location(true);
  client.set_connection_timeout(options_.timeout);
  client.set_read_timeout(options_.timeout);

  auto backoff = options_.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    auto res = client.Get(parts.target, headers);
    if (!res) {
      throw Error(ErrorCode::FetchError, httplib::to_string(res.error()) + " (" + url + ")");
    }
    if (rate_limited(*res) && attempt < options_.max_retries) {
      auto wait = backoff;
      const auto retry_after = res->get_header_value("retry-after");
      if (!retry_after.empty()) {
        try {
          wait = std::chrono::milliseconds(static_cast<long long>(std::stod(retry_after) * 1000));
        } catch (const std::exception&) {
        }
      }
      std::this_thread::sleep_for(std::min(wait, options_.max_backoff));
      backoff = std::min(backoff * 2, options_.max_backoff);
      continue;
    }
    HttpResponse out;
    out.status = res->status;
    for (const auto& [k, v] : res->headers) {
      std::string name = k;
      for (auto& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      out.headers.emplace(name, v);
    }
    if (!res->location.empty()) out.headers["x-final-url"] = res->location;
    out.body = res->body;
    out.fetched_at = utc_now();
    return out;
  }
}

}  // namespace pomdebt
