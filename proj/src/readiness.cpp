#include "pomdebt/readiness.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cctype>

#include "pomdebt/error.hpp"
#include "pomdebt/parallel.hpp"

namespace pomdebt {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::array<std::string_view, 4> kResolvedStates = {"resolved", "closed", "verified",
                                                             "completed"};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string describe(const Error& e) { return fmt::format("{}: {}", to_string(e.code()), e.what()); }

ordered_json status_to_json(const IssueStatus& s) {
  ordered_json j;
  j["forge"] = std::string(to_string(s.forge));
  j["state"] = s.state;
  j["exposes_resolution"] = s.exposes_resolution;
  j["resolution"] = s.resolution ? ordered_json(*s.resolution) : ordered_json(nullptr);
  j["is_pull_request"] = s.is_pull_request;
  j["repo"] = s.repo;
  j["repo_archived"] = s.repo_archived;
  j["repo_is_mirror"] = s.repo_is_mirror;
  j["url"] = s.url;
  j["fetched_at"] = s.fetched_at;
  return j;
}

IssueStatus status_from_json(const json& j) {
  IssueStatus s;
  const auto forge = j.at("forge").get<std::string>();
  if (forge == "github") {
    s.forge = Forge::GitHub;
  } else if (forge == "jira") {
    s.forge = Forge::Jira;
  } else {
    throw Error(ErrorCode::SchemaError, "unknown forge '" + forge + "'");
  }
  s.state = j.at("state").get<std::string>();
  s.exposes_resolution = j.at("exposes_resolution").get<bool>();
  if (!j.at("resolution").is_null()) s.resolution = j.at("resolution").get<std::string>();
  s.is_pull_request = j.at("is_pull_request").get<bool>();
  s.repo = j.at("repo").get<std::string>();
  s.repo_archived = j.at("repo_archived").get<bool>();
  s.repo_is_mirror = j.at("repo_is_mirror").get<bool>();
  s.url = j.at("url").get<std::string>();
  s.fetched_at = j.at("fetched_at").get<std::string>();
  return s;
}

ordered_json repo_to_json(const RepoStatus& r) {
  ordered_json j;
  j["repo"] = r.repo;
  j["archived"] = r.archived;
  j["mirror"] = r.mirror;
  j["fetched_at"] = r.fetched_at;
  return j;
}

RepoStatus repo_from_json(const json& j) {
  return {j.at("repo").get<std::string>(), j.at("archived").get<bool>(), j.at("mirror").get<bool>(),
          j.at("fetched_at").get<std::string>()};
}

std::string target_url(const LinkEvidence& e) {
  if (e.status && !e.status->url.empty()) return e.status->url;
  return e.link.url.empty() ? e.link.display() : e.link.url;
}

std::string status_phrase(const IssueStatus& s) {
  if (s.exposes_resolution && s.resolution) {
    return fmt::format("**{}** (resolution: {})", s.state, *s.resolution);
  }
  return fmt::format("**{}**", s.state);
}

}  // namespace

std::string_view to_string(Outcome outcome) noexcept {
  switch (outcome) {
    case Outcome::Ready: return "ready";
    case Outcome::OnHold: return "on_hold";
    case Outcome::Excluded: return "excluded";
    case Outcome::NoActionableLink: return "no_actionable_link";
  }
  return "?";
}

std::string_view to_string(ExclusionRule rule) noexcept {
  switch (rule) {
    case ExclusionRule::I: return "I";
    case ExclusionRule::II: return "II";
    case ExclusionRule::III: return "III";
    case ExclusionRule::IV: return "IV";
  }
  return "?";
}

std::optional<Outcome> parse_outcome(std::string_view name) {
  for (auto o : {Outcome::Ready, Outcome::OnHold, Outcome::Excluded, Outcome::NoActionableLink}) {
    if (to_string(o) == name) return o;
  }
  return std::nullopt;
}

std::optional<ExclusionRule> parse_exclusion(std::string_view name) {
  for (auto r : {ExclusionRule::I, ExclusionRule::II, ExclusionRule::III, ExclusionRule::IV}) {
    if (to_string(r) == name) return r;
  }
  return std::nullopt;
}

bool is_resolved_fixed(const IssueStatus& status) {
  const auto state = lower(status.state);
  if (std::find(kResolvedStates.begin(), kResolvedStates.end(), state) == kResolvedStates.end()) {
    return false;
  }
  if (!status.exposes_resolution) return true;
  return status.resolution && lower(*status.resolution) == "fixed";
}

ReadinessEvidence gather_evidence(const SatdRecord& record, HttpTransport& transport,
                                  const ForgeConfig& config) {
  ReadinessEvidence out;
  auto links = record.links.empty() ? extract_links(record.comment.text) : record.links;
  for (auto& link : links) {
    link.comment_ref = record.id;
    LinkEvidence e;
    e.link = link;
    if (link.kind == LinkKind::GitHubIssue || link.kind == LinkKind::JiraKey) {
      try {
        e.status = fetch_issue_status(link, transport, config);
        e.type = e.status->is_pull_request ? LinkTargetType::PullRequest : LinkTargetType::BugReport;
      } catch (const Error& err) {
        e.type = err.code() == ErrorCode::NotFound ? LinkTargetType::NotFound404
                                                   : LinkTargetType::BugReport;
        e.error = describe(err);
      }
    } else {
      std::optional<LinkProbe> probe;
      try {
        probe = fetch_probe(link.url, transport);
      } catch (const Error& err) {
        e.error = describe(err);
      }
      try {
        e.type = classify_link_target(link, probe);
      } catch (const Error& err) {
        e.type = LinkTargetType::Unknown;
        if (e.error.empty()) e.error = describe(err);
      }
    }
    out.links.push_back(std::move(e));
  }
  if (record.origin) {
    try {
      out.origin = fetch_repo_status(*record.origin, transport, config);
    } catch (const Error& err) {
      out.origin_error = describe(err);
    }
  }
  return out;
}

ReadinessVerdict assess_readiness(const SatdRecord& record, const ReadinessEvidence& evidence) {
  ReadinessVerdict v;
  v.record_id = record.id;
  v.evidence = evidence.links;
  v.origin = evidence.origin;
  v.origin_error = evidence.origin_error;

  std::vector<const LinkEvidence*> bugs;
  for (const auto& e : evidence.links) {
    if (e.type == LinkTargetType::BugReport) bugs.push_back(&e);
  }
  if (bugs.empty()) {
    v.outcome = Outcome::NoActionableLink;
    return v;
  }
  auto exclude = [&](ExclusionRule rule) {
    v.outcome = Outcome::Excluded;
    v.rule = rule;
    return v;
  };
  if (evidence.origin && evidence.origin->archived) return exclude(ExclusionRule::I);
  if (std::any_of(bugs.begin(), bugs.end(),
                  [](const LinkEvidence* e) { return e->status && e->status->repo_archived; })) {
    return exclude(ExclusionRule::II);
  }
  if (evidence.origin && evidence.origin->mirror) return exclude(ExclusionRule::III);
  if (record.cross_reference) return exclude(ExclusionRule::IV);

  const bool ready = std::any_of(bugs.begin(), bugs.end(), [](const LinkEvidence* e) {
    return e->status && is_resolved_fixed(*e->status);
  });
  v.outcome = ready ? Outcome::Ready : Outcome::OnHold;
  return v;
}

std::vector<ReadinessVerdict> assess_records(const std::vector<SatdRecord>& records,
                                             HttpTransport& transport, const ForgeConfig& config,
                                             unsigned threads) {
  std::vector<ReadinessVerdict> out(records.size());
  parallel_for(records.size(), threads, [&](std::size_t i) {
    out[i] = assess_readiness(records[i], gather_evidence(records[i], transport, config));
  });
  return out;
}

std::string draft_remediation_report(const SatdRecord& record, const ReadinessVerdict& verdict) {
  if (verdict.outcome != Outcome::Ready) {
    throw Error(ErrorCode::NotReady,
                fmt::format("record {} is {}, not ready", record.id, to_string(verdict.outcome)));
  }
  const auto& c = record.comment;
  std::vector<const LinkEvidence*> resolved;
  for (const auto& e : verdict.evidence) {
    if (e.type == LinkTargetType::BugReport && e.status && is_resolved_fixed(*e.status)) {
      resolved.push_back(&e);
    }
  }

  std::string out;
  out += fmt::format("# Resolved upstream issue referenced in `{}`\n\n", c.path);
  std::vector<std::string> cited;
  for (const auto* e : resolved) cited.push_back(fmt::format("[{}]({})", e->link.display(), target_url(*e)));
  out += fmt::format(
      "A comment in `{}` documents technical debt that waits on {}. The referenced {} "
      "already resolved, so the related code or comment can be removed or fixed.\n\n",
      c.path, fmt::join(cited, " and "), resolved.size() == 1 ? "issue is" : "issues are");

  out += "Referenced issues:\n\n";
  for (const auto* e : resolved) {
    out += fmt::format("- [{}]({}): {}\n", e->link.display(), target_url(*e), status_phrase(*e->status));
  }

  out += "\nComment location:\n\n```\n";
  out += fmt::format("{}/{}\n", c.repo, c.path);
  if (c.line_start == c.line_end) {
    out += fmt::format("Line {}\n\n", c.line_start);
  } else {
    out += fmt::format("Lines {} to {}\n\n", c.line_start, c.line_end);
  }
  const std::string quoted = "<!--" + c.text + "-->";
  std::size_t line = c.line_start;
  const auto width = std::to_string(c.line_end).size();
  std::size_t begin = 0;
  while (begin <= quoted.size()) {
    auto end = quoted.find('\n', begin);
    if (end == std::string::npos) end = quoted.size();
    out += fmt::format("{:>{}}  {}\n", line++, width, std::string_view(quoted).substr(begin, end - begin));
    begin = end + 1;
  }
  out += "```\n\n";

  const bool workaround = lower(c.text).find("workaround") != std::string::npos;
  out += "Suggested action: ";
  out += workaround
             ? "remove the stale workaround together with this comment, after checking that the "
               "fixed release is in use.\n"
             : "remove this comment and any configuration it only keeps for the resolved issue.\n";
  return out;
}

ordered_json verdict_to_json(const ReadinessVerdict& v) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["record_id"] = v.record_id;
  j["outcome"] = std::string(to_string(v.outcome));
  j["rule"] = v.rule ? ordered_json(std::string(to_string(*v.rule))) : ordered_json(nullptr);
  auto evidence = ordered_json::array();
  for (const auto& e : v.evidence) {
    ordered_json item;
    item["link"] = link_to_json(e.link);
    item["type"] = std::string(display_name(e.type));
    item["status"] = e.status ? status_to_json(*e.status) : ordered_json(nullptr);
    item["error"] = e.error.empty() ? ordered_json(nullptr) : ordered_json(e.error);
    evidence.push_back(std::move(item));
  }
  j["evidence"] = std::move(evidence);
  j["origin"] = v.origin ? repo_to_json(*v.origin) : ordered_json(nullptr);
  j["origin_error"] = v.origin_error.empty() ? ordered_json(nullptr) : ordered_json(v.origin_error);
  return j;
}

ReadinessVerdict verdict_from_json(const json& j) {
  try {
    if (j.at("schema_version").get<int>() != kSchemaVersion) {
      throw Error(ErrorCode::SchemaError, "unsupported schema_version");
    }
    ReadinessVerdict v;
    v.record_id = j.at("record_id").get<std::string>();
    const auto outcome = parse_outcome(j.at("outcome").get<std::string>());
    if (!outcome) throw Error(ErrorCode::SchemaError, "unknown outcome");
    v.outcome = *outcome;
    if (!j.at("rule").is_null()) {
      v.rule = parse_exclusion(j.at("rule").get<std::string>());
      if (!v.rule) throw Error(ErrorCode::SchemaError, "unknown exclusion rule");
    }
    for (const auto& item : j.at("evidence")) {
      LinkEvidence e;
      e.link = link_from_json(item.at("link"));
      e.link.comment_ref = v.record_id;
      const auto type = parse_link_target(item.at("type").get<std::string>());
      if (!type) throw Error(ErrorCode::SchemaError, "unknown link target type");
      e.type = *type;
      if (!item.at("status").is_null()) e.status = status_from_json(item.at("status"));
      if (!item.at("error").is_null()) e.error = item.at("error").get<std::string>();
      v.evidence.push_back(std::move(e));
    }
    if (!j.at("origin").is_null()) v.origin = repo_from_json(j.at("origin"));
    if (!j.at("origin_error").is_null()) v.origin_error = j.at("origin_error").get<std::string>();
    return v;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("verdict: ") + e.what());
  }
}

}  // namespace pomdebt
