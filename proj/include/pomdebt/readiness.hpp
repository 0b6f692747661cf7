#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pomdebt/forge.hpp"
#include "pomdebt/links.hpp"
#include "pomdebt/record.hpp"

namespace pomdebt {

enum class Outcome { Ready, OnHold, Excluded, NoActionableLink };

/// I: origin repo archived. II: issue repo archived. III: origin repo is a
/// mirror. IV: record flagged as cross-reference. Checked in that order.
enum class ExclusionRule { I, II, III, IV };

std::string_view to_string(Outcome outcome) noexcept;
std::string_view to_string(ExclusionRule rule) noexcept;
std::optional<Outcome> parse_outcome(std::string_view name);
std::optional<ExclusionRule> parse_exclusion(std::string_view name);

struct LinkEvidence {
  LinkRef link;
  LinkTargetType type = LinkTargetType::Unknown;
  std::optional<IssueStatus> status;
  std::string error;  // "<code>: <message>" when the lookup failed

  friend bool operator==(const LinkEvidence&, const LinkEvidence&) = default;
};

struct ReadinessEvidence {
  std::vector<LinkEvidence> links;
  std::optional<RepoStatus> origin;
  std::string origin_error;
};

struct ReadinessVerdict {
  std::string record_id;
  Outcome outcome = Outcome::NoActionableLink;
  std::optional<ExclusionRule> rule;
  std::vector<LinkEvidence> evidence;
  std::optional<RepoStatus> origin;
  std::string origin_error;

  friend bool operator==(const ReadinessVerdict&, const ReadinessVerdict&) = default;
};

/// state in {resolved, closed, verified, completed} and, when the tracker
/// exposes a resolution field, resolution == fixed.
bool is_resolved_fixed(const IssueStatus& status);

/// Links of the record (extracted from its text when `record.links` is
/// empty), each typed and, for issue references, looked up. Failures are
/// recorded on the evidence, never thrown.
ReadinessEvidence gather_evidence(const SatdRecord& record, HttpTransport& transport,
                                  const ForgeConfig& config = {});

ReadinessVerdict assess_readiness(const SatdRecord& record, const ReadinessEvidence& evidence);

/// gather + assess for every record; records may be processed concurrently,
/// output order follows input order.
std::vector<ReadinessVerdict> assess_records(const std::vector<SatdRecord>& records,
                                             HttpTransport& transport, const ForgeConfig& config,
                                             unsigned threads = 1);

/// Markdown issue / pull-request draft. Throws Error{NotReady} unless the
/// verdict is Ready.
std::string draft_remediation_report(const SatdRecord& record, const ReadinessVerdict& verdict);

nlohmann::ordered_json verdict_to_json(const ReadinessVerdict& verdict);
ReadinessVerdict verdict_from_json(const nlohmann::json& j);

}  // namespace pomdebt
