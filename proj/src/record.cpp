#include "pomdebt/record.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "pomdebt/error.hpp"

namespace pomdebt {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void schema_error(std::size_t line, const std::string& what) {
  throw LineError(ErrorCode::SchemaError, line, what);
}

[[noreturn]] void unknown_category(std::size_t line, std::string_view field,
                                   std::string_view value) {
  throw LineError(ErrorCode::UnknownCategory, line,
                  "unknown " + std::string(field) + " '" + std::string(value) + "'");
}

const json* find(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return nullptr;
  return &*it;
}

std::string get_string(const json& j, const char* key, std::size_t line, bool required) {
  const auto* v = find(j, key);
  if (!v) {
    if (required) schema_error(line, std::string("missing field '") + key + "'");
    return {};
  }
  if (!v->is_string()) schema_error(line, std::string("field '") + key + "' must be a string");
  return v->get<std::string>();
}

std::size_t get_count(const json& j, const char* key, std::size_t line) {
  const auto* v = find(j, key);
  if (!v) schema_error(line, std::string("missing field '") + key + "'");
  if (!v->is_number_unsigned()) {
    schema_error(line, std::string("field '") + key + "' must be a non-negative integer");
  }
  return v->get<std::size_t>();
}

Prediction prediction_from_json(const json& j, Task task, std::size_t line) {
  if (!j.is_object()) schema_error(line, "prediction must be an object");
  const auto name = get_string(j, "label", line, true);
  const auto label = parse_merged(task, name);
  if (!label) unknown_category(line, "predicted label", name);
  Prediction p{*label, std::vector<double>(merged_label_names(task).size(), 0.0)};
  if (const auto* scores = find(j, "scores")) {
    if (!scores->is_object()) schema_error(line, "prediction scores must be an object");
    for (const auto& [key, value] : scores->items()) {
      const auto idx = parse_merged(task, key);
      if (!idx) unknown_category(line, "score label", key);
      if (!value.is_number()) schema_error(line, "scores must be numbers");
      p.scores[idx->value] = value.get<double>();
    }
  }
  return p;
}

ordered_json prediction_to_json(const Prediction& p) {
  ordered_json scores = ordered_json::object();
  const auto& names = merged_label_names(p.label.task);
  for (std::size_t i = 0; i < names.size() && i < p.scores.size(); ++i) {
    scores[names[i]] = p.scores[i];
  }
  return {{"label", std::string(p.label.name())}, {"scores", scores}};
}

}  // namespace

std::string record_id(const BuildComment& c) {
  return c.repo + "/" + c.path + ":" + std::to_string(c.line_start);
}

void make_record_ids(std::vector<SatdRecord>& records) {
  std::unordered_map<std::string, int> seen;
  for (auto& r : records) {
    const auto base = record_id(r.comment);
    const int n = ++seen[base];
    r.id = n == 1 ? base : base + "#" + std::to_string(n);
  }
}

ordered_json comment_to_json(const BuildComment& c, LocationCategory location) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["repo"] = c.repo;
  j["path"] = c.path;
  j["line_start"] = c.line_start;
  j["line_end"] = c.line_end;
  j["enclosing_path"] = c.enclosing_path;
  j["annotated_sibling"] = c.annotated_sibling ? ordered_json(*c.annotated_sibling) : nullptr;
  j["text"] = c.text;
  j["location"] = std::string(display_name(location));
  return j;
}

ordered_json link_to_json(const LinkRef& link) {
  ordered_json j;
  j["kind"] = std::string(to_string(link.kind));
  j["raw"] = link.raw;
  j["offset"] = link.offset;
  if (!link.url.empty()) j["url"] = link.url;
  if (link.kind == LinkKind::GitHubIssue) {
    j["owner"] = link.owner;
    j["repo"] = link.repo;
    j["number"] = link.number;
  } else if (link.kind == LinkKind::JiraKey) {
    j["project"] = link.project;
    j["number"] = link.number;
  }
  return j;
}

LinkRef link_from_json(const json& j) {
  LinkRef link;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "url") {
    link.kind = LinkKind::Url;
  } else if (kind == "github_issue") {
    link.kind = LinkKind::GitHubIssue;
  } else if (kind == "jira_key") {
    link.kind = LinkKind::JiraKey;
  } else {
    throw Error(ErrorCode::SchemaError, "unknown link kind '" + kind + "'");
  }
  link.raw = j.at("raw").get<std::string>();
  link.offset = j.value("offset", std::size_t{0});
  link.url = j.value("url", std::string{});
  link.owner = j.value("owner", std::string{});
  link.repo = j.value("repo", std::string{});
  link.project = j.value("project", std::string{});
  link.number = j.value("number", 0UL);
  return link;
}

ordered_json record_to_json(const SatdRecord& r) {
  auto j = comment_to_json(r.comment, r.location);
  // Put the id right after schema_version.
  ordered_json out;
  out["schema_version"] = kSchemaVersion;
  out["id"] = r.id;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() != "schema_version") out[it.key()] = it.value();
  }
  out["is_satd"] = r.detection.is_satd;
  out["matched"] = r.detection.matched;
  if (r.origin) out["origin"] = *r.origin;
  if (r.cross_reference) out["cross_reference"] = true;
  if (r.reason) {
    out["reason"] = std::string(display_name(r.reason->category));
    if (r.reason->subcategory) {
      out["reason_subcategory"] = std::string(display_name(*r.reason->subcategory));
    }
  }
  if (r.purpose) out["purpose"] = std::string(display_name(*r.purpose));
  if (r.predicted_reason || r.predicted_purpose) {
    ordered_json predicted = ordered_json::object();
    if (r.predicted_reason) predicted["reason"] = prediction_to_json(*r.predicted_reason);
    if (r.predicted_purpose) predicted["purpose"] = prediction_to_json(*r.predicted_purpose);
    out["predicted"] = predicted;
  }
  if (!r.links.empty()) {
    ordered_json links = ordered_json::array();
    for (const auto& l : r.links) links.push_back(link_to_json(l));
    out["links"] = links;
  }
  return out;
}

SatdRecord record_from_json(const json& j, std::size_t line) {
  if (!j.is_object()) schema_error(line, "record must be a JSON object");
  if (const auto* version = find(j, "schema_version")) {
    if (!version->is_number_integer() || version->get<int>() != kSchemaVersion) {
      schema_error(line, "unsupported schema_version");
    }
  }

  SatdRecord r;
  auto& c = r.comment;
  c.repo = get_string(j, "repo", line, true);
  c.path = get_string(j, "path", line, true);
  c.text = get_string(j, "text", line, true);
  c.line_start = get_count(j, "line_start", line);
  c.line_end = get_count(j, "line_end", line);
  if (c.line_end < c.line_start) schema_error(line, "line_end precedes line_start");
  if (const auto* path = find(j, "enclosing_path")) {
    if (!path->is_array()) schema_error(line, "enclosing_path must be an array");
    for (const auto& tag : *path) {
      if (!tag.is_string()) schema_error(line, "enclosing_path entries must be strings");
      c.enclosing_path.push_back(tag.get<std::string>());
    }
  }
  if (const auto* sibling = find(j, "annotated_sibling")) {
    if (!sibling->is_string()) schema_error(line, "annotated_sibling must be a string or null");
    c.annotated_sibling = sibling->get<std::string>();
  }

  if (const auto* location = find(j, "location")) {
    if (!location->is_string()) schema_error(line, "location must be a string");
    const auto parsed = parse_location(location->get<std::string>());
    if (!parsed) unknown_category(line, "location", location->get<std::string>());
    r.location = *parsed;
  } else {
    r.location = classify_location(c);
  }

  r.id = get_string(j, "id", line, false);
  if (r.id.empty()) r.id = record_id(c);

  if (const auto* satd = find(j, "is_satd")) {
    if (!satd->is_boolean()) schema_error(line, "is_satd must be a boolean");
    r.detection.is_satd = satd->get<bool>();
  }
  if (const auto* matched = find(j, "matched")) {
    if (!matched->is_array()) schema_error(line, "matched must be an array");
    for (const auto& m : *matched) {
      if (!m.is_string()) schema_error(line, "matched entries must be strings");
      r.detection.matched.push_back(m.get<std::string>());
    }
  }
  if (r.detection.is_satd != !r.detection.matched.empty() && find(j, "matched")) {
    schema_error(line, "is_satd disagrees with matched");
  }

  if (const auto* origin = find(j, "origin")) {
    if (!origin->is_string()) schema_error(line, "origin must be a string");
    r.origin = origin->get<std::string>();
  }
  if (const auto* xref = find(j, "cross_reference")) {
    if (!xref->is_boolean()) schema_error(line, "cross_reference must be a boolean");
    r.cross_reference = xref->get<bool>();
  }

  const auto reason_name = get_string(j, "reason", line, false);
  const auto sub_name = get_string(j, "reason_subcategory", line, false);
  if (!reason_name.empty() || !sub_name.empty()) {
    std::optional<ReasonSubcategory> sub;
    if (!sub_name.empty()) {
      sub = parse_reason_subcategory(sub_name);
      if (!sub) unknown_category(line, "reason subcategory", sub_name);
    }
    ReasonCategory category;
    if (!reason_name.empty()) {
      const auto parsed = parse_reason_category(reason_name);
      if (!parsed) unknown_category(line, "reason", reason_name);
      category = *parsed;
    } else {
      category = parent_category(*sub);
    }
    if (sub && parent_category(*sub) != category) {
      unknown_category(line, "reason subcategory for " + reason_name, sub_name);
    }
    r.reason = ReasonLabel{category, sub};
  }
  const auto purpose_name = get_string(j, "purpose", line, false);
  if (!purpose_name.empty()) {
    const auto parsed = parse_purpose(purpose_name);
    if (!parsed) unknown_category(line, "purpose", purpose_name);
    r.purpose = *parsed;
  }

  if (const auto* predicted = find(j, "predicted")) {
    if (!predicted->is_object()) schema_error(line, "predicted must be an object");
    if (const auto* p = find(*predicted, "reason")) {
      r.predicted_reason = prediction_from_json(*p, Task::Reason, line);
    }
    if (const auto* p = find(*predicted, "purpose")) {
      r.predicted_purpose = prediction_from_json(*p, Task::Purpose, line);
    }
  }

  if (const auto* links = find(j, "links")) {
    if (!links->is_array()) schema_error(line, "links must be an array");
    for (const auto& l : *links) {
      try {
        auto link = link_from_json(l);
        link.comment_ref = r.id;
        r.links.push_back(std::move(link));
      } catch (const json::exception& e) {
        schema_error(line, std::string("malformed link: ") + e.what());
      } catch (const Error& e) {
        schema_error(line, e.what());
      }
    }
  }
  return r;
}

std::vector<SatdRecord> read_records(std::istream& in) {
  std::vector<SatdRecord> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      schema_error(line, std::string("invalid JSON: ") + e.what());
    }
    out.push_back(record_from_json(j, line));
  }
  return out;
}

std::vector<SatdRecord> ingest_coded_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_records(in);
}

void write_jsonl(std::ostream& out, const std::vector<SatdRecord>& records) {
  for (const auto& r : records) out << record_to_json(r).dump(-1, ' ', false, ordered_json::error_handler_t::replace) << '\n';
}

}  // namespace pomdebt
