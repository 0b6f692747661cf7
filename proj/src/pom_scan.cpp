#include "pomdebt/pom_scan.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <system_error>
#include <tuple>

#include "pomdebt/error.hpp"
#include "pomdebt/xml_events.hpp"

namespace fs = std::filesystem;

namespace pomdebt {

namespace {

struct LocationName {
  LocationCategory category;
  std::string_view display;
  std::string_view ident;
};

constexpr std::array<LocationName, 10> kLocationNames = {{
    {LocationCategory::PluginConfiguration, "Plugin configuration", "PluginConfiguration"},
    {LocationCategory::ExternalDependenciesConfiguration, "External dependencies configuration",
     "ExternalDependenciesConfiguration"},
    {LocationCategory::BuildVariables, "Build variables", "BuildVariables"},
    {LocationCategory::MultiDirectoryConfiguration, "Multi-directory configuration",
     "MultiDirectoryConfiguration"},
    {LocationCategory::ResourceConfiguration, "Resource configuration", "ResourceConfiguration"},
    {LocationCategory::RepositoryConfiguration, "Repository configuration",
     "RepositoryConfiguration"},
    {LocationCategory::ProjectMetadata, "Project metadata", "ProjectMetadata"},
    {LocationCategory::BuildOrganization, "Build organization", "BuildOrganization"},
    {LocationCategory::SoftwareConfigurationManagement, "Software configuration management",
     "SoftwareConfigurationManagement"},
    {LocationCategory::Unclassified, "Unclassified", "Unclassified"},
}};

struct TagRule {
  std::string_view tag;
  LocationCategory category;
  bool root_only;
};

constexpr std::array<TagRule, 29> kTagRules = {{
    {"plugins", LocationCategory::PluginConfiguration, false},
    {"plugin", LocationCategory::PluginConfiguration, false},
    {"profiles", LocationCategory::PluginConfiguration, false},
    {"pluginManagement", LocationCategory::PluginConfiguration, false},
    {"dependencies", LocationCategory::ExternalDependenciesConfiguration, false},
    {"dependency", LocationCategory::ExternalDependenciesConfiguration, false},
    {"dependencyManagement", LocationCategory::ExternalDependenciesConfiguration, false},
    {"exclusions", LocationCategory::ExternalDependenciesConfiguration, false},
    {"properties", LocationCategory::BuildVariables, false},
    {"parent", LocationCategory::MultiDirectoryConfiguration, false},
    {"resources", LocationCategory::ResourceConfiguration, false},
    {"resource", LocationCategory::ResourceConfiguration, false},
    {"testResources", LocationCategory::ResourceConfiguration, false},
    {"repositories", LocationCategory::RepositoryConfiguration, false},
    {"repository", LocationCategory::RepositoryConfiguration, false},
    {"pluginRepositories", LocationCategory::RepositoryConfiguration, false},
    {"distributionManagement", LocationCategory::RepositoryConfiguration, false},
    {"artifactId", LocationCategory::ProjectMetadata, true},
    {"groupId", LocationCategory::ProjectMetadata, true},
    {"version", LocationCategory::ProjectMetadata, true},
    {"url", LocationCategory::ProjectMetadata, true},
    {"name", LocationCategory::ProjectMetadata, true},
    {"description", LocationCategory::ProjectMetadata, true},
    {"licenses", LocationCategory::ProjectMetadata, true},
    {"packaging", LocationCategory::BuildOrganization, false},
    {"build", LocationCategory::BuildOrganization, false},
    {"scm", LocationCategory::SoftwareConfigurationManagement, false},
    // Children of containers above.
    {"testResource", LocationCategory::ResourceConfiguration, false},
    {"snapshotRepository", LocationCategory::RepositoryConfiguration, false},
}};

constexpr std::string_view kBuildTag = "build";

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  return std::move(buffer).str();
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v';
  });
}

std::vector<std::string_view> split_lines(std::string_view content) {
  std::vector<std::string_view> lines;
  std::size_t begin = 0;
  while (begin <= content.size()) {
    const auto end = content.find('\n', begin);
    if (end == std::string_view::npos) {
      if (begin < content.size()) lines.push_back(content.substr(begin));
      break;
    }
    lines.push_back(content.substr(begin, end - begin));
    begin = end + 1;
  }
  return lines;
}

class CommentCollector : public xml::EventHandler {
 public:
  CommentCollector(const BuildFile& file, std::vector<BuildComment>& out)
      : file_(file), out_(out) {
    frames_.emplace_back();  // document level
  }

  void on_start_element(std::string_view name, xml::Position) override {
    for (auto index : frames_.back().pending) out_[index].annotated_sibling = std::string(name);
    frames_.back().pending.clear();
    path_.emplace_back(name);
    frames_.emplace_back();
  }

  void on_end_element(std::string_view, xml::Position) override {
    frames_.pop_back();
    path_.pop_back();
  }

  void on_comment(std::string_view body, xml::Position start, xml::Position end) override {
    BuildComment c;
    c.repo = file_.repo_id;
    c.path = file_.rel_path;
    c.text = std::string(body);
    c.line_start = start.line;
    c.line_end = end.line;
    c.enclosing_path = path_;
    frames_.back().pending.push_back(out_.size());
    out_.push_back(std::move(c));
  }

 private:
  struct Frame {
    std::vector<std::size_t> pending;
  };

  const BuildFile& file_;
  std::vector<BuildComment>& out_;
  std::vector<std::string> path_;
  std::vector<Frame> frames_;
};

struct ElementSpan {
  std::size_t first_line;
  std::size_t last_line;
  std::size_t depth;
  LocationCategory category;
  bool fallback;  // <build>
};

class SpanCollector : public xml::EventHandler {
 public:
  explicit SpanCollector(std::vector<ElementSpan>& out) : out_(out) {}

  void on_start_element(std::string_view name, xml::Position at) override {
    open_.push_back({std::string(name), at.line});
  }

  void on_end_element(std::string_view, xml::Position at) override {
    const Open element = open_.back();
    open_.pop_back();
    const bool parent_is_root = open_.size() == 1;
    if (auto category = tag_category(element.name, parent_is_root)) {
      out_.push_back({element.first_line, at.line, open_.size(), *category,
                      element.name == kBuildTag});
    }
  }

 private:
  struct Open {
    std::string name;
    std::size_t first_line;
  };
  std::vector<Open> open_;
  std::vector<ElementSpan>& out_;
};

}  // namespace

std::string_view display_name(LocationCategory c) noexcept {
  for (const auto& entry : kLocationNames) {
    if (entry.category == c) return entry.display;
  }
  return "Unclassified";
}

std::optional<LocationCategory> parse_location(std::string_view name) {
  for (const auto& entry : kLocationNames) {
    if (entry.display == name || entry.ident == name) return entry.category;
  }
  return std::nullopt;
}

std::string sha256_hex(std::string_view content) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(content.data(), content.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::IoError, "SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0x0f]);
  }
  return out;
}

std::size_t count_nonblank_lines(std::string_view content) {
  const auto lines = split_lines(content);
  return static_cast<std::size_t>(
      std::count_if(lines.begin(), lines.end(), [](std::string_view l) { return !is_blank(l); }));
}

Discovery discover_build_files(const fs::path& root, const DiscoverOptions& options) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(ErrorCode::RootNotFound, "root directory not found: " + root.string());
  }

  Discovery result;
  std::vector<fs::path> found;
  fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot read " + root.string() + ": " + ec.message());
  for (const fs::recursive_directory_iterator end; it != end;) {
    const auto& entry = *it;
    std::error_code entry_ec;
    if (entry.is_regular_file(entry_ec) && entry.path().filename() == options.pattern) {
      found.push_back(entry.path());
    } else if (entry_ec) {
      result.issues.push_back({entry.path().lexically_relative(root).generic_string(),
                               entry_ec.message()});
    }
    it.increment(entry_ec);
    if (entry_ec) {
      result.issues.push_back({entry.path().lexically_relative(root).generic_string(),
                               entry_ec.message()});
      entry_ec.clear();
    }
  }

  // Files of a directory sort before its subdirectories: key is (parent, name).
  std::sort(found.begin(), found.end(), [&](const fs::path& a, const fs::path& b) {
    const auto ra = a.lexically_relative(root);
    const auto rb = b.lexically_relative(root);
    return std::forward_as_tuple(ra.parent_path().generic_string(), ra.filename().string()) <
           std::forward_as_tuple(rb.parent_path().generic_string(), rb.filename().string());
  });

  auto normalized = fs::absolute(root).lexically_normal();
  if (!normalized.has_filename()) normalized = normalized.parent_path();
  std::string root_name = normalized.filename().string();
  if (root_name.empty()) root_name = ".";
  for (const auto& path : found) {
    const auto rel = path.lexically_relative(root);
    BuildFile file;
    file.path = path;
    file.scan_path = rel.generic_string();
    auto first = rel.begin();
    const bool nested = std::distance(rel.begin(), rel.end()) > 1;
    if (options.single_repo || !nested) {
      file.repo_id = root_name;
      file.rel_path = rel.generic_string();
    } else {
      file.repo_id = first->string();
      file.rel_path = rel.lexically_relative(*first).generic_string();
    }
    try {
      const auto content = read_file(path);
      file.content_hash = sha256_hex(content);
      file.total_loc = count_nonblank_lines(content);
    } catch (const Error& e) {
      result.issues.push_back({rel.generic_string(), e.what()});
      continue;
    }
    result.files.push_back(std::move(file));
  }
  return result;
}

std::vector<BuildComment> extract_comments(const BuildFile& file, std::string_view content) {
  std::vector<BuildComment> out;
  CommentCollector collector(file, out);
  xml::scan(content, collector);
  return out;
}

std::optional<LocationCategory> tag_category(std::string_view tag, bool parent_is_root) {
  for (const auto& rule : kTagRules) {
    if (rule.tag == tag) {
      if (rule.root_only && !parent_is_root) return std::nullopt;
      return rule.category;
    }
  }
  return std::nullopt;
}

LocationCategory classify_location(const BuildComment& comment) {
  const auto& path = comment.enclosing_path;
  bool inside_build = false;
  for (std::size_t i = path.size(); i-- > 0;) {
    if (path[i] == kBuildTag) {
      inside_build = true;
      continue;
    }
    if (auto category = tag_category(path[i], i == 1)) return *category;
  }
  if (comment.annotated_sibling) {
    const auto& sibling = *comment.annotated_sibling;
    if (sibling == kBuildTag) return LocationCategory::BuildOrganization;
    if (auto category = tag_category(sibling, path.size() == 1)) return *category;
  }
  return inside_build ? LocationCategory::BuildOrganization : LocationCategory::Unclassified;
}

std::map<LocationCategory, std::size_t> measure_location_loc(std::string_view content) {
  std::vector<ElementSpan> spans;
  SpanCollector collector(spans);
  xml::scan(content, collector);

  const auto lines = split_lines(content);
  // Paint coarse to fine so the deepest element owns a line; <build> paints first.
  std::stable_sort(spans.begin(), spans.end(), [](const ElementSpan& a, const ElementSpan& b) {
    return std::make_tuple(!a.fallback, a.depth) < std::make_tuple(!b.fallback, b.depth);
  });
  std::vector<std::optional<LocationCategory>> owner(lines.size() + 1);
  for (const auto& span : spans) {
    for (std::size_t line = span.first_line; line <= span.last_line && line <= lines.size(); ++line) {
      owner[line] = span.category;
    }
  }

  std::map<LocationCategory, std::size_t> counts;
  for (auto c : kAllLocations) {
    if (c != LocationCategory::Unclassified) counts[c] = 0;
  }
  for (std::size_t line = 1; line <= lines.size(); ++line) {
    if (owner[line] && !is_blank(lines[line - 1])) ++counts[*owner[line]];
  }
  return counts;
}

}  // namespace pomdebt
