#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pomdebt {

/// Build-file regions a comment can annotate. The first nine mirror the
/// location taxonomy; Unclassified keeps classification total.
enum class LocationCategory {
  PluginConfiguration,
  ExternalDependenciesConfiguration,
  BuildVariables,
  MultiDirectoryConfiguration,
  ResourceConfiguration,
  RepositoryConfiguration,
  ProjectMetadata,
  BuildOrganization,
  SoftwareConfigurationManagement,
  Unclassified,
};

inline constexpr std::array<LocationCategory, 10> kAllLocations = {
    LocationCategory::PluginConfiguration,
    LocationCategory::ExternalDependenciesConfiguration,
    LocationCategory::BuildVariables,
    LocationCategory::MultiDirectoryConfiguration,
    LocationCategory::ResourceConfiguration,
    LocationCategory::RepositoryConfiguration,
    LocationCategory::ProjectMetadata,
    LocationCategory::BuildOrganization,
    LocationCategory::SoftwareConfigurationManagement,
    LocationCategory::Unclassified,
};

/// Display name, e.g. "Plugin configuration".
std::string_view display_name(LocationCategory c) noexcept;
/// Accepts the display name or the enumerator spelling ("PluginConfiguration").
std::optional<LocationCategory> parse_location(std::string_view name);

struct BuildFile {
  std::string repo_id;
  std::string rel_path;  // relative to the repository directory, '/' separated
  std::string content_hash;  // SHA-256, lowercase hex
  std::size_t total_loc = 0;  // non-blank lines
  std::string scan_path;  // relative to the scan root
  std::filesystem::path path;  // on-disk location
};

struct BuildComment {
  std::string repo;
  std::string path;  // BuildFile::rel_path
  std::string text;  // bytes between "<!--" and "-->"
  std::size_t line_start = 0;
  std::size_t line_end = 0;
  std::vector<std::string> enclosing_path;
  std::optional<std::string> annotated_sibling;

  friend bool operator==(const BuildComment&, const BuildComment&) = default;
};

struct ScanIssue {
  std::string path;
  std::string reason;
};

struct DiscoverOptions {
  std::string pattern = "pom.xml";
  /// Treat the scan root itself as one repository instead of one repository
  /// per top-level directory.
  bool single_repo = false;
};

struct Discovery {
  std::vector<BuildFile> files;
  std::vector<ScanIssue> issues;
};

/// Recursively collects build files under `root`, ordered by (directory,
/// filename). Unreadable entries are recorded in `issues` and skipped.
/// Throws Error{RootNotFound} when root is not a directory.
Discovery discover_build_files(const std::filesystem::path& root,
                               const DiscoverOptions& options = {});

/// Content digest and LOC for an in-memory build file.
std::string sha256_hex(std::string_view content);
std::size_t count_nonblank_lines(std::string_view content);

/// Every comment of `content` in document order. Throws ParseError.
std::vector<BuildComment> extract_comments(const BuildFile& file, std::string_view content);

/// Category of a single tag given its parent tag (empty parent: top level).
/// Project metadata tags only count directly under the document root; `build`
/// is reported here but callers treat it as the lowest-priority match.
std::optional<LocationCategory> tag_category(std::string_view tag, bool parent_is_root);

/// Deterministic location of a comment: deepest recognized ancestor, then the
/// annotated sibling, then an enclosing <build>; otherwise Unclassified.
LocationCategory classify_location(const BuildComment& comment);

/// Non-blank lines attributed to each mapped category (deepest element wins,
/// <build> only claims lines no deeper element claims). Contains an entry for
/// each of the nine mapped categories. Throws ParseError.
std::map<LocationCategory, std::size_t> measure_location_loc(std::string_view content);

}  // namespace pomdebt
