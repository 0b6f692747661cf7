#pragma once

// Reason / purpose taxonomy for coded SATD comments and the merged label sets
// the classifiers are trained on.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pomdebt {

enum class ReasonCategory {
  Limitation,
  Dependency,
  RecursiveCall,
  Document,
  BuildBreak,
  CompilerSetting,
  CodeSmell,
  ChangePropagation,
  NoReason,
};

enum class ReasonSubcategory {
  ExternalLibraryLimitation,
  ExternalToolLimitation,
  BuildToolLimitation,
  StaleDependency,
  MissingDependency,
  DependencyConflict,
  PostInstallDependencyResolution,
  SpecifyMetadata,
  Licensing,
  CompilerConfiguration,
  SymbolVisibility,
};

enum class PurposeLabel {
  DocumentForLaterFix,
  DocumentWorkaround,
  WarningForFutureDevelopers,
  DocumentSuboptimalImplementationChoice,
  PlaceholderForLaterExtension,
  SilenceBuildWarnings,
};

inline constexpr std::size_t kReasonCategoryCount = 9;
inline constexpr std::size_t kPurposeCount = 6;

/// A reason code. Construct through make_reason to enforce the nesting.
struct ReasonLabel {
  ReasonCategory category = ReasonCategory::NoReason;
  std::optional<ReasonSubcategory> subcategory;

  friend bool operator==(const ReasonLabel&, const ReasonLabel&) = default;
};

ReasonCategory parent_category(ReasonSubcategory sub) noexcept;

/// Throws Error{UnknownCategory} when `sub` does not nest under `category`.
ReasonLabel make_reason(ReasonCategory category,
                        std::optional<ReasonSubcategory> sub = std::nullopt);

std::string_view display_name(ReasonCategory c) noexcept;
std::string_view display_name(ReasonSubcategory s) noexcept;
std::string_view display_name(PurposeLabel p) noexcept;

// Parsers accept the display name ("External library limitation") or the
// enumerator spelling ("ExternalLibraryLimitation").
std::optional<ReasonCategory> parse_reason_category(std::string_view name);
std::optional<ReasonSubcategory> parse_reason_subcategory(std::string_view name);
std::optional<PurposeLabel> parse_purpose(std::string_view name);

enum class Task { Reason, Purpose };

std::string_view to_string(Task task) noexcept;
std::optional<Task> parse_task(std::string_view name);

/// Index into merged_label_names(task); the order is the canonical
/// tie-breaking order everywhere.
struct MergedLabel {
  Task task = Task::Reason;
  std::size_t value = 0;

  std::string_view name() const;

  friend bool operator==(const MergedLabel&, const MergedLabel&) = default;
};

/// Reason: Limitation, Dependency, Other.
/// Purpose: Document for later fix, Document workaround, Warning for future
/// developers, Document suboptimal implementation choice, Other.
const std::vector<std::string>& merged_label_names(Task task);
std::optional<MergedLabel> parse_merged(Task task, std::string_view name);

MergedLabel merge_labels(const ReasonLabel& label);
MergedLabel merge_labels(PurposeLabel label);
inline MergedLabel merge_labels(MergedLabel label) { return label; }

}  // namespace pomdebt
