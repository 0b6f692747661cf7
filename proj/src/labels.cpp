#include "pomdebt/labels.hpp"

#include <array>
#include <utility>

#include "pomdebt/error.hpp"

namespace pomdebt {
namespace {

template <typename E>
struct Named {
  E value;
  std::string_view display;
  std::string_view ident;
};

constexpr std::array<Named<ReasonCategory>, kReasonCategoryCount> kReasons = {{
    {ReasonCategory::Limitation, "Limitation", "Limitation"},
    {ReasonCategory::Dependency, "Dependency", "Dependency"},
    {ReasonCategory::RecursiveCall, "Recursive call", "RecursiveCall"},
    {ReasonCategory::Document, "Document", "Document"},
    {ReasonCategory::BuildBreak, "Build break", "BuildBreak"},
    {ReasonCategory::CompilerSetting, "Compiler setting", "CompilerSetting"},
    {ReasonCategory::CodeSmell, "Code smell", "CodeSmell"},
    {ReasonCategory::ChangePropagation, "Change propagation", "ChangePropagation"},
    {ReasonCategory::NoReason, "No reason", "NoReason"},
}};

struct SubInfo {
  Named<ReasonSubcategory> name;
  ReasonCategory parent;
};

constexpr std::array<SubInfo, 11> kSubcategories = {{
    {{ReasonSubcategory::ExternalLibraryLimitation, "External library limitation",
      "ExternalLibraryLimitation"},
     ReasonCategory::Limitation},
    {{ReasonSubcategory::ExternalToolLimitation, "External tool limitation",
      "ExternalToolLimitation"},
     ReasonCategory::Limitation},
    {{ReasonSubcategory::BuildToolLimitation, "Build tool limitation", "BuildToolLimitation"},
     ReasonCategory::Limitation},
    {{ReasonSubcategory::StaleDependency, "Stale dependency", "StaleDependency"},
     ReasonCategory::Dependency},
    {{ReasonSubcategory::MissingDependency, "Missing dependency", "MissingDependency"},
     ReasonCategory::Dependency},
    {{ReasonSubcategory::DependencyConflict, "Dependency conflict", "DependencyConflict"},
     ReasonCategory::Dependency},
    {{ReasonSubcategory::PostInstallDependencyResolution, "Post-install dependency resolution",
      "PostInstallDependencyResolution"},
     ReasonCategory::Dependency},
    {{ReasonSubcategory::SpecifyMetadata, "Specify metadata", "SpecifyMetadata"},
     ReasonCategory::Document},
    {{ReasonSubcategory::Licensing, "Licensing", "Licensing"}, ReasonCategory::Document},
    {{ReasonSubcategory::CompilerConfiguration, "Compiler configuration",
      "CompilerConfiguration"},
     ReasonCategory::CompilerSetting},
    {{ReasonSubcategory::SymbolVisibility, "Symbol visibility", "SymbolVisibility"},
     ReasonCategory::CompilerSetting},
}};

constexpr std::array<Named<PurposeLabel>, kPurposeCount> kPurposes = {{
    {PurposeLabel::DocumentForLaterFix, "Document for later fix", "DocumentForLaterFix"},
    {PurposeLabel::DocumentWorkaround, "Document workaround", "DocumentWorkaround"},
    {PurposeLabel::WarningForFutureDevelopers, "Warning for future developers",
     "WarningForFutureDevelopers"},
    {PurposeLabel::DocumentSuboptimalImplementationChoice,
     "Document suboptimal implementation choice", "DocumentSuboptimalImplementationChoice"},
    {PurposeLabel::PlaceholderForLaterExtension, "Placeholder for later extension",
     "PlaceholderForLaterExtension"},
    {PurposeLabel::SilenceBuildWarnings, "Silence build warnings", "SilenceBuildWarnings"},
}};

template <typename Table, typename E>
std::string_view lookup_display(const Table& table, E value) {
  for (const auto& entry : table) {
    if (entry.value == value) return entry.display;
  }
  return {};
}

template <typename Table>
auto lookup_name(const Table& table, std::string_view name)
    -> std::optional<decltype(table[0].value)> {
  for (const auto& entry : table) {
    if (entry.display == name || entry.ident == name) return entry.value;
  }
  return std::nullopt;
}

}  // namespace

ReasonCategory parent_category(ReasonSubcategory sub) noexcept {
  for (const auto& info : kSubcategories) {
    if (info.name.value == sub) return info.parent;
  }
  return ReasonCategory::NoReason;
}

ReasonLabel make_reason(ReasonCategory category, std::optional<ReasonSubcategory> sub) {
  if (sub && parent_category(*sub) != category) {
    throw Error(ErrorCode::UnknownCategory,
                std::string(display_name(*sub)) + " is not a subcategory of " +
                    std::string(display_name(category)));
  }
  return ReasonLabel{category, sub};
}

std::string_view display_name(ReasonCategory c) noexcept { return lookup_display(kReasons, c); }
std::string_view display_name(PurposeLabel p) noexcept { return lookup_display(kPurposes, p); }

std::string_view display_name(ReasonSubcategory s) noexcept {
  for (const auto& info : kSubcategories) {
    if (info.name.value == s) return info.name.display;
  }
  return {};
}

std::optional<ReasonCategory> parse_reason_category(std::string_view name) {
  return lookup_name(kReasons, name);
}

std::optional<ReasonSubcategory> parse_reason_subcategory(std::string_view name) {
  for (const auto& info : kSubcategories) {
    if (info.name.display == name || info.name.ident == name) return info.name.value;
  }
  return std::nullopt;
}

std::optional<PurposeLabel> parse_purpose(std::string_view name) {
  return lookup_name(kPurposes, name);
}

std::string_view to_string(Task task) noexcept {
  return task == Task::Reason ? "reason" : "purpose";
}

std::optional<Task> parse_task(std::string_view name) {
  if (name == "reason") return Task::Reason;
  if (name == "purpose") return Task::Purpose;
  return std::nullopt;
}

const std::vector<std::string>& merged_label_names(Task task) {
  static const std::vector<std::string> reason = {"Limitation", "Dependency", "Other"};
  static const std::vector<std::string> purpose = {
      "Document for later fix", "Document workaround", "Warning for future developers",
      "Document suboptimal implementation choice", "Other"};
  return task == Task::Reason ? reason : purpose;
}

std::string_view MergedLabel::name() const { return merged_label_names(task).at(value); }

std::optional<MergedLabel> parse_merged(Task task, std::string_view name) {
  const auto& names = merged_label_names(task);
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return MergedLabel{task, i};
  }
  return std::nullopt;
}

MergedLabel merge_labels(const ReasonLabel& label) {
  switch (label.category) {
    case ReasonCategory::Limitation: return {Task::Reason, 0};
    case ReasonCategory::Dependency: return {Task::Reason, 1};
    default: return {Task::Reason, 2};
  }
}

MergedLabel merge_labels(PurposeLabel label) {
  switch (label) {
    case PurposeLabel::DocumentForLaterFix: return {Task::Purpose, 0};
    case PurposeLabel::DocumentWorkaround: return {Task::Purpose, 1};
    case PurposeLabel::WarningForFutureDevelopers: return {Task::Purpose, 2};
    case PurposeLabel::DocumentSuboptimalImplementationChoice: return {Task::Purpose, 3};
    default: return {Task::Purpose, 4};
  }
}

}  // namespace pomdebt
