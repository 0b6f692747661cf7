#include "support.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pomdebt/random.hpp"

namespace pomdebt::test {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("pomdebt-" + std::to_string(::getpid()) + "-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

namespace {

struct ReasonTemplate {
  ReasonCategory category;
  std::optional<ReasonSubcategory> sub;
  std::vector<std::string> words;
};

struct PurposeTemplate {
  PurposeLabel purpose;
  std::vector<std::string> words;
};

const std::vector<ReasonTemplate>& reason_templates() {
  static const std::vector<ReasonTemplate> t = {
      {ReasonCategory::Limitation, ReasonSubcategory::ExternalToolLimitation,
       {"plugin", "cannot", "limitation", "unsupported", "does", "not", "support", "tool"}},
      {ReasonCategory::Dependency, ReasonSubcategory::DependencyConflict,
       {"dependency", "version", "conflict", "artifact", "exclusion", "transitive", "upgrade",
        "jar"}},
      {ReasonCategory::BuildBreak, std::nullopt,
       {"build", "fails", "failure", "error", "compile", "break", "ci", "red"}},
      {ReasonCategory::Document, ReasonSubcategory::SpecifyMetadata,
       {"describe", "metadata", "license", "description", "fill", "header", "name", "docs"}},
  };
  return t;
}

const std::vector<PurposeTemplate>& purpose_templates() {
  static const std::vector<PurposeTemplate> t = {
      {PurposeLabel::DocumentForLaterFix, {"later", "revisit", "fix", "next", "release"}},
      {PurposeLabel::DocumentWorkaround, {"workaround", "around", "hack", "bypass", "trick"}},
      {PurposeLabel::WarningForFutureDevelopers, {"careful", "warning", "never", "keep", "must"}},
      {PurposeLabel::DocumentSuboptimalImplementationChoice,
       {"ugly", "suboptimal", "better", "cleaner", "ideally"}},
      {PurposeLabel::SilenceBuildWarnings, {"silence", "quiet", "suppress", "noisy", "warnings"}},
  };
  return t;
}

const std::vector<std::string>& noise_words() {
  static const std::vector<std::string> words = {
      "the",    "a",      "for",   "this",  "we",      "it",     "of",     "in",    "to",
      "maven",  "module", "pom",   "here",  "see",     "and",    "is",     "when",  "with",
      "until",  "from",   "java",  "test",  "project", "config", "value",  "set",   "use",
      "needed", "now",    "still", "also",  "our",     "then",   "again",  "only",  "after"};
  return words;
}

// Index drawn with probability proportional to its weight.
std::size_t draw_weighted(SplitMix& rng, const std::vector<unsigned>& weights) {
  unsigned total = 0;
  for (auto w : weights) total += w;
  auto x = static_cast<unsigned>(rng.below(total));
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (x < weights[i]) return i;
    x -= weights[i];
  }
  return weights.size() - 1;
}

}  // namespace

std::vector<SatdRecord> synthetic_corpus(std::size_t n, std::uint64_t seed) {
  SplitMix rng(seed);
  const std::vector<unsigned> reason_weights = {40, 30, 18, 12};
  const std::vector<unsigned> purpose_weights = {30, 28, 18, 14, 10};
  std::vector<SatdRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& rt = reason_templates()[draw_weighted(rng, reason_weights)];
    const auto& pt = purpose_templates()[draw_weighted(rng, purpose_weights)];
    std::vector<std::string> words;
    const auto n_reason = 2 + rng.below(3);
    for (std::uint64_t k = 0; k < n_reason; ++k) words.push_back(rt.words[rng.below(rt.words.size())]);
    const auto n_purpose = 1 + rng.below(2);
    for (std::uint64_t k = 0; k < n_purpose; ++k) words.push_back(pt.words[rng.below(pt.words.size())]);
    const auto n_noise = 3 + rng.below(5);
    for (std::uint64_t k = 0; k < n_noise; ++k) {
      words.push_back(noise_words()[rng.below(noise_words().size())]);
    }
    shuffle(words, rng);
    std::string text = " TODO";
    for (const auto& w : words) text += " " + w;
    text += " ";

    SatdRecord r;
    r.comment.repo = "synthetic";
    r.comment.path = "m" + std::to_string(i % 25) + "/pom.xml";
    r.comment.line_start = r.comment.line_end = 10 + i;
    r.comment.enclosing_path = {"project", "build", "plugins"};
    r.comment.text = text;
    r.id = record_id(r.comment);
    r.detection = {true, {"todo"}};
    r.location = LocationCategory::PluginConfiguration;
    r.reason = ReasonLabel{rt.category, rt.sub};
    r.purpose = pt.purpose;
    out.push_back(std::move(r));
  }
  return out;
}

RunResult run(const std::string& command) {
  RunResult result;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (!pipe) return result;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) result.out.append(buf.data(), got);
  const int status = ::pclose(pipe);
  result.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

}  // namespace pomdebt::test
