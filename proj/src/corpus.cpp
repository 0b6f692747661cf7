#include "pomdebt/corpus.hpp"

#include <fmt/format.h>

#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "pomdebt/error.hpp"
#include "pomdebt/parallel.hpp"

namespace pomdebt {

namespace {

struct FileOutcome {
  std::vector<BuildComment> comments;
  std::optional<std::string> error;
};

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

}  // namespace

CommentScan scan_comments(const std::filesystem::path& root, const DiscoverOptions& options,
                          unsigned threads) {
  auto discovery = discover_build_files(root, options);
  std::vector<FileOutcome> outcomes(discovery.files.size());
  parallel_for(discovery.files.size(), threads, [&](std::size_t i) {
    try {
      outcomes[i].comments = extract_comments(discovery.files[i], slurp(discovery.files[i].path));
    } catch (const Error& e) {
      outcomes[i].error = e.what();
    }
  });

  CommentScan scan;
  scan.skipped = std::move(discovery.issues);
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].error) {
      scan.skipped.push_back({discovery.files[i].scan_path, *outcomes[i].error});
    } else {
      scan.files.push_back({std::move(discovery.files[i]), std::move(outcomes[i].comments)});
    }
  }
  return scan;
}

CorpusScan scan_corpus(const std::filesystem::path& root, const KeywordSet& keywords,
                       const DiscoverOptions& options, unsigned threads) {
  auto comments = scan_comments(root, options, threads);
  CorpusScan out;
  out.skipped = std::move(comments.skipped);
  std::set<std::string> repos;
  for (const auto& f : comments.files) {
    repos.insert(f.file.repo_id);
    ++out.n_build_files;
    out.n_comments += f.comments.size();
    for (const auto& c : f.comments) {
      auto detection = detect_satd(c.text, keywords);
      if (!detection.is_satd) continue;
      SatdRecord r;
      r.comment = c;
      r.detection = std::move(detection);
      r.location = classify_location(c);
      out.records.push_back(std::move(r));
    }
  }
  out.n_repos = repos.size();
  out.n_satd = out.records.size();
  make_record_ids(out.records);
  return out;
}

CorpusScan detect_in_records(const std::vector<SatdRecord>& comments,
                             const KeywordSet& keywords) {
  CorpusScan out;
  std::set<std::string> repos;
  std::set<std::pair<std::string, std::string>> files;
  for (const auto& c : comments) {
    repos.insert(c.comment.repo);
    files.emplace(c.comment.repo, c.comment.path);
    ++out.n_comments;
    auto detection = detect_satd(c.comment.text, keywords);
    if (!detection.is_satd) continue;
    SatdRecord r = c;
    r.detection = std::move(detection);
    out.records.push_back(std::move(r));
  }
  out.n_repos = repos.size();
  out.n_build_files = files.size();
  out.n_satd = out.records.size();
  return out;
}

std::string format_corpus_summary(const CorpusScan& scan) {
  std::string out;
  out += fmt::format("{:>16} {:>14} {:>12} {:>17}\n", "# Maven repos", "# POM files",
                     "# Comments", "# SATD comments");
  out += fmt::format("{:>16} {:>14} {:>12} {:>17}\n", scan.n_repos, scan.n_build_files,
                     scan.n_comments, scan.n_satd);
  if (!scan.skipped.empty()) {
    out += fmt::format("skipped files: {}\n", scan.skipped.size());
    for (const auto& s : scan.skipped) out += fmt::format("  {}: {}\n", s.path, s.reason);
  }
  return out;
}

}  // namespace pomdebt
