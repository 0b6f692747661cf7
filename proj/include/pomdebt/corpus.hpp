#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "pomdebt/keywords.hpp"
#include "pomdebt/pom_scan.hpp"
#include "pomdebt/record.hpp"

namespace pomdebt {

struct ScannedFile {
  BuildFile file;
  std::vector<BuildComment> comments;
};

struct CommentScan {
  std::vector<ScannedFile> files;  // parsed successfully, discovery order
  std::vector<ScanIssue> skipped;  // unreadable or malformed files
};

/// discover_build_files + extract_comments. Per-file work runs on `threads`
/// workers; results keep discovery order.
CommentScan scan_comments(const std::filesystem::path& root, const DiscoverOptions& options = {},
                          unsigned threads = 1);

struct CorpusScan {
  std::size_t n_repos = 0;
  std::size_t n_build_files = 0;
  std::size_t n_comments = 0;
  std::size_t n_satd = 0;
  std::vector<SatdRecord> records;  // SATD-positive only
  std::vector<ScanIssue> skipped;
};

/// Composes scan_comments, detect_satd and classify_location.
CorpusScan scan_corpus(const std::filesystem::path& root, const KeywordSet& keywords,
                       const DiscoverOptions& options = {}, unsigned threads = 1);

/// Same, over already-extracted comment records (e.g. a `scan` JSONL file).
CorpusScan detect_in_records(const std::vector<SatdRecord>& comments, const KeywordSet& keywords);

/// Corpus summary in the layout of a dataset-overview table.
std::string format_corpus_summary(const CorpusScan& scan);

}  // namespace pomdebt
