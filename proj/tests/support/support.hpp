#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pomdebt/record.hpp"

namespace pomdebt::test {

inline std::filesystem::path fixtures() { return POMDEBT_FIXTURES; }
inline std::filesystem::path cli_binary() { return POMDEBT_CLI; }

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

/// Fresh, empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

/// Labelled SATD records whose text mixes class-specific keyword templates
/// with shared noise tokens. Both reason and purpose labels are set; class
/// sizes are uneven. Same (n, seed) gives the same records.
std::vector<SatdRecord> synthetic_corpus(std::size_t n, std::uint64_t seed);

/// Exit status and captured stdout of a shell command.
struct RunResult {
  int status = -1;
  std::string out;
};
RunResult run(const std::string& command);

}  // namespace pomdebt::test
