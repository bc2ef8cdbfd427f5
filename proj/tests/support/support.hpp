#pragma once

// Shared helpers for the unit and acceptance tests: fixtures, a structural
// comparison for generated C++, and a few reusable oracle drivers.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cycpp/accumulator.hpp"

namespace testsupport {

std::filesystem::path fixture_path(std::string_view name);
std::string read_fixture(std::string_view name);

/// Passes 1 and 2 over a fixture file.
cycpp::Registry registry_for(std::string_view fixture);
/// Passes 1 and 2 over an in-memory source.
cycpp::Registry registry_from(std::string_view source,
                              const cycpp::AccumulateOptions& options = {});

/// C++ tokens with comments dropped and adjacent string literals merged into
/// one token (the contents of each literal concatenated, quotes kept).
std::vector<std::string> cpp_tokens(std::string_view source);

/// Undoes C++ string-literal escaping (no surrounding quotes).
std::string unescape_cpp(std::string_view body);

struct GoldenResult {
  bool equal = false;
  std::string detail;
};

/// Token-wise comparison of generated against expected source. String
/// literals that hold an annotations object are compared as parsed JSON
/// (key order included) after removing `exempt` keys at the top level.
GoldenResult golden_compare(std::string_view actual, std::string_view expected,
                            const std::set<std::string>& exempt = {});

/// Non-blank lines from the first `class` line to the matching `};`.
int class_body_lines(std::string_view source);

struct TempDir {
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  std::filesystem::path path;
};

void touch(const std::filesystem::path& p);

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Runs `argv` through the shell with stdout and stderr captured.
CommandResult run_command(const std::vector<std::string>& argv);

// -- oracle drivers ---------------------------------------------------------

struct AliasFuzzReport {
  int graphs = 0;
  int queries = 0;
  int mismatches = 0;
  std::string first_mismatch;
};

/// Random acyclic alias graphs with chains of at most `max_depth` edges;
/// checks resolve_alias and canonicalize against iterated substitution.
AliasFuzzReport alias_fuzz(int graphs, int max_depth, std::uint64_t seed);

struct FilterCorpusReport {
  std::size_t lines = 0;
  std::size_t agreeing = 0;
  std::set<cycpp::FilterId> covered;
  std::size_t max_transformations = 0;
  std::string first_disagreement;
};

/// Statements designed to hit one filter each, with the filter expected.
const std::vector<std::pair<std::string, std::optional<cycpp::FilterId>>>& filter_corpus();
FilterCorpusReport run_filter_corpus();

}  // namespace testsupport
