#pragma once

// The three passes wired together, plus file helpers shared by the tools.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cycpp/accumulator.hpp"
#include "cycpp/codegen.hpp"
#include "cycpp/normalizer.hpp"

namespace cycpp {

struct PipelineOptions {
  std::string file_name = "<stdin>";
  std::vector<std::string> include_dirs;  // searched after the file's own directory
  std::map<std::string, std::string> defines;
  AccumulateOptions accumulate;
};

struct PipelineResult {
  NormalizedSource normalized;
  Registry registry;
  GenerateResult generated;
};

/// Passes 1 and 2.
Registry annotate(std::string_view source, const PipelineOptions& options = {});

/// Passes 1 to 3; `generated.text` is the rewritten original source.
PipelineResult preprocess(std::string_view source, const PipelineOptions& options = {});

/// Errors: IoError.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);

}  // namespace cycpp
