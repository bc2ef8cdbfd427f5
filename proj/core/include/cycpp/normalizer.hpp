#pragma once

// Pass 1: a small C preprocessor. Handles object-like macros, #include,
// #undef, a restricted #if family and comment stripping, and records the
// origin of every surviving line so later passes can report file:line.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cycpp/error.hpp"

namespace cycpp {

struct Linemarker {
  enum Flag : unsigned { kNone = 0, kEnterFile = 1, kReturnFile = 2 };

  int line_number = 1;
  std::string file_name;
  unsigned flags = kNone;

  /// `# <n> "<file>"` followed by ` 1` / ` 2` for enter/return flags.
  std::string render() const;

  friend bool operator==(const Linemarker&, const Linemarker&) = default;
};

/// Recognizes `# <int> "<file>" [flags]`. Anything else yields nullopt.
std::optional<Linemarker> parse_linemarker(std::string_view line);

struct NormalizedLine {
  std::string text;
  SourceLocation origin;
  unsigned marker_flags = Linemarker::kNone;  // flags for a marker preceding this line
};

struct NormalizedSource {
  std::string file_name;
  std::vector<NormalizedLine> lines;
  std::vector<std::string> warnings;

  /// Text form with linemarkers wherever origins are not consecutive, which
  /// is what pass 2 consumes.
  std::string render() const;
};

/// Returns the contents of an include target, or nullopt if it cannot be found.
/// The flag is true for `<angled>` includes.
using IncludeResolver =
    std::function<std::optional<std::string>(const std::string& name, bool angled)>;

IncludeResolver map_resolver(std::map<std::string, std::string> files);
IncludeResolver directory_resolver(std::vector<std::string> dirs);

struct NormalizeOptions {
  std::string file_name = "<stdin>";
  IncludeResolver include_resolver;
  std::map<std::string, std::string> predefines;
  int max_include_depth = 64;
};

NormalizedSource normalize(std::string_view source, const NormalizeOptions& options = {});

/// True for lines whose first token sequence is `#pragma cyclus`.
bool is_pragma_cyclus(std::string_view line);

}  // namespace cycpp
