#pragma once

// Archetype specifications (`path:library:archetype`) and the directory
// search that maps them to shared-library files.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cycpp/error.hpp"

namespace cycpp {

struct ArchetypeSpec {
  std::string path;  // slash-separated sub-directory, may be empty
  std::string library;
  std::string archetype;

  /// Always the three-part form.
  std::string render() const { return path + ":" + library + ":" + archetype; }

  friend bool operator==(const ArchetypeSpec&, const ArchetypeSpec&) = default;
};

/// Errors: EmptyArchetypeName, TooManyColons.
ArchetypeSpec parse_spec(std::string_view text);

/// Extensions probed, in order.
const std::vector<std::string>& library_extensions();

/// First `d/<path>/lib<library><ext>` that exists. Errors: NotFound.
std::filesystem::path search(const ArchetypeSpec& spec,
                             const std::vector<std::filesystem::path>& dirs);

/// Entries of CYCLUS_PATH (when given) followed by the working, install and
/// build directories.
std::vector<std::filesystem::path> default_search_dirs(
    const std::optional<std::string>& cyclus_path, const std::filesystem::path& cwd,
    const std::filesystem::path& install_dir, const std::filesystem::path& build_dir);

/// Same, reading CYCLUS_PATH and the current directory from the process.
std::vector<std::filesystem::path> default_search_dirs();

std::filesystem::path install_dir();
std::filesystem::path build_dir();

}  // namespace cycpp
