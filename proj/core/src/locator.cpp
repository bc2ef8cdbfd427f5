#include "cycpp/locator.hpp"

#include <cstdlib>
#include <system_error>

#ifndef CYCPP_INSTALL_LIBDIR
#define CYCPP_INSTALL_LIBDIR "/usr/local/lib"
#endif
#ifndef CYCPP_BUILD_LIBDIR
#define CYCPP_BUILD_LIBDIR "."
#endif

namespace cycpp {

ArchetypeSpec parse_spec(std::string_view text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto colon = text.find(':', start);
    parts.emplace_back(text.substr(start, colon == std::string_view::npos ? colon : colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() > 3) {
    throw Error(ErrorKind::TooManyColons,
                "archetype spec '" + std::string(text) + "' has more than two colons");
  }
  ArchetypeSpec spec;
  spec.archetype = parts.back();
  if (spec.archetype.empty()) {
    throw Error(ErrorKind::EmptyArchetypeName,
                "archetype spec '" + std::string(text) + "' names no archetype");
  }
  if (parts.size() >= 2) spec.library = parts[parts.size() - 2];
  if (parts.size() == 3) spec.path = parts[0];
  if (spec.library.empty()) spec.library = spec.archetype;
  // Paths are sub-directories of each search directory.
  while (!spec.path.empty() && spec.path.front() == '/') spec.path.erase(0, 1);
  return spec;
}

const std::vector<std::string>& library_extensions() {
  static const std::vector<std::string> exts = {".so", ".dylib", ".dll"};
  return exts;
}

std::filesystem::path search(const ArchetypeSpec& spec,
                             const std::vector<std::filesystem::path>& dirs) {
  std::string tried;
  for (const auto& d : dirs) {
    std::filesystem::path base = spec.path.empty() ? d : d / spec.path;
    for (const auto& ext : library_extensions()) {
      auto candidate = base / ("lib" + spec.library + ext);
      std::error_code ec;
      if (std::filesystem::is_regular_file(candidate, ec)) return candidate;
    }
    tried += tried.empty() ? "" : ", ";
    tried += base.string();
  }
  throw Error(ErrorKind::NotFound, "archetype '" + spec.render() + "' not found in [" + tried + "]");
}

std::vector<std::filesystem::path> default_search_dirs(
    const std::optional<std::string>& cyclus_path, const std::filesystem::path& cwd,
    const std::filesystem::path& install, const std::filesystem::path& build) {
  std::vector<std::filesystem::path> out;
  if (cyclus_path) {
    std::size_t start = 0;
    const std::string& s = *cyclus_path;
    while (start <= s.size()) {
      auto sep = s.find(':', start);
      std::string entry = s.substr(start, sep == std::string::npos ? sep : sep - start);
      if (!entry.empty()) out.emplace_back(entry);
      if (sep == std::string::npos) break;
      start = sep + 1;
    }
  }
  out.push_back(cwd);
  out.push_back(install);
  out.push_back(build);
  return out;
}

std::filesystem::path install_dir() { return CYCPP_INSTALL_LIBDIR; }
std::filesystem::path build_dir() { return CYCPP_BUILD_LIBDIR; }

std::vector<std::filesystem::path> default_search_dirs() {
  std::optional<std::string> env;
  if (const char* v = std::getenv("CYCLUS_PATH")) env = v;
  std::error_code ec;
  auto cwd = std::filesystem::current_path(ec);
  if (ec) cwd = ".";
  return default_search_dirs(env, cwd, install_dir(), build_dir());
}

}  // namespace cycpp
