#include "cycpp/pipeline.hpp"

#include <fstream>
#include <sstream>

namespace cycpp {

namespace {

NormalizeOptions normalize_options(const PipelineOptions& options) {
  NormalizeOptions n;
  n.file_name = options.file_name;
  n.predefines = options.defines;
  std::vector<std::string> dirs;
  auto parent = std::filesystem::path(options.file_name).parent_path();
  dirs.push_back(parent.empty() ? "." : parent.string());
  dirs.insert(dirs.end(), options.include_dirs.begin(), options.include_dirs.end());
  n.include_resolver = directory_resolver(std::move(dirs));
  return n;
}

}  // namespace

Registry annotate(std::string_view source, const PipelineOptions& options) {
  return accumulate(normalize(source, normalize_options(options)), options.accumulate);
}

PipelineResult preprocess(std::string_view source, const PipelineOptions& options) {
  PipelineResult r;
  r.normalized = normalize(source, normalize_options(options));
  r.registry = accumulate(r.normalized, options.accumulate);
  GenerateOptions g;
  g.file_name = options.file_name;
  r.generated = generate(source, r.registry, g);
  return r;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorKind::IoError, "write to '" + path.string() + "' failed");
}

}  // namespace cycpp
