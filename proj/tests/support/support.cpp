#include "support.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cycpp/normalizer.hpp"
#include "cycpp/pipeline.hpp"
#include "cycpp/type_system.hpp"

namespace testsupport {

std::filesystem::path fixture_path(std::string_view name) {
  return std::filesystem::path(CYCPP_FIXTURE_DIR) / std::string(name);
}

std::string read_fixture(std::string_view name) { return cycpp::read_file(fixture_path(name)); }

cycpp::Registry registry_for(std::string_view fixture) {
  cycpp::PipelineOptions o;
  o.file_name = fixture_path(fixture).string();
  return cycpp::annotate(read_fixture(fixture), o);
}

cycpp::Registry registry_from(std::string_view source, const cycpp::AccumulateOptions& options) {
  cycpp::NormalizeOptions n;
  n.file_name = "<test>";
  return cycpp::accumulate(cycpp::normalize(source, n), options);
}

// ---------------------------------------------------------------------------

std::vector<std::string> cpp_tokens(std::string_view s) {
  std::vector<std::string> toks;
  bool last_was_string = false;
  std::size_t i = 0;
  auto ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  static const char* ops[] = {"::", "->", "++", "--", "==", "!=", "<=", ">=", "&&", "||", "<<"};
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (s.substr(i, 2) == "//") {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    if (s.substr(i, 2) == "/*") {
      auto end = s.find("*/", i + 2);
      i = end == std::string_view::npos ? s.size() : end + 2;
      continue;
    }
    if (c == '"') {
      std::size_t j = i + 1;
      while (j < s.size() && s[j] != '"') j += s[j] == '\\' ? 2 : 1;
      std::string body(s.substr(i + 1, j - i - 1));
      i = j + 1;
      if (last_was_string) {
        toks.back().insert(toks.back().size() - 1, body);
      } else {
        toks.push_back("\"" + body + "\"");
      }
      last_was_string = true;
      continue;
    }
    last_was_string = false;
    if (c == '\'') {
      std::size_t j = i + 1;
      while (j < s.size() && s[j] != '\'') j += s[j] == '\\' ? 2 : 1;
      toks.emplace_back(s.substr(i, j + 1 - i));
      i = j + 1;
      continue;
    }
    if (ident(c)) {
      std::size_t j = i;
      while (j < s.size() && (ident(s[j]) || (s[j] == '.' && std::isdigit(static_cast<unsigned char>(c))) ||
                              ((s[j] == '+' || s[j] == '-') && j > i && (s[j - 1] == 'e' || s[j - 1] == 'E') &&
                               std::isdigit(static_cast<unsigned char>(c))))) {
        ++j;
      }
      toks.emplace_back(s.substr(i, j - i));
      i = j;
      continue;
    }
    bool matched = false;
    for (const char* op : ops) {
      if (s.substr(i, 2) == op) {
        toks.emplace_back(op);
        i += 2;
        matched = true;
        break;
      }
    }
    if (!matched) {
      toks.emplace_back(1, c);
      ++i;
    }
  }
  return toks;
}

std::string unescape_cpp(std::string_view body) {
  std::string out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c != '\\' || i + 1 == body.size()) {
      out += c;
      continue;
    }
    char e = body[++i];
    switch (e) {
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case 'r': out += '\r'; break;
      case '0': case '1': case '2': case '3': case '4': case '5': case '6': case '7': {
        int v = 0, n = 0;
        while (n < 3 && i < body.size() && body[i] >= '0' && body[i] <= '7') {
          v = v * 8 + (body[i] - '0');
          ++i;
          ++n;
        }
        --i;
        out += static_cast<char>(v);
        break;
      }
      default: out += e;
    }
  }
  return out;
}

namespace {

std::optional<nlohmann::ordered_json> annotation_json(const std::string& token) {
  if (token.size() < 2 || token.front() != '"') return std::nullopt;
  std::string text = unescape_cpp(std::string_view(token).substr(1, token.size() - 2));
  if (text.rfind("{\"name\"", 0) != 0) return std::nullopt;
  try {
    return nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

}  // namespace

GoldenResult golden_compare(std::string_view actual, std::string_view expected,
                            const std::set<std::string>& exempt) {
  auto a = cpp_tokens(actual);
  auto e = cpp_tokens(expected);
  GoldenResult r;
  std::size_t n = std::min(a.size(), e.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == e[i]) continue;
    auto ja = annotation_json(a[i]);
    auto je = annotation_json(e[i]);
    if (ja && je) {
      for (const auto& k : exempt) {
        ja->erase(k);
        je->erase(k);
      }
      if (ja->dump() == je->dump()) continue;
      r.detail = "annotations differ:\n  got      " + ja->dump() + "\n  expected " + je->dump();
      return r;
    }
    r.detail = "token " + std::to_string(i) + ": got '" + a[i] + "', expected '" + e[i] + "'";
    return r;
  }
  if (a.size() != e.size()) {
    r.detail = "token counts differ: " + std::to_string(a.size()) + " vs " +
               std::to_string(e.size());
    return r;
  }
  r.equal = true;
  return r;
}

int class_body_lines(std::string_view source) {
  std::istringstream in{std::string(source)};
  std::string line;
  int count = 0;
  bool inside = false;
  while (std::getline(in, line)) {
    if (!inside && line.rfind("class ", 0) == 0) inside = true;
    if (inside) {
      ++count;
      if (line == "};") break;
    }
  }
  return count;
}

// ---------------------------------------------------------------------------

TempDir::TempDir() {
  std::string tmpl = (std::filesystem::temp_directory_path() / "cycpp-test-XXXXXX").string();
  if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
  path = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path, ec);
}

void touch(const std::filesystem::path& p) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream(p) << "";
}

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

}  // namespace

CommandResult run_command(const std::vector<std::string>& argv) {
  TempDir tmp;
  auto out_path = tmp.path / "out";
  auto err_path = tmp.path / "err";
  std::string cmd;
  for (const auto& a : argv) cmd += shell_quote(a) + " ";
  cmd += ">" + shell_quote(out_path.string()) + " 2>" + shell_quote(err_path.string());
  int status = std::system(cmd.c_str());
  CommandResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = cycpp::read_file(out_path);
  r.err = cycpp::read_file(err_path);
  return r;
}

// ---------------------------------------------------------------------------

AliasFuzzReport alias_fuzz(int graphs, int max_depth, std::uint64_t seed) {
  static const std::vector<std::string> leaves = {"int", "double", "float", "bool",
                                                  "std::string"};
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) {
    return static_cast<std::size_t>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
  };
  auto coin = [&](double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; };

  AliasFuzzReport report;
  for (int g = 0; g < graphs; ++g) {
    ++report.graphs;
    std::size_t nodes = 1 + pick(12);
    std::vector<std::string> names;
    std::vector<int> depth;
    std::map<std::string, std::string> edges;
    cycpp::TypeScope scope;
    for (std::size_t k = 0; k < nodes; ++k) {
      std::string name = "t" + std::to_string(g) + "_" + std::to_string(k);
      std::vector<std::size_t> usable;
      for (std::size_t j = 0; j < names.size(); ++j) {
        if (depth[j] < max_depth) usable.push_back(j);
      }
      std::string target;
      int d = 1;
      if (usable.empty() || coin(0.3)) {
        target = leaves[pick(leaves.size())];
      } else {
        std::size_t j = usable[pick(usable.size())];
        target = names[j];
        d = depth[j] + 1;
        if (coin(0.15)) {
          target = "std::vector<" + target + ">";
        } else if (coin(0.1)) {
          target = "std::map<" + leaves[pick(3)] + ", " + target + ">";
        }
      }
      scope.add_alias(name, target);
      edges[name] = target;
      names.push_back(name);
      depth.push_back(d);
    }

    std::function<std::string(const std::string&)> substitute = [&](const std::string& text) {
      auto it = edges.find(text);
      if (it != edges.end()) return substitute(it->second);
      auto lt = text.find('<');
      if (lt == std::string::npos) return text;
      std::string inner = text.substr(lt + 1, text.size() - lt - 2);
      std::string head = text.substr(0, lt + 1);
      auto comma = inner.find(", ");
      if (comma != std::string::npos) {
        return head + substitute(inner.substr(0, comma)) + ", " +
               substitute(inner.substr(comma + 2)) + ">";
      }
      return head + substitute(inner) + ">";
    };

    for (const auto& name : names) {
      ++report.queries;
      std::string cur = name;
      while (edges.count(cur)) cur = edges[cur];
      std::string got = cycpp::resolve_alias(name, scope);
      std::string canon = cycpp::canonicalize(name, scope).cpp();
      std::string want_canon = substitute(name);
      if (got != cur || canon != want_canon) {
        if (report.mismatches++ == 0) {
          report.first_mismatch = name + ": resolve_alias gave '" + got + "' (oracle '" + cur +
                                  "'), canonicalize gave '" + canon + "' (oracle '" +
                                  want_canon + "')";
        }
      }
    }
  }
  return report;
}

const std::vector<std::pair<std::string, std::optional<cycpp::FilterId>>>& filter_corpus() {
  using F = cycpp::FilterId;
  static const std::vector<std::pair<std::string, std::optional<F>>> corpus = {
      {"# 1 \"corpus.h\"", F::Linemarker},
      {"namespace toy {", F::Namespace},
      {"using namespace std;", F::UsingNamespace},
      {"namespace cy = cyclus;", F::NamespaceAlias},
      {"typedef double real;", F::Typedef},
      {"using count_t = int;", F::Using},
      {"#pragma cyclus exec base = 10", F::Exec},
      {"class Plant : public cyclus::Facility {", F::ClassAndSuperclass},
      {"public:", F::Access},
      {"#pragma cyclus note {\"doc\": \"a plant\"}", F::NoteDecoration},
      {"#pragma cyclus var {\"default\": base}", F::VarDecoration},
      {"real output;", F::VarDeclaration},
      {"#pragma cyclus", F::PragmaCyclusError},
      {"int helper() const { return 1; }", std::nullopt},
      {"};", std::nullopt},
      {"}", std::nullopt},
  };
  return corpus;
}

FilterCorpusReport run_filter_corpus() {
  FilterCorpusReport r;
  cycpp::Accumulator acc;
  for (const auto& [stmt, expected] : filter_corpus()) {
    ++r.lines;
    auto got = acc.apply_filters(stmt);
    if (got) r.covered.insert(*got);
    if (got == expected) {
      ++r.agreeing;
    } else if (r.first_disagreement.empty()) {
      r.first_disagreement = "'" + stmt + "' matched " +
                             (got ? std::string(cycpp::to_string(*got)) : "nothing");
    }
  }
  r.max_transformations = acc.stats().max_transformations_per_statement;
  acc.finish();
  return r;
}

}  // namespace testsupport
