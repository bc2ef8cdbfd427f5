#include "cycpp/normalizer.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "text_util.hpp"

namespace cycpp {

std::string Linemarker::render() const {
  std::string out = "# " + std::to_string(line_number) + " \"" + file_name + "\"";
  if (flags & kEnterFile) out += " 1";
  if (flags & kReturnFile) out += " 2";
  return out;
}

std::optional<Linemarker> parse_linemarker(std::string_view line) {
  static const std::regex re(R"(^\s*#\s*(?:line\s+)?(\d+)\s+\"([^\"]*)\"((?:\s+\d+)*)\s*$)");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(line.begin(), line.end(), m, re)) return std::nullopt;
  Linemarker marker;
  marker.line_number = std::stoi(m[1].str());
  marker.file_name = m[2].str();
  std::istringstream flags(m[3].str());
  int flag = 0;
  while (flags >> flag) {
    if (flag == 1) marker.flags |= Linemarker::kEnterFile;
    if (flag == 2) marker.flags |= Linemarker::kReturnFile;
  }
  return marker;
}

bool is_pragma_cyclus(std::string_view line) {
  static const std::regex re(R"(^\s*#\s*pragma\s+cyclus(\s.*)?$)");
  return std::regex_match(line.begin(), line.end(), re);
}

std::string NormalizedSource::render() const {
  std::string out = Linemarker{1, file_name, Linemarker::kNone}.render() + "\n";
  std::optional<SourceLocation> prev = SourceLocation{file_name, 0};
  for (const auto& line : lines) {
    const bool consecutive = prev && prev->file == line.origin.file &&
                             prev->line + 1 == line.origin.line;
    if (!consecutive || line.marker_flags != 0) {
      Linemarker marker{line.origin.line, line.origin.file, line.marker_flags};
      out += marker.render();
      out += '\n';
    }
    out += line.text;
    out += '\n';
    prev = line.origin;
  }
  return out;
}

IncludeResolver map_resolver(std::map<std::string, std::string> files) {
  return [files = std::move(files)](const std::string& name,
                                    bool) -> std::optional<std::string> {
    auto it = files.find(name);
    if (it == files.end()) return std::nullopt;
    return it->second;
  };
}

IncludeResolver directory_resolver(std::vector<std::string> dirs) {
  return [dirs = std::move(dirs)](const std::string& name,
                                  bool) -> std::optional<std::string> {
    for (const auto& dir : dirs) {
      std::filesystem::path candidate = std::filesystem::path(dir) / name;
      std::error_code ec;
      if (!std::filesystem::is_regular_file(candidate, ec)) continue;
      std::ifstream in(candidate, std::ios::binary);
      std::ostringstream buf;
      buf << in.rdbuf();
      return buf.str();
    }
    return std::nullopt;
  };
}

namespace {

// Removes comments while keeping every newline, so physical line numbers
// survive. `#pragma cyclus` lines are copied untouched.
std::vector<std::string> strip_comments(std::string_view text) {
  std::vector<std::string> physical = split_lines(text);
  std::vector<std::string> out;
  out.reserve(physical.size());
  bool in_block = false;
  for (auto& line : physical) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!in_block && is_pragma_cyclus(line)) {
      out.push_back(line);
      continue;
    }
    std::string cleaned;
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
      char c = line[i];
      char next = i + 1 < line.size() ? line[i + 1] : '\0';
      if (in_block) {
        if (c == '*' && next == '/') {
          in_block = false;
          ++i;
        }
        continue;
      }
      if (quote) {
        cleaned += c;
        if (c == '\\' && i + 1 < line.size()) {
          cleaned += line[++i];
        } else if (c == quote) {
          quote = 0;
        }
        continue;
      }
      if (c == '"' || c == '\'') {
        quote = c;
        cleaned += c;
      } else if (c == '/' && next == '/') {
        break;
      } else if (c == '/' && next == '*') {
        in_block = true;
        cleaned += ' ';
        ++i;
      } else {
        cleaned += c;
      }
    }
    out.push_back(std::move(cleaned));
  }
  return out;
}

struct LogicalLine {
  std::string text;
  int first_physical = 0;  // 1-based
  int physical_count = 1;
};

std::vector<LogicalLine> join_continuations(const std::vector<std::string>& lines,
                                            const std::string& file) {
  std::vector<LogicalLine> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    LogicalLine logical{lines[i], static_cast<int>(i) + 1, 1};
    while (!logical.text.empty() && logical.text.back() == '\\') {
      logical.text.pop_back();
      if (i + 1 >= lines.size()) {
        throw Error(ErrorKind::MalformedDirective,
                    "backslash-newline at end of file",
                    SourceLocation{file, logical.first_physical});
      }
      logical.text += lines[++i];
      ++logical.physical_count;
    }
    out.push_back(std::move(logical));
  }
  return out;
}

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Preprocessor {
 public:
  explicit Preprocessor(const NormalizeOptions& options)
      : options_(options), macros_(options.predefines) {}

  NormalizedSource run(std::string_view source) {
    process(source, options_.file_name, 0);
    return std::move(result_);
  }

 private:
  struct Conditional {
    bool parent_active;
    bool taken;   // some branch already selected
    bool active;  // current branch selected
    bool seen_else;
  };

  void process(std::string_view source, const std::string& file, int depth) {
    auto lines = join_continuations(strip_comments(source), file);
    std::string cur_file = file;
    int delta = 0;  // origin line = physical line + delta
    std::vector<Conditional> conds;
    unsigned pending_flags = depth > 0 ? Linemarker::kEnterFile : 0u;

    auto active = [&] { return conds.empty() || conds.back().active; };

    for (const auto& logical : lines) {
      SourceLocation loc{cur_file, logical.first_physical + delta};
      std::string_view trimmed = trim(logical.text);
      if (!trimmed.empty() && trimmed.front() == '#') {
        if (auto marker = parse_linemarker(logical.text)) {
          if (active()) {
            cur_file = marker->file_name;
            delta = marker->line_number - (logical.first_physical + logical.physical_count);
          }
          continue;
        }
        std::string_view rest = trim(trimmed.substr(1));
        std::size_t name_end = 0;
        while (name_end < rest.size() && is_ident_char(rest[name_end])) ++name_end;
        std::string directive(rest.substr(0, name_end));
        std::string_view args = trim(rest.substr(name_end));

        if (directive == "if" || directive == "ifdef" || directive == "ifndef") {
          bool parent = active();
          bool value = false;
          if (parent) value = evaluate_condition(directive, args, loc);
          conds.push_back({parent, value, parent && value, false});
          continue;
        }
        if (directive == "elif" || directive == "else" || directive == "endif") {
          if (conds.empty()) {
            throw Error(ErrorKind::MalformedDirective, "#" + directive + " without #if", loc);
          }
          auto& c = conds.back();
          if (directive == "endif") {
            conds.pop_back();
          } else if (directive == "else") {
            if (c.seen_else) throw Error(ErrorKind::MalformedDirective, "#else after #else", loc);
            c.seen_else = true;
            c.active = c.parent_active && !c.taken;
            c.taken = c.taken || c.active;
          } else {
            if (c.seen_else) throw Error(ErrorKind::MalformedDirective, "#elif after #else", loc);
            bool value = false;
            if (c.parent_active && !c.taken) value = evaluate_condition("if", args, loc);
            c.active = c.parent_active && !c.taken && value;
            c.taken = c.taken || c.active;
          }
          continue;
        }
        if (!active()) continue;

        if (directive == "pragma") {
          // Pragmas pass through for later passes; cyclus pragmas verbatim.
          std::string text = is_pragma_cyclus(logical.text) ? logical.text
                                                            : std::string(trimmed);
          emit(std::move(text), loc, pending_flags);
        } else if (directive == "define") {
          handle_define(args, loc);
        } else if (directive == "undef") {
          handle_undef(args, loc);
        } else if (directive == "include") {
          if (handle_include(args, loc, depth)) pending_flags = Linemarker::kReturnFile;
        } else if (directive == "error") {
          throw Error(ErrorKind::MalformedDirective, "#error " + std::string(args), loc);
        } else if (directive == "warning") {
          result_.warnings.push_back(loc.file + ":" + std::to_string(loc.line) +
                                     ": warning: " + std::string(args));
        } else if (directive.empty() && args.empty()) {
          // null directive
        } else {
          throw Error(ErrorKind::MalformedDirective,
                      "unsupported preprocessor directive '#" + directive + "'", loc);
        }
        continue;
      }
      if (!active()) continue;
      emit(expand(logical.text, {}), loc, pending_flags);
    }
    if (!conds.empty()) {
      throw Error(ErrorKind::MalformedDirective, "unterminated #if",
                  SourceLocation{cur_file, static_cast<int>(lines.size())});
    }
  }

  void emit(std::string text, const SourceLocation& loc, unsigned& pending_flags) {
    result_.lines.push_back({std::move(text), loc, pending_flags});
    pending_flags = 0;
  }

  void handle_define(std::string_view args, const SourceLocation& loc) {
    std::size_t i = 0;
    if (args.empty() || !is_ident_start(args[0])) {
      throw Error(ErrorKind::MalformedDirective, "#define requires a macro name", loc);
    }
    while (i < args.size() && is_ident_char(args[i])) ++i;
    std::string name(args.substr(0, i));
    if (i < args.size() && args[i] == '(') {
      throw Error(ErrorKind::MalformedDirective,
                  "function-like macro '" + name + "' is not supported", loc);
    }
    if (i < args.size() && !std::isspace(static_cast<unsigned char>(args[i]))) {
      throw Error(ErrorKind::MalformedDirective,
                  "missing whitespace after macro name '" + name + "'", loc);
    }
    macros_[name] = std::string(trim(args.substr(i)));
  }

  void handle_undef(std::string_view args, const SourceLocation& loc) {
    std::size_t i = 0;
    while (i < args.size() && is_ident_char(args[i])) ++i;
    if (i == 0 || !is_ident_start(args[0]) || !trim(args.substr(i)).empty()) {
      throw Error(ErrorKind::MalformedDirective,
                  "#undef expects a single macro name, got '" + std::string(args) + "'", loc);
    }
    macros_.erase(std::string(args));
  }

  bool handle_include(std::string_view args, const SourceLocation& loc, int depth) {
    if (args.size() < 2 || !((args.front() == '"' && args.back() == '"') ||
                             (args.front() == '<' && args.back() == '>'))) {
      throw Error(ErrorKind::MalformedDirective,
                  "#include expects \"file\" or <file>", loc);
    }
    std::string name(args.substr(1, args.size() - 2));
    bool angled = args.front() == '<';
    std::optional<std::string> text;
    if (options_.include_resolver) text = options_.include_resolver(name, angled);
    if (!text) {
      result_.warnings.push_back(loc.file + ":" + std::to_string(loc.line) +
                                 ": warning: cannot resolve include '" + name +
                                 "', dropping it");
      return false;
    }
    if (depth + 1 > options_.max_include_depth) {
      throw Error(ErrorKind::MalformedDirective, "#include nested too deeply", loc);
    }
    process(*text, name, depth + 1);
    return true;
  }

  // Object-like macro expansion with the usual rule that a macro is not
  // re-expanded inside its own replacement.
  std::string expand(std::string_view text, const std::set<std::string>& hidden) const {
    std::string out;
    char quote = 0;
    for (std::size_t i = 0; i < text.size();) {
      char c = text[i];
      if (quote) {
        out += c;
        if (c == '\\' && i + 1 < text.size()) {
          out += text[i + 1];
          i += 2;
          continue;
        }
        if (c == quote) quote = 0;
        ++i;
        continue;
      }
      if (c == '"' || c == '\'') {
        quote = c;
        out += c;
        ++i;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        // pp-number: never a macro name, even with identifier characters in it
        while (i < text.size() && (is_ident_char(text[i]) || text[i] == '.')) out += text[i++];
        continue;
      }
      if (is_ident_start(c)) {
        std::size_t start = i;
        while (i < text.size() && is_ident_char(text[i])) ++i;
        std::string ident(text.substr(start, i - start));
        auto it = macros_.find(ident);
        if (it != macros_.end() && !hidden.count(ident)) {
          auto inner = hidden;
          inner.insert(ident);
          out += expand(it->second, inner);
        } else {
          out += ident;
        }
        continue;
      }
      out += c;
      ++i;
    }
    return out;
  }

  bool evaluate_condition(const std::string& directive, std::string_view args,
                          const SourceLocation& loc) const {
    if (directive == "ifdef" || directive == "ifndef") {
      std::string name(trim(args));
      bool ok = !name.empty() && is_ident_start(name[0]);
      for (char c : name) ok = ok && is_ident_char(c);
      if (!ok) {
        throw Error(ErrorKind::MalformedDirective,
                    "#" + directive + " expects a macro name", loc);
      }
      bool defined = macros_.count(name) > 0;
      return directive == "ifdef" ? defined : !defined;
    }
    ConditionParser parser{*this, args, loc};
    return parser.parse();
  }

  // Grammar: or := and ('||' and)* ; and := unary ('&&' unary)* ;
  // unary := '!' unary | '(' or ')' | 'defined' name | 'defined' '(' name ')'
  //        | integer | macro-expanding-to-integer
  struct ConditionParser {
    const Preprocessor& pp;
    std::string_view text;
    SourceLocation loc;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& why) const {
      throw Error(ErrorKind::MalformedDirective,
                  "unsupported #if condition '" + std::string(text) + "': " + why, loc);
    }
    void skip_ws() {
      while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool consume(std::string_view tok) {
      skip_ws();
      if (text.substr(pos, tok.size()) == tok) {
        pos += tok.size();
        return true;
      }
      return false;
    }
    std::string ident() {
      skip_ws();
      std::size_t start = pos;
      if (pos >= text.size() || !is_ident_start(text[pos])) return {};
      while (pos < text.size() && is_ident_char(text[pos])) ++pos;
      return std::string(text.substr(start, pos - start));
    }
    bool parse() {
      bool v = parse_or();
      skip_ws();
      if (pos != text.size()) fail("trailing tokens");
      return v;
    }
    bool parse_or() {
      bool v = parse_and();
      while (consume("||")) v = parse_and() || v;
      return v;
    }
    bool parse_and() {
      bool v = parse_unary();
      while (consume("&&")) v = parse_unary() && v;
      return v;
    }
    static std::optional<long long> integer(std::string_view s) {
      s = trim(s);
      while (!s.empty() && (s.back() == 'u' || s.back() == 'U' || s.back() == 'l' ||
                            s.back() == 'L')) {
        s.remove_suffix(1);
      }
      if (s.empty()) return std::nullopt;
      try {
        std::size_t used = 0;
        long long v = std::stoll(std::string(s), &used, 0);
        if (used != s.size()) return std::nullopt;
        return v;
      } catch (const std::exception&) {
        return std::nullopt;
      }
    }
    bool parse_unary() {
      if (consume("!")) return !parse_unary();
      if (consume("(")) {
        bool v = parse_or();
        if (!consume(")")) fail("missing ')'");
        return v;
      }
      skip_ws();
      if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        std::size_t start = pos;
        while (pos < text.size() && is_ident_char(text[pos])) ++pos;
        auto v = integer(text.substr(start, pos - start));
        if (!v) fail("bad integer literal");
        return *v != 0;
      }
      std::string name = ident();
      if (name.empty()) fail("expected an integer, defined() or '!'");
      if (name == "defined") {
        bool paren = consume("(");
        std::string target = ident();
        if (target.empty()) fail("defined needs a macro name");
        if (paren && !consume(")")) fail("missing ')'");
        return pp.macros_.count(target) > 0;
      }
      auto it = pp.macros_.find(name);
      if (it == pp.macros_.end()) fail("'" + name + "' is not a defined macro");
      auto v = integer(pp.expand(it->second, {}));
      if (!v) fail("macro '" + name + "' does not expand to an integer literal");
      return *v != 0;
    }
  };

  const NormalizeOptions& options_;
  std::map<std::string, std::string> macros_;
  NormalizedSource result_;
};

}  // namespace

NormalizedSource normalize(std::string_view source, const NormalizeOptions& options) {
  Preprocessor pp(options);
  NormalizedSource out = pp.run(source);
  out.file_name = options.file_name;
  return out;
}

}  // namespace cycpp
