#include "cycpp/accumulator.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <regex>
#include <set>

#include "cycpp/directive.hpp"
#include "text_util.hpp"

namespace cycpp {

std::string_view to_string(FilterId id) {
  switch (id) {
    case FilterId::ClassAndSuperclass: return "ClassAndSuperclassFilter";
    case FilterId::Access: return "AccessFilter";
    case FilterId::Exec: return "ExecFilter";
    case FilterId::UsingNamespace: return "UsingNamespaceFilter";
    case FilterId::NamespaceAlias: return "NamespaceAliasFilter";
    case FilterId::Namespace: return "NamespaceFilter";
    case FilterId::Typedef: return "TypedefFilter";
    case FilterId::Using: return "UsingFilter";
    case FilterId::Linemarker: return "LinemarkerFilter";
    case FilterId::NoteDecoration: return "NoteDecorationFilter";
    case FilterId::VarDecoration: return "VarDecorationFilter";
    case FilterId::VarDeclaration: return "VarDeclarationFilter";
    case FilterId::PragmaCyclusError: return "PragmaCyclusErrorFilter";
  }
  return "";
}

const std::vector<FilterId>& default_filter_order() {
  static const std::vector<FilterId> order = {
      FilterId::ClassAndSuperclass, FilterId::Access,         FilterId::Exec,
      FilterId::UsingNamespace,     FilterId::NamespaceAlias, FilterId::Namespace,
      FilterId::Typedef,            FilterId::Using,          FilterId::Linemarker,
      FilterId::NoteDecoration,     FilterId::VarDecoration,  FilterId::VarDeclaration,
      FilterId::PragmaCyclusError,
  };
  return order;
}

std::string_view to_string(Access a) {
  switch (a) {
    case Access::Public: return "public";
    case Access::Protected: return "protected";
    case Access::Private: return "private";
  }
  return "";
}

// ---------------------------------------------------------------------------
// ArchetypeInfo / Registry

const StateVar* ArchetypeInfo::find_var(std::string_view var) const {
  for (const auto& v : state_vars) {
    if (v.name == var) return &v;
  }
  return nullptr;
}

MetaValue ArchetypeInfo::annotation() const {
  MetaObject vars;
  for (const auto& v : state_vars) vars.set(v.name, v.annotation);
  return make_archetype_annotation(name, entity, parents, all_parents, notes, vars);
}

const ArchetypeInfo* Registry::find_qualified(std::string_view qualified) const {
  for (const auto& a : archetypes) {
    if (a.name == qualified) return &a;
  }
  return nullptr;
}

const ArchetypeInfo& Registry::find(std::string_view name) const {
  if (const auto* hit = find_qualified(name)) return *hit;
  const ArchetypeInfo* found = nullptr;
  for (const auto& a : archetypes) {
    if (a.short_name == name) {
      if (found) {
        throw Error(ErrorKind::AmbiguousClass,
                    "class name '" + std::string(name) + "' matches both '" + found->name +
                        "' and '" + a.name + "'");
      }
      found = &a;
    }
  }
  if (!found) throw Error(ErrorKind::UnknownClass, "no archetype named '" + std::string(name) + "'");
  return *found;
}

MetaValue Registry::dump() const {
  auto strings = [](const std::vector<std::string>& xs) {
    MetaArray a;
    for (const auto& x : xs) a.emplace_back(x);
    return MetaValue(std::move(a));
  };
  MetaObject out;
  for (const auto& a : archetypes) {
    MetaArray vars;
    for (const auto& v : a.state_vars) {
      vars.push_back(MetaObject{{"name", v.name},
                                {"type", type_to_meta(v.type)},
                                {"cpp", v.type.cpp()},
                                {"index", v.index},
                                {"access", std::string(to_string(v.access))},
                                {"file", v.where.file},
                                {"line", v.where.line},
                                {"annotation", v.annotation}});
    }
    out.set(a.name, MetaObject{{"name", a.name},
                               {"kind", a.is_struct ? "struct" : "class"},
                               {"namespace", strings(a.namespace_path)},
                               {"file", a.where.file},
                               {"line", a.where.line},
                               {"entity", a.entity},
                               {"parents", strings(a.parents)},
                               {"all_parents", strings(a.all_parents)},
                               {"notes", MetaValue(a.notes)},
                               {"vars", MetaValue(std::move(vars))}});
  }
  MetaObject classes;
  for (const auto& c : this->classes) classes.set(c.name, strings(c.parents));
  return MetaObject{{"archetypes", MetaValue(std::move(out))},
                    {"classes", MetaValue(std::move(classes))}};
}

std::string classify_entity(const ArchetypeInfo& info) {
  auto has = [&](std::string_view cls) {
    return std::find(info.all_parents.begin(), info.all_parents.end(), cls) !=
               info.all_parents.end() ||
           std::find(info.parents.begin(), info.parents.end(), cls) != info.parents.end();
  };
  if (has("cyclus::Region")) return "region";
  if (has("cyclus::Institution")) return "institution";
  if (has("cyclus::Facility")) return "facility";
  if (has("cyclus::Agent")) return "archetype";
  return "unknown";
}

// ---------------------------------------------------------------------------
// exec

namespace {

std::vector<std::string> split_top_level(std::string_view code) {
  std::vector<std::string> out;
  std::string cur;
  char quote = 0;
  int depth = 0;
  for (std::size_t i = 0; i < code.size(); ++i) {
    char c = code[i];
    if (quote) {
      cur += c;
      if (c == '\\' && i + 1 < code.size()) {
        cur += code[++i];
      } else if (c == quote) {
        quote = 0;
      }
      continue;
    }
    if (c == '\'' || c == '"') {
      quote = c;
    } else if (c == '(' || c == '[' || c == '{') {
      ++depth;
    } else if (c == ')' || c == ']' || c == '}') {
      --depth;
    } else if ((c == ';' || c == '\n') && depth <= 0) {
      out.push_back(cur);
      cur.clear();
      continue;
    }
    cur += c;
  }
  out.push_back(cur);
  return out;
}

bool is_python_keyword(std::string_view w) {
  static const std::set<std::string_view> kw = {
      "False", "None",   "True",    "and",   "as",     "assert", "async",  "await",
      "break", "class",  "continue", "def",  "del",    "elif",   "else",   "except",
      "finally", "for",  "from",    "global", "if",    "import", "in",     "is",
      "lambda", "nonlocal", "not",  "or",    "pass",   "raise",  "return", "try",
      "while", "with",   "yield"};
  return kw.count(w) != 0;
}

}  // namespace

void exec_directive(std::string_view code, MetaEnv& env) {
  static const std::regex assign(R"(^([A-Za-z_]\w*)\s*=(?!=)\s*([\s\S]+)$)");
  for (const auto& raw : split_top_level(code)) {
    std::string stmt(trim(raw));
    if (stmt.empty()) continue;
    std::smatch m;
    if (!std::regex_match(stmt, m, assign) || is_python_keyword(m[1].str())) {
      throw Error(ErrorKind::SyntaxError,
                  "exec supports only 'name = expression' statements, got '" + stmt + "'");
    }
    MetaValue v = parse_literal(m[2].str(), env);
    env[m[1].str()] = std::move(v);
  }
}

// ---------------------------------------------------------------------------
// Accumulator

namespace {

const std::set<std::string, std::less<>> kKernelClasses = {
    "cyclus::Agent", "cyclus::Facility", "cyclus::Institution", "cyclus::Region"};

std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  }
  return out;
}

std::string without_global(std::string s) {
  if (starts_with(s, "::")) s.erase(0, 2);
  return s;
}

/// Splits on commas outside <>, () and [].
std::vector<std::string> split_commas(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '<' || c == '(' || c == '[') ++depth;
    if (c == '>' || c == ')' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      out.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.emplace_back(trim(cur));
  return out;
}

bool is_statement_complete(std::string_view text) {
  std::string_view t = trim(text);
  if (t.empty()) return false;
  int parens = 0;
  char quote = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    char c = t[i];
    if (quote) {
      if (c == '\\') ++i;
      else if (c == quote) quote = 0;
      continue;
    }
    if (c == '"' || c == '\'') quote = c;
    else if (c == '(') ++parens;
    else if (c == ')') --parens;
  }
  if (parens > 0) return false;
  char last = t.back();
  if (last == ';' || last == '{' || last == '}') return true;
  if (last == ':') {
    static const std::regex label(R"(^\w+\s*:$)");
    return std::regex_match(t.begin(), t.end(), label);
  }
  return false;
}

/// Splits a complete buffer at top-level `;` and at `}` closing an outer
/// scope. Braces opened inside a piece stay with it.
std::vector<std::string> split_statements(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  int parens = 0;
  int braces = 0;
  auto emit = [&] {
    if (!trim(cur).empty()) out.emplace_back(trim(cur));
    cur.clear();
  };
  auto next_nonspace = [&](std::size_t i) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    return i < text.size() ? text[i] : '\0';
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    bool ident_before = i > 0 && (std::isalnum(static_cast<unsigned char>(text[i - 1])) ||
                                  text[i - 1] == '_');
    if (c == 'R' && i + 1 < text.size() && text[i + 1] == '"' && !ident_before) {
      auto open = text.find('(', i + 2);
      if (open != std::string_view::npos) {
        std::string close = ")" + std::string(text.substr(i + 2, open - i - 2)) + "\"";
        auto end = text.find(close, open + 1);
        end = end == std::string_view::npos ? text.size() : end + close.size();
        cur.append(text.substr(i, end - i));
        i = end - 1;
        continue;
      }
    }
    if (c == '"' || c == '\'') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != c) j += text[j] == '\\' ? 2 : 1;
      j = std::min(j, text.size() - 1);
      cur.append(text.substr(i, j - i + 1));
      i = j;
      continue;
    }
    if (c == '}' && braces == 0) {
      emit();
      out.emplace_back("}");
      continue;
    }
    cur += c;
    if (c == '(') ++parens;
    else if (c == ')') --parens;
    else if (c == '{') ++braces;
    else if (c == '}') {
      --braces;
      if (braces == 0 && parens <= 0 && next_nonspace(i + 1) != ';') emit();
    } else if (c == ';' && parens <= 0 && braces == 0) {
      emit();
    }
  }
  emit();
  return out;
}

struct MemberDecl {
  std::string type;
  std::string name;
};

std::optional<MemberDecl> parse_member_decl(std::string_view stmt) {
  std::string s(trim(stmt));
  if (s.empty() || s.back() != ';' || s.front() == '#') return std::nullopt;
  s.pop_back();
  // Cut a default member initializer.
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '<') ++depth;
    else if (c == '>') --depth;
    else if (depth == 0 && (c == '=' || c == '{')) {
      s.resize(i);
      break;
    } else if (c == '(') {
      return std::nullopt;  // function declaration
    }
  }
  s = std::string(trim(s));
  static const std::regex specifiers(R"(^(?:(?:static|mutable|inline)\s+)+)");
  s = std::regex_replace(s, specifiers, "");
  static const std::regex decl(R"(^([\s\S]*[^\s])\s*\b([A-Za-z_]\w*)$)");
  std::smatch m;
  if (!std::regex_match(s, m, decl)) return std::nullopt;
  std::string type(trim(m[1].str()));
  static const std::set<std::string_view> not_types = {"return", "delete", "throw", "goto",
                                                       "using", "typedef", "friend"};
  auto first_word = type.substr(0, type.find_first_of(" \t<:"));
  if (not_types.count(first_word)) return std::nullopt;
  return MemberDecl{type, m[2].str()};
}

}  // namespace

struct Accumulator::Impl {
  enum class FrameKind { Namespace, Class, Block };
  struct Frame {
    FrameKind kind;
    int class_idx = -1;
    Access access = Access::Private;
  };
  struct Pending {
    MetaValue value;
    SourceLocation where;
  };

  AccumulateOptions options;
  MetaEnv env;
  TypeScope scope;
  std::vector<Frame> frames;
  std::vector<ArchetypeInfo> infos;
  std::vector<ClassRecord> classes;
  std::optional<Pending> pending;

  std::string cur_file = "<stdin>";
  int next_line = 1;
  std::string buffer;
  SourceLocation buffer_loc;
  SourceLocation stmt_loc;
  std::optional<std::size_t> consumed_brace;
  std::optional<std::size_t> consumed_end;
  std::size_t transformations = 0;

  FilterStats stats;
  bool tracing = false;
  std::vector<TraceEntry> trace;

  explicit Impl(AccumulateOptions opts) : options(std::move(opts)), env(options.env) {}

  // -- helpers ------------------------------------------------------------

  int innermost_class() const {
    for (auto it = frames.rbegin(); it != frames.rend(); ++it) {
      if (it->kind == FrameKind::Class) return it->class_idx;
    }
    return -1;
  }

  bool in_class_scope() const { return !frames.empty() && frames.back().kind == FrameKind::Class; }

  std::vector<std::string> namespace_path() const {
    std::vector<std::string> out;
    std::string p = scope.prefix();
    std::size_t start = 0;
    while (!p.empty() && start <= p.size()) {
      auto sep = p.find("::", start);
      out.push_back(p.substr(start, sep == std::string::npos ? sep : sep - start));
      if (sep == std::string::npos) break;
      start = sep + 2;
    }
    return out;
  }

  bool class_known(const std::string& q) const {
    if (kKernelClasses.count(q)) return true;
    return std::any_of(classes.begin(), classes.end(),
                       [&](const ClassRecord& c) { return c.name == q; });
  }

  std::string resolve_class(const std::string& written, const TypeScope::Context& ctx,
                            int depth = 0) const {
    if (depth < 64) {
      if (auto key = scope.find_alias(written, ctx)) {
        const auto* edge = scope.alias(*key);
        return resolve_class(strip_spaces(edge->target), edge->context, depth + 1);
      }
    }
    for (const auto& cand : scope.candidates(written, ctx)) {
      if (class_known(cand)) return cand;
    }
    TypeScope::Context bare;
    bare.prefixes = {""};
    bare.namespace_aliases = ctx.namespace_aliases;
    return without_global(scope.candidates(written, bare).front());
  }

  void count_directive() {
    int idx = innermost_class();
    if (idx >= 0) ++infos[static_cast<std::size_t>(idx)].directive_count;
  }

  void mark() { ++transformations; }

  // -- filters --------------------------------------------------------------

  bool class_and_superclass(const std::string& s) {
    static const std::regex re(
        R"(^(class|struct)\s+([A-Za-z_]\w*)(\s+final)?\s*(?::\s*([^{]*?))?\s*\{)");
    std::smatch m;
    if (!std::regex_search(s, m, re)) return false;
    mark();
    bool is_struct = m[1].str() == "struct";
    std::string short_name = m[2].str();
    auto ctx = scope.context();

    ArchetypeInfo info;
    info.short_name = short_name;
    info.name = scope.qualify(short_name);
    info.namespace_path = namespace_path();
    info.is_struct = is_struct;
    info.where = stmt_loc;
    if (m[4].matched) {
      for (const auto& base : split_commas(m[4].str())) {
        std::string b = base;
        Access access = is_struct ? Access::Public : Access::Private;
        static const std::regex spec(R"(^(virtual|public|protected|private)\s+)");
        std::smatch sm;
        while (std::regex_search(b, sm, spec)) {
          std::string w = sm[1].str();
          if (w == "public") access = Access::Public;
          if (w == "protected") access = Access::Protected;
          if (w == "private") access = Access::Private;
          b = sm.suffix().str();
        }
        if (access != Access::Public) continue;
        info.parents.push_back(resolve_class(strip_spaces(b), ctx));
      }
    }
    classes.push_back({info.name, info.parents});
    infos.push_back(std::move(info));

    scope.push_class(short_name);
    frames.push_back({FrameKind::Class, static_cast<int>(infos.size() - 1),
                      is_struct ? Access::Public : Access::Private});
    consumed_end = static_cast<std::size_t>(m.position(0) + m.length(0));
    consumed_brace = *consumed_end - 1;
    return true;
  }

  bool access(const std::string& s) {
    static const std::regex re(R"(^(public|private|protected)\s*:(?!:))");
    std::smatch m;
    if (!std::regex_search(s, m, re)) return false;
    mark();
    consumed_end = static_cast<std::size_t>(m.position(0) + m.length(0));
    if (in_class_scope()) {
      std::string w = m[1].str();
      frames.back().access = w == "public"      ? Access::Public
                             : w == "protected" ? Access::Protected
                                                : Access::Private;
    }
    return true;
  }

  bool exec(const std::string& s) {
    static const std::regex re(R"(^#\s*pragma\s+cyclus\s+exec\b([\s\S]*)$)");
    std::smatch m;
    if (!std::regex_match(s, m, re)) return false;
    mark();
    count_directive();
    exec_directive(m[1].str(), env);
    return true;
  }

  bool using_namespace(const std::string& s) {
    static const std::regex re(R"(^using\s+namespace\s+((?:::)?[\w:]+)\s*;)");
    std::smatch m;
    if (!std::regex_search(s, m, re)) return false;
    mark();
    std::string ns = strip_spaces(m[1].str());
    auto ctx = scope.context();
    auto sep = without_global(ns).find("::");
    std::string head = without_global(ns).substr(0, sep);
    if (auto it = ctx.namespace_aliases.find(head); it != ctx.namespace_aliases.end()) {
      ns = it->second + (sep == std::string::npos ? "" : without_global(ns).substr(sep));
    }
    scope.add_using_namespace(ns);
    return true;
  }

  bool namespace_alias(const std::string& s) {
    static const std::regex re(R"(^namespace\s+(\w+)\s*=\s*((?:::)?[\w:]+)\s*;)");
    std::smatch m;
    if (!std::regex_search(s, m, re)) return false;
    mark();
    scope.add_namespace_alias(m[1].str(), strip_spaces(m[2].str()));
    return true;
  }

  bool namespace_open(const std::string& s) {
    static const std::regex re(R"(^(?:inline\s+)?namespace\s*((?:\w+\s*::\s*)*\w+)?\s*\{)");
    std::smatch m;
    if (!std::regex_search(s, m, re)) return false;
    mark();
    scope.push_namespace(m[1].matched ? strip_spaces(m[1].str()) : "");
    frames.push_back({FrameKind::Namespace});
    consumed_end = static_cast<std::size_t>(m.position(0) + m.length(0));
    consumed_brace = *consumed_end - 1;
    return true;
  }

  bool typedef_(const std::string& s) {
    static const std::regex re(R"(^typedef\s+([\s\S]+?)\s*\b([A-Za-z_]\w*)\s*;$)");
    std::smatch m;
    if (!std::regex_match(s, m, re)) return false;
    mark();
    scope.add_alias(m[2].str(), m[1].str());
    return true;
  }

  bool using_(const std::string& s) {
    static const std::regex alias_decl(R"(^using\s+([A-Za-z_]\w*)\s*=\s*([\s\S]+?)\s*;$)");
    static const std::regex using_decl(
        R"(^using\s+(?:typename\s+)?((?:::)?(?:\w+\s*::\s*)+\w+)\s*;$)");
    std::smatch m;
    if (std::regex_match(s, m, alias_decl)) {
      mark();
      scope.add_alias(m[1].str(), m[2].str());
      return true;
    }
    if (std::regex_match(s, m, using_decl)) {
      mark();
      scope.add_using_declaration(strip_spaces(m[1].str()));
      return true;
    }
    return false;
  }

  bool linemarker(const std::string& s) {
    auto marker = parse_linemarker(s);
    if (!marker) return false;
    mark();
    cur_file = marker->file_name;
    next_line = marker->line_number;
    return true;
  }

  bool note_decoration(const std::string& s) {
    static const std::regex re(R"(^#\s*pragma\s+cyclus\s+note\s+([\s\S]*)$)");
    std::smatch m;
    if (!std::regex_match(s, m, re)) return false;
    mark();
    int idx = innermost_class();
    if (idx < 0) {
      throw Error(ErrorKind::MalformedDirective, "'#pragma cyclus note' outside a class body");
    }
    MetaValue notes = parse_annotation_literal(m[1].str(), env);
    check_archetype_notes(notes);
    auto& info = infos[static_cast<std::size_t>(idx)];
    ++info.directive_count;
    for (const auto& [k, v] : notes.as_object()) info.notes.set(k, v);
    return true;
  }

  bool var_decoration(const std::string& s) {
    // Anything after `#pragma cyclus` that reaches a `var` word.
    static const std::regex re(R"(^#\s*pragma\s+cyclus\b.*?\bvar\s+([\s\S]*)$)");
    std::smatch m;
    if (!std::regex_match(s, m, re)) return false;
    mark();
    if (pending) {
      throw Error(ErrorKind::DanglingDecoration,
                  "'#pragma cyclus var' is not followed by a member declaration",
                  pending->where);
    }
    if (innermost_class() < 0) {
      throw Error(ErrorKind::DanglingDecoration, "'#pragma cyclus var' outside a class body");
    }
    count_directive();
    pending = Pending{parse_annotation_literal(m[1].str(), env), stmt_loc};
    return true;
  }

  bool var_declaration(const std::string& s) {
    if (!pending || !in_class_scope()) return false;
    auto decl = parse_member_decl(s);
    if (!decl) return false;
    mark();
    if (!split_commas(decl->type).empty() && split_commas(decl->type).size() > 1) {
      throw Error(ErrorKind::MalformedDirective,
                  "a state variable must be declared on its own");
    }
    auto& frame = frames.back();
    auto& info = infos[static_cast<std::size_t>(frame.class_idx)];
    if (info.find_var(decl->name)) {
      throw Error(ErrorKind::MalformedDirective,
                  "state variable '" + decl->name + "' declared twice in " + info.name);
    }
    CanonicalType type = canonicalize(decl->type, scope);
    int index = static_cast<int>(info.state_vars.size());
    StateVar var;
    var.name = decl->name;
    var.type = type;
    var.index = index;
    var.access = frame.access;
    var.where = stmt_loc;
    try {
      var.annotation = finalize_var(pending->value, type, index, options.finalize);
    } catch (const Error& e) {
      throw e.located(pending->where);
    }
    info.state_vars.push_back(std::move(var));
    pending.reset();
    return true;
  }

  bool pragma_error(const std::string& s) {
    static const std::regex re(R"(^#\s*pragma\s+cyclus\b[\s\S]*$)");
    if (!std::regex_match(s, re)) return false;
    mark();
    Directive d = parse_directive(s);
    if (!d.is_codegen()) {
      throw Error(ErrorKind::MalformedDirective,
                  "misplaced '#pragma cyclus' directive: " + std::string(trim(s)));
    }
    count_directive();
    return true;
  }

  bool run_filter(FilterId id, const std::string& s) {
    switch (id) {
      case FilterId::ClassAndSuperclass: return class_and_superclass(s);
      case FilterId::Access: return access(s);
      case FilterId::Exec: return exec(s);
      case FilterId::UsingNamespace: return using_namespace(s);
      case FilterId::NamespaceAlias: return namespace_alias(s);
      case FilterId::Namespace: return namespace_open(s);
      case FilterId::Typedef: return typedef_(s);
      case FilterId::Using: return using_(s);
      case FilterId::Linemarker: return linemarker(s);
      case FilterId::NoteDecoration: return note_decoration(s);
      case FilterId::VarDecoration: return var_decoration(s);
      case FilterId::VarDeclaration: return var_declaration(s);
      case FilterId::PragmaCyclusError: return pragma_error(s);
    }
    return false;
  }

  // -- statements -----------------------------------------------------------

  void pop_frame() {
    if (frames.empty()) return;
    if (frames.back().kind == FrameKind::Class && pending) {
      throw Error(ErrorKind::DanglingDecoration,
                  "'#pragma cyclus var' is not followed by a member declaration",
                  pending->where);
    }
    frames.pop_back();
    scope.pop();
  }

  void scan_braces(const std::string& s) {
    char quote = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      char c = s[i];
      if (quote) {
        if (c == '\\') ++i;
        else if (c == quote) quote = 0;
        continue;
      }
      if (c == '"' || c == '\'') {
        quote = c;
      } else if (c == '{') {
        if (consumed_brace && *consumed_brace == i) continue;
        scope.push_block();
        frames.push_back({FrameKind::Block});
      } else if (c == '}') {
        pop_frame();
      }
    }
  }

  std::optional<FilterId> apply(std::string_view statement) {
    std::string s(trim(statement));
    consumed_brace.reset();
    consumed_end.reset();
    transformations = 0;
    std::optional<FilterId> fired;
    auto record = [&] {
      ++stats.statements;
      if (fired) {
        ++stats.matched[static_cast<std::size_t>(*fired)];
      } else {
        ++stats.passed_through;
      }
      stats.max_transformations_per_statement =
          std::max(stats.max_transformations_per_statement, transformations);
      if (tracing) trace.push_back({stmt_loc, s, fired});
    };
    std::string rest;
    try {
      for (FilterId id : options.order) {
        fired = id;
        if (run_filter(id, s)) break;
        fired.reset();
      }
      if (consumed_end && *consumed_end < s.size()) {
        rest = s.substr(*consumed_end);
        s.resize(*consumed_end);
      }
      if (!s.empty() && s.front() != '#') scan_braces(s);
    } catch (const Error& e) {
      record();
      throw e.located(stmt_loc);
    }
    record();
    for (const auto& piece : split_statements(rest)) apply(piece);
    return fired;
  }

  void flush() {
    if (trim(buffer).empty()) {
      buffer.clear();
      return;
    }
    stmt_loc = buffer_loc;
    std::string s = std::move(buffer);
    buffer.clear();
    for (const auto& piece : split_statements(s)) apply(piece);
  }

  void feed(std::string_view line) {
    std::string_view t = trim(line);
    if (!t.empty() && t.front() == '#') {
      flush();
      if (parse_linemarker(t)) {
        stmt_loc = {cur_file, next_line};
        apply(t);
        return;
      }
      stmt_loc = {cur_file, next_line++};
      apply(t);
      return;
    }
    SourceLocation here{cur_file, next_line++};
    if (t.empty()) return;
    if (buffer.empty()) {
      buffer_loc = here;
      buffer = std::string(t);
    } else {
      buffer += ' ';
      buffer += t;
    }
    if (is_statement_complete(buffer)) flush();
  }

  Registry finish() {
    flush();
    if (pending) {
      throw Error(ErrorKind::DanglingDecoration,
                  "'#pragma cyclus var' is not followed by a member declaration",
                  pending->where);
    }
    std::map<std::string, std::vector<std::string>> parents_of;
    for (const auto& c : classes) parents_of[c.name] = c.parents;
    Registry reg;
    reg.classes = classes;
    for (auto& info : infos) {
      std::vector<std::string> all;
      std::function<void(const std::vector<std::string>&)> walk =
          [&](const std::vector<std::string>& ps) {
            for (const auto& p : ps) {
              if (p == info.name || std::find(all.begin(), all.end(), p) != all.end()) continue;
              all.push_back(p);
              if (auto it = parents_of.find(p); it != parents_of.end()) walk(it->second);
            }
          };
      walk(info.parents);
      info.all_parents = std::move(all);
      info.entity = classify_entity(info);
      if (info.directive_count > 0) reg.archetypes.push_back(info);
    }
    return reg;
  }
};

Accumulator::Accumulator(AccumulateOptions options)
    : impl_(std::make_unique<Impl>(std::move(options))) {}
Accumulator::~Accumulator() = default;
Accumulator::Accumulator(Accumulator&&) noexcept = default;
Accumulator& Accumulator::operator=(Accumulator&&) noexcept = default;

void Accumulator::feed_line(std::string_view line) { impl_->feed(line); }

std::optional<FilterId> Accumulator::apply_filters(std::string_view statement) {
  impl_->stmt_loc = {impl_->cur_file, impl_->next_line};
  return impl_->apply(statement);
}

Registry Accumulator::finish() { return impl_->finish(); }
const FilterStats& Accumulator::stats() const { return impl_->stats; }
const std::vector<TraceEntry>& Accumulator::trace() const { return impl_->trace; }
void Accumulator::enable_trace(bool on) { impl_->tracing = on; }
const TypeScope& Accumulator::scope() const { return impl_->scope; }
const MetaEnv& Accumulator::env() const { return impl_->env; }

Registry accumulate_text(std::string_view text, const AccumulateOptions& options) {
  Accumulator acc(options);
  for (const auto& line : split_lines(text)) acc.feed_line(line);
  return acc.finish();
}

Registry accumulate(const NormalizedSource& src, const AccumulateOptions& options) {
  return accumulate_text(src.render(), options);
}

}  // namespace cycpp
