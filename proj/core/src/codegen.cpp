#include "cycpp/codegen.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <optional>
#include <regex>

#include "cycpp/schema.hpp"

namespace cycpp {

namespace {

using Lines = std::vector<std::string>;

struct Signature {
  std::string ret;
  std::string name;
  std::string params;
};

Signature signature(MemberFunction f, const std::string& cls) {
  switch (f) {
    case MemberFunction::InitFromCopy: return {"void", "InitFrom", cls + "* m"};
    case MemberFunction::InitFromDb: return {"void", "InitFrom", "cyclus::QueryableBackend* b"};
    case MemberFunction::InfileToDb:
      return {"void", "InfileToDb", "cyclus::InfileTree* tree, cyclus::DbInit di"};
    case MemberFunction::Clone: return {"cyclus::Agent*", "Clone", ""};
    case MemberFunction::Schema: return {"std::string", "schema", ""};
    case MemberFunction::Annotations: return {"Json::Value", "annotations", ""};
    case MemberFunction::InitInv: return {"void", "InitInv", "cyclus::Inventories& inv"};
    case MemberFunction::SnapshotInv: return {"cyclus::Inventories", "SnapshotInv", ""};
    case MemberFunction::Snapshot: return {"void", "Snapshot", "cyclus::DbInit di"};
  }
  return {};
}

std::vector<const StateVar*> ordered_vars(const ArchetypeInfo& info) {
  std::vector<const StateVar*> vars;
  for (const auto& v : info.state_vars) vars.push_back(&v);
  std::stable_sort(vars.begin(), vars.end(),
                   [](const StateVar* a, const StateVar* b) { return a->index < b->index; });
  return vars;
}

const MetaValue* ann_key(const StateVar& v, std::string_view key) {
  if (!v.annotation.is_object()) return nullptr;
  return v.annotation.as_object().find(key);
}

void append_code(Lines& out, std::string_view code, const std::string& prefix = "") {
  std::size_t start = 0;
  Lines lines;
  while (start <= code.size()) {
    std::size_t nl = code.find('\n', start);
    std::string_view line =
        code.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  while (!lines.empty() && lines.back().find_first_not_of(" \t") == std::string::npos) {
    lines.pop_back();
  }
  for (auto& l : lines) out.push_back(l.empty() ? l : prefix + l);
}

/// User code from a string-valued override key, or nullptr.
const std::string* code_override(const StateVar& v, std::string_view key) {
  const MetaValue* m = ann_key(v, key);
  if (!m) return nullptr;
  if (!m->is_string()) {
    throw Error(ErrorKind::InvalidAnnotation,
                "'" + std::string(key) + "' of '" + v.name + "' must be a string of C++ code",
                v.where);
  }
  return &m->as_string();
}

std::pair<const std::string*, const std::string*> infile_override(const StateVar& v) {
  const MetaValue* m = ann_key(v, "infiletodb");
  if (!m) return {nullptr, nullptr};
  auto shape_error = [&] {
    return Error(ErrorKind::OverrideShapeMismatch,
                 "'infiletodb' of '" + v.name + "' needs string 'read' and 'write' entries",
                 v.where);
  };
  if (!m->is_object()) throw shape_error();
  const MetaValue* r = m->as_object().find("read");
  const MetaValue* w = m->as_object().find("write");
  if (!r || !w || !r->is_string() || !w->is_string()) throw shape_error();
  return {&r->as_string(), &w->as_string()};
}

// -- literals -----------------------------------------------------------------

std::string number_literal(double d) {
  if (std::isnan(d)) return "std::numeric_limits<double>::quiet_NaN()";
  if (std::isinf(d)) {
    return d > 0 ? "std::numeric_limits<double>::infinity()"
                 : "-std::numeric_limits<double>::infinity()";
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", d);
  if (std::strtod(buf, nullptr) != d) std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

std::string cpp_literal(const CanonicalType& t, const MetaValue& v);

std::string joined(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += parts[i];
  }
  return out;
}

std::string key_literal(const CanonicalType& t, const std::string& key) {
  if (t.name == "std::string") return "\"" + escape_cpp_string(key) + "\"";
  return key;
}

std::string cpp_literal(const CanonicalType& t, const MetaValue& v) {
  const std::string& n = t.name;
  if (n == "bool") {
    if (v.is_bool()) return v.as_bool() ? "true" : "false";
    if (v.is_number()) return v.as_number() != 0 ? "true" : "false";
  } else if (n == "int") {
    if (v.is_int()) return std::to_string(v.as_int());
    if (v.is_number()) return std::to_string(static_cast<long long>(v.as_number()));
  } else if (n == "float" || n == "double") {
    if (v.is_int()) return std::to_string(v.as_int());
    if (v.is_number()) return number_literal(v.as_number());
  } else if (n == "std::string") {
    if (v.is_string()) return "\"" + escape_cpp_string(v.as_string()) + "\"";
  } else if (n == "std::vector" || n == "std::list" || n == "std::set") {
    if (v.is_array()) {
      std::vector<std::string> items;
      for (const auto& e : v.as_array()) items.push_back(cpp_literal(t.params[0], e));
      return t.cpp() + "{" + joined(items) + "}";
    }
  } else if (n == "std::pair") {
    if (v.is_array() && v.as_array().size() == 2) {
      return t.cpp() + "{" + cpp_literal(t.params[0], v.as_array()[0]) + ", " +
             cpp_literal(t.params[1], v.as_array()[1]) + "}";
    }
  } else if (n == "std::map") {
    std::vector<std::string> items;
    if (v.is_object()) {
      for (const auto& [k, val] : v.as_object()) {
        items.push_back("{" + key_literal(t.params[0], k) + ", " +
                        cpp_literal(t.params[1], val) + "}");
      }
      return t.cpp() + "{" + joined(items) + "}";
    }
    if (v.is_array()) {
      for (const auto& e : v.as_array()) {
        if (!e.is_array() || e.as_array().size() != 2) break;
        items.push_back("{" + cpp_literal(t.params[0], e.as_array()[0]) + ", " +
                        cpp_literal(t.params[1], e.as_array()[1]) + "}");
      }
      if (items.size() == v.as_array().size()) return t.cpp() + "{" + joined(items) + "}";
    }
  } else if (v.is_string()) {
    return t.cpp() + "(\"" + escape_cpp_string(v.as_string()) + "\")";
  } else if (v.is_null()) {
    return t.cpp() + "()";
  }
  throw Error(ErrorKind::DefaultTypeMismatch,
              "default " + render_json(v) + " cannot be spelled as '" + t.cpp() + "'");
}

// -- InfileToDb reads ----------------------------------------------------------

std::string suffixed(const char* base, int depth) {
  return depth == 0 ? base : base + std::to_string(depth);
}

std::string query_args(const std::string& tree, const std::string& path,
                       const std::string& index) {
  std::string out = tree + ", \"" + escape_cpp_string(path) + "\"";
  if (!index.empty()) out += ", " + index;
  return out;
}

void emit_read(Lines& out, const std::string& ind, const CanonicalType& t,
               const std::string& tree, const std::string& path, const std::string& index,
               const std::string& target, int depth) {
  const std::string& n = t.name;
  bool seq = n == "std::vector" || n == "std::list" || n == "std::set";
  if (!seq && n != "std::map" && n != "std::pair") {
    out.push_back(ind + target + " = cyclus::Query<" + t.cpp() + ">(" +
                  query_args(tree, path, index) + ");");
    return;
  }
  std::string sub = suffixed("sub", depth);
  std::string cnt = suffixed("n", depth);
  std::string it = suffixed("i", depth);
  std::string decl_tree = depth == 0 ? "" : "cyclus::InfileTree* ";
  std::string decl_int = depth == 0 ? "" : "int ";
  std::string in = ind + "  ";
  std::string subtree = index.empty() ? tree + "->SubTree(\"" + escape_cpp_string(path) + "\")"
                                      : tree + "->SubTree(\"" + escape_cpp_string(path) +
                                            "\", " + index + ")";
  out.push_back(ind + "{");
  out.push_back(in + decl_tree + sub + " = " + subtree + ";");
  if (n == "std::pair") {
    emit_read(out, in, t.params[0], sub, "first", "", target + ".first", depth + 1);
    emit_read(out, in, t.params[1], sub, "second", "", target + ".second", depth + 1);
    out.push_back(ind + "}");
    return;
  }
  std::string tmp = "tmp" + std::to_string(depth);
  std::string body = in + "  ";
  out.push_back(in + decl_int + cnt + " = " + sub + "->NMatches(\"" +
                (n == "std::map" ? "item" : "val") + "\");");
  out.push_back(in + t.cpp() + " " + tmp + ";");
  out.push_back(in + "for (" + decl_int + it + " = 0; " + it + " < " + cnt + "; ++" + it +
                ") {");
  if (n == "std::map") {
    std::string item = "item" + std::to_string(depth);
    std::string key = "key" + std::to_string(depth);
    std::string val = "val" + std::to_string(depth);
    out.push_back(body + "cyclus::InfileTree* " + item + " = " + sub + "->SubTree(\"item\", " +
                  it + ");");
    out.push_back(body + t.params[0].cpp() + " " + key + ";");
    emit_read(out, body, t.params[0], item, "key", "", key, depth + 1);
    out.push_back(body + t.params[1].cpp() + " " + val + ";");
    emit_read(out, body, t.params[1], item, "val", "", val, depth + 1);
    out.push_back(body + tmp + "[" + key + "] = " + val + ";");
  } else {
    std::string elem = "elem" + std::to_string(depth);
    out.push_back(body + t.params[0].cpp() + " " + elem + ";");
    emit_read(out, body, t.params[0], sub, "val", it, elem, depth + 1);
    out.push_back(body + tmp + (n == "std::set" ? ".insert(" : ".push_back(") + elem + ");");
  }
  out.push_back(in + "}");
  out.push_back(in + target + " = " + tmp + ";");
  out.push_back(ind + "}");
}

void infile_read(Lines& out, const StateVar& v) {
  const MetaValue* def = ann_key(v, "default");
  bool leaf = !v.type.is_template();
  if (leaf && def) {
    out.push_back(v.name + " = cyclus::OptionalQuery<" + v.type.cpp() + ">(tree, \"" +
                  escape_cpp_string(v.name) + "\", " + cpp_literal(v.type, *def) + ");");
  } else if (!def) {
    emit_read(out, "", v.type, "tree", v.name, "", v.name, 0);
  } else {
    out.push_back("if (tree->NMatches(\"" + escape_cpp_string(v.name) + "\") > 0) {");
    emit_read(out, "  ", v.type, "tree", v.name, "", v.name, 0);
    out.push_back("} else {");
    out.push_back("  " + v.name + " = " + cpp_literal(v.type, *def) + ";");
    out.push_back("}");
  }
}

void datum(Lines& out, const std::vector<const StateVar*>& vars, bool infile) {
  out.push_back("di.NewDatum(\"Info\")");
  for (const StateVar* v : vars) {
    const std::string* custom =
        infile ? infile_override(*v).second : code_override(*v, "snapshot");
    if (custom) {
      append_code(out, *custom);
    } else {
      out.push_back("->AddVal(\"" + escape_cpp_string(v->name) + "\", " + v->name + ")");
    }
  }
  out.push_back("->Record();");
}

// -- bodies -------------------------------------------------------------------

Lines body(MemberFunction f, const ArchetypeInfo& info, const std::string& cls) {
  Lines out;
  auto vars = ordered_vars(info);
  switch (f) {
    case MemberFunction::InitFromCopy:
      for (const StateVar* v : vars) {
        if (const auto* c = code_override(*v, "initfromcopy")) append_code(out, *c);
        else out.push_back(v->name + " = m->" + v->name + ";");
      }
      break;
    case MemberFunction::InitFromDb:
      out.push_back("cyclus::QueryResult qr = b->Query(\"Info\", NULL);");
      for (const StateVar* v : vars) {
        if (const auto* c = code_override(*v, "initfromdb")) {
          append_code(out, *c);
        } else {
          out.push_back(v->name + " = qr.GetVal<" + v->type.cpp() + ">(\"" +
                        escape_cpp_string(v->name) + "\");");
        }
      }
      break;
    case MemberFunction::InfileToDb:
      out.push_back("tree = tree->SubTree(\"config/*\");");
      out.push_back("cyclus::InfileTree* sub;");
      out.push_back("int i;");
      out.push_back("int n;");
      for (const StateVar* v : vars) {
        if (const auto* r = infile_override(*v).first) append_code(out, *r);
        else infile_read(out, *v);
      }
      datum(out, vars, true);
      break;
    case MemberFunction::Clone:
      out.push_back(cls + "* m = new " + cls + "(context());");
      out.push_back("m->InitFrom(this);");
      out.push_back("return m;");
      break;
    case MemberFunction::Schema: {
      out.push_back("return \"\"");
      std::string s = schema_string(info);
      std::size_t start = 0;
      while (start < s.size()) {
        std::size_t nl = s.find('\n', start);
        std::size_t end = nl == std::string::npos ? s.size() : nl + 1;
        out.push_back("  \"" + escape_cpp_string(s.substr(start, end - start)) + "\"");
        start = end;
      }
      out.push_back("  ;");
      break;
    }
    case MemberFunction::Annotations: {
      out.push_back("Json::Value root;");
      out.push_back("Json::Reader reader;");
      out.push_back("bool parsed_ok = reader.parse(");
      auto chunks = gen_annotations_literal(info);
      for (std::size_t i = 0; i < chunks.size(); ++i) {
        out.push_back("  " + chunks[i] + (i + 1 == chunks.size() ? ", root);" : ""));
      }
      out.push_back("if (!parsed_ok) {");
      out.push_back("  throw cyclus::ValueError(\"failed to parse annotations for " +
                    escape_cpp_string(info.name) + ".\");");
      out.push_back("}");
      out.push_back("return root;");
      break;
    }
    case MemberFunction::InitInv:
      for (const StateVar* v : vars) {
        if (const auto* c = code_override(*v, "initinv")) append_code(out, *c);
      }
      break;
    case MemberFunction::SnapshotInv:
      out.push_back("cyclus::Inventories invs;");
      for (const StateVar* v : vars) {
        if (const auto* c = code_override(*v, "snapshotinv")) append_code(out, *c);
      }
      out.push_back("return invs;");
      break;
    case MemberFunction::Snapshot:
      datum(out, vars, false);
      break;
  }
  return out;
}

}  // namespace

std::string escape_cpp_string(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\%03o", static_cast<unsigned char>(c));
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string schema_string(const ArchetypeInfo& info) {
  RenderOptions opts;
  opts.indent = 4;
  std::string out = "<interleave>\n";
  for (const StateVar* v : ordered_vars(info)) out += render_rng(build_var_schema(*v), opts);
  out += "</interleave>\n";
  return out;
}

std::vector<std::string> gen_annotations_literal(const ArchetypeInfo& info, std::size_t width) {
  if (width < 2) width = 2;
  std::string json = render_json(info.annotation());
  std::vector<std::string> chunks;
  std::string cur;
  for (char c : json) {
    std::string unit = escape_cpp_string(std::string_view(&c, 1));
    if (!cur.empty() && cur.size() + unit.size() > width) {
      chunks.push_back("\"" + cur + "\"");
      cur.clear();
    }
    cur += unit;
  }
  if (!cur.empty() || chunks.empty()) chunks.push_back("\"" + cur + "\"");
  return chunks;
}

std::string gen_member(MemberFunction f, CodegenForm form, const ArchetypeInfo& info,
                       const MemberOptions& options) {
  const std::string& ind = options.indent;
  std::string cls = options.in_class_body ? info.short_name : info.name;
  Signature sig = signature(f, cls);
  std::string out;
  auto emit_body = [&](const std::string& body_ind) {
    for (const auto& line : body(f, info, cls)) {
      out += line.empty() ? "\n" : body_ind + line + "\n";
    }
  };
  std::string head = options.in_class_body
                         ? "virtual " + sig.ret + " " + sig.name + "(" + sig.params + ")"
                         : sig.ret + " " + info.name + "::" + sig.name + "(" + sig.params + ")";
  switch (form) {
    case CodegenForm::Decl:
      out = ind + head + ";\n";
      break;
    case CodegenForm::Impl:
      emit_body(ind);
      break;
    case CodegenForm::Def:
      out = ind + head + " {\n";
      emit_body(ind + "  ");
      out += ind + (options.in_class_body ? "};\n" : "}\n");
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pass 3

namespace {

struct Tok {
  std::string text;
  int line = 0;
};

struct DirectiveLine {
  int line = 0;
  std::size_t begin = 0;  // byte range of the line, newline excluded
  std::size_t end = 0;
  bool has_newline = false;
};

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class SourceScanner {
 public:
  explicit SourceScanner(std::string_view src) : src_(src) {}

  void run() {
    std::size_t pos = 0;
    int line = 1;
    bool continuation = false;
    while (pos < src_.size()) {
      std::size_t nl = src_.find('\n', pos);
      std::size_t end = nl == std::string_view::npos ? src_.size() : nl;
      std::string_view text = src_.substr(pos, end - pos);
      if (continuation) {
        continuation = ends_with_backslash(text);
      } else if (!in_comment_ && raw_end_.empty() && first_is_hash(text)) {
        continuation = ends_with_backslash(text);
        static const std::regex pragma(R"(^\s*#\s*pragma\s+cyclus\b.*)");
        std::string s(text);
        if (!s.empty() && s.back() == '\r') s.pop_back();
        if (std::regex_match(s, pragma)) {
          pragmas.push_back({line, pos, end, nl != std::string_view::npos});
        }
      } else {
        scan(text, line);
      }
      pos = end + 1;
      ++line;
    }
  }

  std::vector<Tok> tokens;
  std::vector<DirectiveLine> pragmas;

 private:
  static bool ends_with_backslash(std::string_view t) {
    while (!t.empty() && (t.back() == '\r' || t.back() == ' ' || t.back() == '\t')) {
      t.remove_suffix(1);
    }
    return !t.empty() && t.back() == '\\';
  }

  static bool first_is_hash(std::string_view t) {
    auto i = t.find_first_not_of(" \t");
    return i != std::string_view::npos && t[i] == '#';
  }

  void scan(std::string_view t, int line) {
    std::size_t i = 0;
    while (i < t.size()) {
      if (!raw_end_.empty()) {
        auto close = t.find(raw_end_, i);
        if (close == std::string_view::npos) return;
        i = close + raw_end_.size();
        raw_end_.clear();
        continue;
      }
      if (in_comment_) {
        auto close = t.find("*/", i);
        if (close == std::string_view::npos) return;
        i = close + 2;
        in_comment_ = false;
        continue;
      }
      char c = t[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (t.substr(i, 2) == "//") {
        return;
      } else if (t.substr(i, 2) == "/*") {
        in_comment_ = true;
        i += 2;
      } else if (c == '"' || c == '\'') {
        bool raw = c == '"' && !tokens.empty() && tokens.back().line == line &&
                   !tokens.back().text.empty() && tokens.back().text.back() == 'R' &&
                   last_ident_adjacent_;
        if (raw) {
          tokens.pop_back();
          auto open = t.find('(', i);
          if (open == std::string_view::npos) return;
          raw_end_ = ")" + std::string(t.substr(i + 1, open - i - 1)) + "\"";
          i = open + 1;
          continue;
        }
        ++i;
        while (i < t.size() && t[i] != c) i += t[i] == '\\' ? 2 : 1;
        ++i;
        last_ident_adjacent_ = false;
      } else if (ident_char(c)) {
        std::size_t s = i;
        while (i < t.size() && ident_char(t[i])) ++i;
        tokens.push_back({std::string(t.substr(s, i - s)), line});
        last_ident_adjacent_ = i < t.size() && t[i] == '"';
      } else if (t.substr(i, 2) == "::") {
        tokens.push_back({"::", line});
        i += 2;
      } else {
        tokens.push_back({std::string(1, c), line});
        ++i;
      }
    }
  }

  std::string_view src_;
  bool in_comment_ = false;
  bool last_ident_adjacent_ = false;
  std::string raw_end_;
};

struct Frame {
  enum Kind { Namespace, Class, Block } kind;
  std::vector<std::string> names;
};

struct Context {
  std::optional<std::string> class_name;
  bool in_class_body = false;
};

Context context_of(const std::vector<Frame>& frames) {
  Context ctx;
  int innermost = -1;
  for (int i = static_cast<int>(frames.size()) - 1; i >= 0; --i) {
    if (frames[static_cast<std::size_t>(i)].kind == Frame::Class) {
      innermost = i;
      break;
    }
  }
  if (innermost < 0) return ctx;
  std::string q;
  for (int i = 0; i <= innermost; ++i) {
    const Frame& f = frames[static_cast<std::size_t>(i)];
    if (f.kind == Frame::Block) continue;
    for (const auto& n : f.names) {
      if (!q.empty()) q += "::";
      q += n;
    }
  }
  ctx.class_name = q;
  ctx.in_class_body = !frames.empty() && frames.back().kind == Frame::Class;
  return ctx;
}

bool is_ident(const std::string& s) { return !s.empty() && ident_char(s[0]); }

std::size_t skip_balanced(const std::vector<Tok>& toks, std::size_t j, const char* open,
                          const char* close) {
  int depth = 0;
  for (; j < toks.size(); ++j) {
    if (toks[j].text == open) ++depth;
    else if (toks[j].text == close && --depth == 0) return j + 1;
  }
  return j;
}

/// Frame contexts for each pragma line, in order.
std::vector<Context> pragma_contexts(const SourceScanner& sc) {
  const auto& toks = sc.tokens;
  std::vector<Context> out;
  std::vector<Frame> frames;
  std::size_t next = 0;
  auto record_until = [&](int line) {
    while (next < sc.pragmas.size() && sc.pragmas[next].line < line) {
      out.push_back(context_of(frames));
      ++next;
    }
  };
  for (std::size_t k = 0; k < toks.size(); ++k) {
    record_until(toks[k].line);
    const std::string& t = toks[k].text;
    if (t == "namespace") {
      std::vector<std::string> parts;
      std::size_t j = k + 1;
      while (j < toks.size() && (is_ident(toks[j].text) || toks[j].text == "::")) {
        if (toks[j].text != "::" && toks[j].text != "inline") parts.push_back(toks[j].text);
        ++j;
      }
      if (j < toks.size() && toks[j].text == "{") {
        record_until(toks[j].line);
        frames.push_back({Frame::Namespace, parts});
        k = j;
      }
    } else if ((t == "class" || t == "struct" || t == "union") &&
               !(k > 0 && toks[k - 1].text == "enum")) {
      std::vector<std::string> name;
      bool after_scope = false;
      std::size_t j = k + 1;
      while (j < toks.size()) {
        const std::string& u = toks[j].text;
        if (u == "final") {
          ++j;
        } else if (is_ident(u)) {
          if (!after_scope) name.clear();
          name.push_back(u);
          after_scope = false;
          ++j;
        } else if (u == "::") {
          after_scope = true;
          ++j;
        } else if (u == "<") {
          j = skip_balanced(toks, j, "<", ">");
        } else if (u == "[") {
          j = skip_balanced(toks, j, "[", "]");
        } else if (u == "(") {
          j = skip_balanced(toks, j, "(", ")");
        } else {
          break;
        }
      }
      if (j < toks.size() && toks[j].text == ":") {
        int parens = 0;
        while (j < toks.size()) {
          const std::string& u = toks[j].text;
          if (u == "(") ++parens;
          else if (u == ")") --parens;
          else if (parens == 0 && (u == "{" || u == ";")) break;
          ++j;
        }
      }
      if (j < toks.size() && toks[j].text == "{") {
        record_until(toks[j].line);
        frames.push_back({name.empty() ? Frame::Block : Frame::Class, name});
        k = j;
      }
    } else if (t == "{") {
      frames.push_back({Frame::Block, {}});
    } else if (t == "}") {
      if (!frames.empty()) frames.pop_back();
    }
  }
  record_until(std::numeric_limits<int>::max());
  return out;
}

const ArchetypeInfo& resolve_target(const Directive& d, const Context& ctx,
                                    const Registry& registry, std::string_view line_text) {
  if (d.class_name) return registry.find(*d.class_name);
  if (!ctx.class_name) {
    throw Error(ErrorKind::AmbiguousClass,
                "cannot tell which archetype '" + std::string(line_text) +
                    "' belongs to; name the class in the directive");
  }
  if (const auto* hit = registry.find_qualified(*ctx.class_name)) return *hit;
  auto pos = ctx.class_name->rfind("::");
  std::string short_name =
      pos == std::string::npos ? *ctx.class_name : ctx.class_name->substr(pos + 2);
  return registry.find(short_name);
}

}  // namespace

GenerateResult generate(std::string_view original, const Registry& registry,
                        const GenerateOptions& options) {
  SourceScanner sc(original);
  sc.run();
  std::vector<Context> contexts = pragma_contexts(sc);

  GenerateResult result;
  std::size_t copied = 0;
  for (std::size_t p = 0; p < sc.pragmas.size(); ++p) {
    const DirectiveLine& dl = sc.pragmas[p];
    std::string_view text = original.substr(dl.begin, dl.end - dl.begin);
    SourceLocation where{options.file_name, dl.line};
    try {
      Directive d = parse_directive(text);
      if (!d.is_codegen()) continue;
      const ArchetypeInfo& info = resolve_target(d, contexts[p], registry, text);

      MemberOptions mo;
      mo.indent = std::string(text.substr(0, text.find_first_not_of(" \t")));
      mo.in_class_body = contexts[p].in_class_body;
      std::string block;
      if (d.function) {
        block = gen_member(*d.function, d.form, info, mo);
      } else {
        for (std::size_t i = 0; i < kAllMemberFunctions.size(); ++i) {
          std::string part = gen_member(kAllMemberFunctions[i], d.form, info, mo);
          if (part.empty()) continue;
          if (!block.empty() && d.form == CodegenForm::Def) block += "\n";
          block += part;
        }
      }
      std::string emitted = block;
      if (!dl.has_newline && !emitted.empty() && emitted.back() == '\n') emitted.pop_back();

      result.text.append(original.substr(copied, dl.begin - copied));
      result.text += emitted;
      copied = dl.has_newline ? dl.end + 1 : dl.end;
      result.blocks.push_back({std::move(d), info.name, std::move(block), dl.line});
    } catch (const Error& e) {
      throw e.located(where);
    }
  }
  result.text.append(original.substr(copied));
  return result;
}

}  // namespace cycpp
