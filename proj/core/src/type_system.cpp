#include "cycpp/type_system.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <sstream>

#include "text_util.hpp"

namespace cycpp {

extern const char* const kBuiltinDbTypesTsv;  // generated from core/data/dbtypes.tsv

std::string CanonicalType::cpp() const {
  if (params.empty()) return name;
  std::string out = name + "<";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ", ";
    out += params[i].cpp();
  }
  out += ">";
  return out;
}

namespace types {

namespace {
constexpr std::array<std::string_view, 5> kPrimitives = {"bool", "int", "float", "double",
                                                         "std::string"};
constexpr std::array<std::string_view, 4> kClasses = {
    "cyclus::Blob", "boost::uuids::uuid", "cyclus::toolkit::ResBuff",
    "cyclus::toolkit::ResMap"};
struct TemplateInfo {
  std::string_view name;
  std::size_t arity;
  bool variable_length;
};
constexpr std::array<TemplateInfo, 5> kTemplates = {{{"std::vector", 1, true},
                                                     {"std::set", 1, true},
                                                     {"std::list", 1, true},
                                                     {"std::pair", 2, false},
                                                     {"std::map", 2, true}}};
}  // namespace

bool is_primitive(std::string_view name) {
  return std::find(kPrimitives.begin(), kPrimitives.end(), name) != kPrimitives.end();
}

bool is_known_class(std::string_view name) {
  return std::find(kClasses.begin(), kClasses.end(), name) != kClasses.end();
}

std::optional<std::size_t> template_arity(std::string_view name) {
  for (const auto& t : kTemplates) {
    if (t.name == name) return t.arity;
  }
  return std::nullopt;
}

bool is_known(std::string_view name) {
  return is_primitive(name) || is_known_class(name) || template_arity(name).has_value();
}

bool is_variable_length_template(std::string_view name) {
  for (const auto& t : kTemplates) {
    if (t.name == name) return t.variable_length;
  }
  return false;
}

}  // namespace types

// ---------------------------------------------------------------------------
// Tokenizing type expressions

namespace {

struct TypeToken {
  enum Kind { Name, Less, Greater, Comma, Star, Amp, Other, End } kind;
  std::string text;
};

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_elaborated_specifier(std::string_view word) {
  return word == "struct" || word == "class" || word == "typename" || word == "enum" ||
         word == "union";
}

std::vector<TypeToken> tokenize_type(std::string_view text) {
  std::vector<TypeToken> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (is_ident_char(c) || (c == ':' && i + 1 < text.size() && text[i + 1] == ':')) {
      std::string name;
      while (i < text.size()) {
        if (is_ident_char(text[i])) {
          name += text[i++];
        } else if (text[i] == ':' && i + 1 < text.size() && text[i + 1] == ':') {
          name += "::";
          i += 2;
        } else if (std::isspace(static_cast<unsigned char>(text[i]))) {
          // allow `std :: vector`
          std::size_t j = i;
          while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
          bool joins = (j + 1 < text.size() && text[j] == ':' && text[j + 1] == ':') ||
                       (!name.empty() && name.size() >= 2 &&
                        name.compare(name.size() - 2, 2, "::") == 0 && j < text.size() &&
                        is_ident_char(text[j]));
          if (!joins) break;
          i = j;
        } else {
          break;
        }
      }
      if (is_elaborated_specifier(name)) continue;
      out.push_back({TypeToken::Name, name});
    } else if (c == '<') {
      out.push_back({TypeToken::Less, "<"});
      ++i;
    } else if (c == '>') {
      out.push_back({TypeToken::Greater, ">"});
      ++i;
    } else if (c == ',') {
      out.push_back({TypeToken::Comma, ","});
      ++i;
    } else if (c == '*') {
      out.push_back({TypeToken::Star, "*"});
      ++i;
    } else if (c == '&') {
      out.push_back({TypeToken::Amp, "&"});
      ++i;
    } else {
      out.push_back({TypeToken::Other, std::string(1, c)});
      ++i;
    }
  }
  out.push_back({TypeToken::End, ""});
  return out;
}

std::string strip_global(std::string_view name) {
  if (starts_with(name, "::")) name.remove_prefix(2);
  return std::string(name);
}

}  // namespace

// ---------------------------------------------------------------------------
// TypeScope

TypeScope::TypeScope() = default;

void TypeScope::push_namespace(const std::string& name) {
  std::string qualified = prefix();
  if (name.empty()) {
    // Anonymous namespaces are transparent for lookup.
    qualified = qualified;
  } else {
    qualified = qualified.empty() ? name : qualified + "::" + name;
  }
  frames_.push_back({FrameKind::Namespace, qualified, {}, {}});
}

void TypeScope::push_class(const std::string& name) {
  std::string p = prefix();
  frames_.push_back({FrameKind::Class, p.empty() ? name : p + "::" + name, {}, {}});
}

void TypeScope::push_block() {
  std::string p = prefix();
  std::string tag = "{" + std::to_string(++block_counter_) + "}";
  frames_.push_back({FrameKind::Block, p.empty() ? tag : p + "::" + tag, {}, {}});
}

void TypeScope::pop() {
  if (!frames_.empty()) frames_.pop_back();
}

std::string TypeScope::prefix() const {
  return frames_.empty() ? std::string() : frames_.back().qualified;
}

std::string TypeScope::qualify(std::string_view name) const {
  std::string p = prefix();
  return p.empty() ? std::string(name) : p + "::" + std::string(name);
}

TypeScope::Context TypeScope::context() const {
  Context ctx;
  for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
    if (ctx.prefixes.empty() || ctx.prefixes.back() != it->qualified) {
      ctx.prefixes.push_back(it->qualified);
    }
  }
  if (ctx.prefixes.empty() || !ctx.prefixes.back().empty()) ctx.prefixes.push_back("");
  for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
    for (const auto& ns : it->using_namespaces) ctx.using_namespaces.push_back(ns);
    for (const auto& [alias, target] : it->namespace_aliases) {
      ctx.namespace_aliases.emplace(alias, target);
    }
  }
  return ctx;
}

std::vector<std::string> TypeScope::candidates(std::string_view raw,
                                               const Context& ctx) const {
  std::vector<std::string> out;
  if (starts_with(raw, "::")) {
    out.push_back(strip_global(raw));
    return out;
  }
  std::string name(raw);
  auto sep = name.find("::");
  std::string head = name.substr(0, sep);
  if (auto it = ctx.namespace_aliases.find(head); it != ctx.namespace_aliases.end()) {
    name = strip_global(it->second) + (sep == std::string::npos ? "" : name.substr(sep));
  }
  for (const auto& p : ctx.prefixes) out.push_back(p.empty() ? name : p + "::" + name);
  for (const auto& ns : ctx.using_namespaces) out.push_back(strip_global(ns) + "::" + name);
  return out;
}

std::optional<std::string> TypeScope::find_alias(std::string_view name,
                                                 const Context& ctx) const {
  for (const auto& cand : candidates(name, ctx)) {
    if (aliases_.count(cand)) return cand;
    if (types::is_known(cand)) return std::nullopt;
  }
  return std::nullopt;
}

std::optional<std::string> TypeScope::find_known(std::string_view name,
                                                 const Context& ctx) const {
  for (const auto& cand : candidates(name, ctx)) {
    if (aliases_.count(cand)) return std::nullopt;
    if (types::is_known(cand)) return cand;
  }
  return std::nullopt;
}

const TypeScope::AliasEdge* TypeScope::alias(const std::string& key) const {
  auto it = aliases_.find(key);
  return it == aliases_.end() ? nullptr : &it->second;
}

bool TypeScope::reaches(const std::string& from_text, const Context& ctx,
                        const std::string& key, std::vector<std::string>& visited) const {
  for (const auto& tok : tokenize_type(from_text)) {
    if (tok.kind != TypeToken::Name) continue;
    auto hit = find_alias(tok.text, ctx);
    if (!hit) continue;
    if (*hit == key) return true;
    if (std::find(visited.begin(), visited.end(), *hit) != visited.end()) continue;
    visited.push_back(*hit);
    const auto& edge = aliases_.at(*hit);
    if (reaches(edge.target, edge.context, key, visited)) return true;
  }
  return false;
}

void TypeScope::add_alias(const std::string& name, const std::string& target) {
  std::string trimmed(trim(target));
  auto toks = tokenize_type(trimmed);
  // `typedef struct foo foo;` names the same entity; nothing to record.
  if (toks.size() == 2 && toks[0].kind == TypeToken::Name && toks[0].text == name) return;
  std::string key = qualify(name);
  Context ctx = context();
  auto previous = aliases_.find(key);
  std::optional<AliasEdge> saved;
  if (previous != aliases_.end()) saved = previous->second;
  aliases_[key] = AliasEdge{trimmed, ctx};
  std::vector<std::string> visited;
  if (reaches(trimmed, ctx, key, visited)) {
    if (saved) {
      aliases_[key] = *saved;
    } else {
      aliases_.erase(key);
    }
    throw Error(ErrorKind::AliasCycle,
                "type alias '" + key + "' = '" + trimmed + "' would form a cycle");
  }
}

void TypeScope::add_using_declaration(const std::string& qualified) {
  std::string q = strip_global(qualified);
  auto sep = q.rfind("::");
  std::string last = sep == std::string::npos ? q : q.substr(sep + 2);
  if (last == q) return;
  add_alias(last, "::" + q);
}

void TypeScope::add_using_namespace(const std::string& ns) {
  if (frames_.empty()) {
    frames_.push_back({FrameKind::Namespace, "", {}, {}});
  }
  frames_.back().using_namespaces.push_back(strip_global(ns));
}

void TypeScope::add_namespace_alias(const std::string& alias, const std::string& target) {
  if (frames_.empty()) {
    frames_.push_back({FrameKind::Namespace, "", {}, {}});
  }
  // Resolve through outer namespace aliases so later lookups are one step.
  Context ctx = context();
  std::string resolved = strip_global(target);
  auto sep = resolved.find("::");
  if (auto it = ctx.namespace_aliases.find(resolved.substr(0, sep));
      it != ctx.namespace_aliases.end()) {
    resolved = it->second + (sep == std::string::npos ? "" : resolved.substr(sep));
  }
  frames_.back().namespace_aliases[alias] = resolved;
}

// ---------------------------------------------------------------------------
// canonicalize

namespace {

constexpr int kMaxAliasDepth = 256;

class TypeParser {
 public:
  TypeParser(std::string_view text, const TypeScope& scope, TypeScope::Context ctx,
             int depth)
      : text_(text), scope_(scope), ctx_(std::move(ctx)), depth_(depth),
        toks_(tokenize_type(text)) {}

  CanonicalType parse() {
    for (const auto& t : toks_) {
      if (t.kind == TypeToken::Star || t.kind == TypeToken::Amp) {
        throw Error(ErrorKind::PointerOrReference,
                    "pointer and reference types are not allowed: '" + std::string(text_) + "'");
      }
    }
    CanonicalType t = parse_type();
    if (peek().kind != TypeToken::End) fail("unexpected '" + peek().text + "'");
    return t;
  }

 private:
  const TypeToken& peek() const { return toks_[pos_]; }

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::UnresolvableName,
                "cannot resolve type '" + std::string(text_) + "': " + why);
  }

  CanonicalType parse_type() {
    if (peek().kind != TypeToken::Name) fail("expected a type name");
    std::string head = toks_[pos_++].text;
    std::vector<CanonicalType> params;
    bool has_args = false;
    if (peek().kind == TypeToken::Less) {
      has_args = true;
      ++pos_;
      if (peek().kind == TypeToken::Greater) fail("empty template argument list");
      params.push_back(parse_type());
      while (peek().kind == TypeToken::Comma) {
        ++pos_;
        params.push_back(parse_type());
      }
      if (peek().kind != TypeToken::Greater) fail("expected '>'");
      ++pos_;
    }
    return has_args ? resolve_template(head, std::move(params)) : resolve_plain(head);
  }

  CanonicalType resolve_plain(const std::string& name) {
    if (auto key = scope_.find_alias(name, ctx_)) {
      const auto* edge = scope_.alias(*key);
      return recurse(edge->target, edge->context);
    }
    if (auto known = scope_.find_known(name, ctx_)) {
      if (types::template_arity(*known)) {
        throw Error(ErrorKind::UnknownTemplate,
                    "template '" + *known + "' used without arguments in '" +
                        std::string(text_) + "'");
      }
      return CanonicalType::leaf(*known);
    }
    throw Error(ErrorKind::UnresolvableName,
                "unknown type name '" + name + "' in '" + std::string(text_) + "'");
  }

  CanonicalType resolve_template(const std::string& name, std::vector<CanonicalType> params) {
    std::string head = name;
    TypeScope::Context ctx = ctx_;
    for (int hops = 0;; ++hops) {
      if (hops > kMaxAliasDepth) {
        throw Error(ErrorKind::AliasCycle, "alias chain too deep at '" + head + "'");
      }
      if (auto key = scope_.find_alias(head, ctx)) {
        const auto* edge = scope_.alias(*key);
        auto toks = tokenize_type(edge->target);
        if (toks.size() != 2 || toks[0].kind != TypeToken::Name) {
          throw Error(ErrorKind::UnknownTemplate,
                      "alias '" + head + "' does not name a template");
        }
        head = toks[0].text;
        ctx = edge->context;
        continue;
      }
      break;
    }
    auto known = scope_.find_known(head, ctx);
    auto arity = known ? types::template_arity(*known) : std::nullopt;
    if (!arity) {
      throw Error(ErrorKind::UnknownTemplate,
                  "'" + name + "' is not a registered template in '" + std::string(text_) + "'");
    }
    if (*arity != params.size()) {
      throw Error(ErrorKind::UnknownTemplate,
                  "template '" + *known + "' takes " + std::to_string(*arity) +
                      " parameter(s), got " + std::to_string(params.size()));
    }
    return CanonicalType{*known, std::move(params)};
  }

  CanonicalType recurse(const std::string& target, const TypeScope::Context& ctx) {
    if (depth_ >= kMaxAliasDepth) {
      throw Error(ErrorKind::AliasCycle, "alias chain too deep in '" + std::string(text_) + "'");
    }
    return TypeParser(target, scope_, ctx, depth_ + 1).parse();
  }

  std::string_view text_;
  const TypeScope& scope_;
  TypeScope::Context ctx_;
  int depth_;
  std::vector<TypeToken> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

CanonicalType canonicalize(std::string_view text, const TypeScope& scope) {
  return TypeParser(text, scope, scope.context(), 0).parse();
}

std::string resolve_alias(std::string_view name, const TypeScope& scope) {
  std::string current(trim(name));
  TypeScope::Context ctx = scope.context();
  for (int hops = 0;; ++hops) {
    if (hops > kMaxAliasDepth) {
      throw Error(ErrorKind::AliasCycle, "alias chain from '" + std::string(name) + "' cycles");
    }
    auto toks = tokenize_type(current);
    if (toks.size() != 2 || toks[0].kind != TypeToken::Name) return current;
    auto key = scope.find_alias(toks[0].text, ctx);
    if (!key) return current;
    const auto* edge = scope.alias(*key);
    current = edge->target;
    ctx = edge->context;
  }
}

// ---------------------------------------------------------------------------
// rank and DbTypes

int rank(const CanonicalType& t) {
  int r = 0;
  if (t.name == "std::string" || types::is_variable_length_template(t.name)) r = 1;
  for (const auto& p : t.params) r += rank(p);
  return r;
}

namespace {
void collect_slots(const CanonicalType& t, std::vector<const CanonicalType*>& out) {
  if (t.name == "std::string" || types::is_variable_length_template(t.name)) {
    out.push_back(&t);
  }
  for (const auto& p : t.params) collect_slots(p, out);
}

std::string short_name(std::string_view name) {
  if (name == "std::string") return "STRING";
  if (name == "cyclus::Blob") return "BLOB";
  if (name == "boost::uuids::uuid") return "UUID";
  auto sep = name.rfind("::");
  std::string base(sep == std::string_view::npos ? name : name.substr(sep + 2));
  for (auto& c : base) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return base;
}

void build_name(const CanonicalType& t, std::uint32_t mask, std::size_t& slot,
                std::string& out) {
  if (t.name == "std::string" || types::is_variable_length_template(t.name)) {
    if (mask & (1u << slot)) out += "VL_";
    ++slot;
  }
  out += short_name(t.name);
  for (const auto& p : t.params) {
    out += "_";
    build_name(p, mask, slot, out);
  }
}
}  // namespace

std::vector<const CanonicalType*> vl_slots(const CanonicalType& t) {
  std::vector<const CanonicalType*> out;
  collect_slots(t, out);
  return out;
}

std::string db_type_name(const CanonicalType& t, std::uint32_t mask) {
  std::string out;
  std::size_t slot = 0;
  build_name(t, mask, slot, out);
  return out;
}

DbTypeTable DbTypeTable::parse(std::string_view tsv) {
  DbTypeTable table;
  int line_no = 0;
  for (const auto& raw : split_lines(tsv)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    std::string row(raw);
    if (!row.empty() && row.back() == '\r') row.pop_back();
    while (true) {
      auto tab = row.find('\t', start);
      fields.push_back(row.substr(start, tab == std::string::npos ? std::string::npos
                                                                  : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 5) {
      throw Error(ErrorKind::SyntaxError,
                  "dbtypes line " + std::to_string(line_no) + ": expected 5 fields");
    }
    DbTypeEntry e;
    try {
      e.id = std::stoi(fields[0]);
      e.rank = std::stoi(fields[3]);
      e.vl_mask = static_cast<std::uint32_t>(std::stoul(fields[4]));
    } catch (const std::exception&) {
      throw Error(ErrorKind::SyntaxError,
                  "dbtypes line " + std::to_string(line_no) + ": bad integer field");
    }
    e.name = fields[1];
    e.cpp = canonicalize(fields[2]);
    if (table.by_id_.count(e.id) || table.by_name_.count(e.name)) {
      throw Error(ErrorKind::SyntaxError,
                  "dbtypes line " + std::to_string(line_no) + ": duplicate id or name");
    }
    std::size_t idx = table.entries_.size();
    table.by_id_[e.id] = idx;
    table.by_name_[e.name] = idx;
    table.by_type_[e.cpp].push_back(idx);
    table.entries_.push_back(std::move(e));
  }
  return table;
}

const DbTypeTable& DbTypeTable::builtin() {
  static const DbTypeTable table = parse(kBuiltinDbTypesTsv);
  return table;
}

const DbTypeEntry& DbTypeTable::lookup(int id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) {
    throw Error(ErrorKind::NotFound, "no database type with id " + std::to_string(id));
  }
  return entries_[it->second];
}

const DbTypeEntry& DbTypeTable::lookup(std::string_view name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) {
    throw Error(ErrorKind::NotFound, "no database type named '" + std::string(name) + "'");
  }
  return entries_[it->second];
}

std::vector<DbTypeEntry> DbTypeTable::variants(const CanonicalType& t) const {
  auto it = by_type_.find(t);
  if (it == by_type_.end()) {
    throw Error(ErrorKind::UnregisteredType, "type '" + t.cpp() + "' has no database type");
  }
  std::vector<DbTypeEntry> out;
  for (auto idx : it->second) out.push_back(entries_[idx]);
  std::sort(out.begin(), out.end(),
            [](const DbTypeEntry& a, const DbTypeEntry& b) { return a.id < b.id; });
  return out;
}

const DbTypeEntry& DbTypeTable::base(const CanonicalType& t) const {
  auto it = by_type_.find(t);
  if (it != by_type_.end()) {
    for (auto idx : it->second) {
      if (entries_[idx].vl_mask == 0) return entries_[idx];
    }
  }
  throw Error(ErrorKind::UnregisteredType, "type '" + t.cpp() + "' has no database type");
}

std::vector<CanonicalType> DbTypeTable::registered_types() const {
  std::vector<CanonicalType> out;
  for (const auto& [t, _] : by_type_) out.push_back(t);
  return out;
}

std::vector<DbTypeEntry> db_variants(const CanonicalType& t) {
  return DbTypeTable::builtin().variants(t);
}

}  // namespace cycpp
