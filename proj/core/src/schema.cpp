#include "cycpp/schema.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <set>

namespace cycpp {

using Kind = RngNode::Kind;

RngNode RngNode::element(std::string name, std::vector<RngNode> children) {
  return RngNode{Kind::Element, std::move(name), std::move(children)};
}
RngNode RngNode::data(std::string type) { return RngNode{Kind::Data, std::move(type), {}}; }
RngNode RngNode::text() { return RngNode{Kind::Text, {}, {}}; }
RngNode RngNode::empty() { return RngNode{Kind::Empty, {}, {}}; }
RngNode RngNode::ref(std::string name) { return RngNode{Kind::Ref, std::move(name), {}}; }
RngNode RngNode::define(std::string name, std::vector<RngNode> children) {
  return RngNode{Kind::Define, std::move(name), std::move(children)};
}
RngNode RngNode::wrap(Kind kind, std::vector<RngNode> children) {
  return RngNode{kind, {}, std::move(children)};
}

std::string_view to_tag(Kind kind) {
  switch (kind) {
    case Kind::Element: return "element";
    case Kind::Data: return "data";
    case Kind::Text: return "text";
    case Kind::Empty: return "empty";
    case Kind::Optional: return "optional";
    case Kind::ZeroOrMore: return "zeroOrMore";
    case Kind::OneOrMore: return "oneOrMore";
    case Kind::Interleave: return "interleave";
    case Kind::Choice: return "choice";
    case Kind::Group: return "group";
    case Kind::Ref: return "ref";
    case Kind::Define: return "define";
    case Kind::Start: return "start";
    case Kind::Grammar: return "grammar";
  }
  return "?";
}

namespace {

constexpr std::string_view kRngNamespace = "http://relaxng.org/ns/structure/1.0";
constexpr std::string_view kXsdLibrary = "http://www.w3.org/2001/XMLSchema-datatypes";

std::optional<Kind> kind_from_tag(std::string_view tag) {
  static const std::map<std::string_view, Kind> tags = {
      {"element", Kind::Element},       {"data", Kind::Data},
      {"text", Kind::Text},             {"empty", Kind::Empty},
      {"optional", Kind::Optional},     {"zeroOrMore", Kind::ZeroOrMore},
      {"oneOrMore", Kind::OneOrMore},   {"interleave", Kind::Interleave},
      {"choice", Kind::Choice},         {"group", Kind::Group},
      {"ref", Kind::Ref},               {"define", Kind::Define},
      {"start", Kind::Start},           {"grammar", Kind::Grammar},
  };
  auto it = tags.find(tag);
  if (it == tags.end()) return std::nullopt;
  return it->second;
}

bool is_container(std::string_view name) {
  return name == "std::vector" || name == "std::set" || name == "std::list";
}

std::size_t count_leaves(const CanonicalType& t) {
  if (!t.is_template()) return 1;
  std::size_t n = 0;
  for (const auto& p : t.params) n += count_leaves(p);
  return n;
}

[[noreturn]] void unmappable(const CanonicalType& t, const StateVar& var) {
  throw Error(ErrorKind::UnmappableType,
              "no schema datatype for '" + t.cpp() + "' in state variable '" + var.name +
                  "'; add a 'schema' or 'schematype' annotation",
              var.where);
}

std::vector<RngNode> type_pattern(const CanonicalType& t, const StateVar& var,
                                  const std::vector<std::string>& overrides, std::size_t& leaf) {
  if (!t.is_template()) {
    std::size_t mine = leaf++;
    if (mine < overrides.size()) return {RngNode::data(overrides[mine])};
    auto xsd = xsd_type(t);
    if (!xsd) unmappable(t, var);
    return {RngNode::data(*xsd)};
  }
  if (is_container(t.name)) {
    auto item = RngNode::element("val", type_pattern(t.params[0], var, overrides, leaf));
    return {RngNode::wrap(Kind::OneOrMore, {std::move(item)})};
  }
  if (t.name == "std::map") {
    auto key = RngNode::element("key", type_pattern(t.params[0], var, overrides, leaf));
    auto val = RngNode::element("val", type_pattern(t.params[1], var, overrides, leaf));
    auto item = RngNode::element("item", {std::move(key), std::move(val)});
    return {RngNode::wrap(Kind::OneOrMore, {std::move(item)})};
  }
  if (t.name == "std::pair") {
    auto first = RngNode::element("first", type_pattern(t.params[0], var, overrides, leaf));
    auto second = RngNode::element("second", type_pattern(t.params[1], var, overrides, leaf));
    return {std::move(first), std::move(second)};
  }
  unmappable(t, var);
}

}  // namespace

std::optional<std::string> xsd_type(const CanonicalType& t) {
  if (t.is_template()) return std::nullopt;
  if (t.name == "bool") return "boolean";
  if (t.name == "int") return "int";
  if (t.name == "float") return "float";
  if (t.name == "double") return "double";
  if (t.name == "std::string") return "string";
  return std::nullopt;
}

RngNode build_var_schema(const StateVar& var) {
  const MetaObject* ann = var.annotation.is_object() ? &var.annotation.as_object() : nullptr;
  if (ann) {
    if (const MetaValue* s = ann->find("schema")) {
      if (!s->is_string()) {
        throw Error(ErrorKind::SchemaError,
                    "'schema' annotation of '" + var.name + "' must be a string", var.where);
      }
      try {
        return parse_rng(s->as_string());
      } catch (const Error& e) {
        throw Error(ErrorKind::SchemaError,
                    "'schema' annotation of '" + var.name + "': " + e.what(), var.where);
      }
    }
  }

  std::vector<std::string> overrides;
  std::size_t leaves = count_leaves(var.type);
  if (const MetaValue* st = ann ? ann->find("schematype") : nullptr) {
    if (st->is_string()) {
      if (leaves != 1) {
        throw Error(ErrorKind::SchemaError,
                    "'schematype' of '" + var.name + "' is a single name but the type has " +
                        std::to_string(leaves) + " leaves; give a list",
                    var.where);
      }
      overrides.push_back(st->as_string());
    } else if (st->is_array()) {
      for (const auto& item : st->as_array()) {
        if (!item.is_string()) {
          throw Error(ErrorKind::SchemaError,
                      "'schematype' of '" + var.name + "' must list strings", var.where);
        }
        overrides.push_back(item.as_string());
      }
      if (overrides.size() != leaves) {
        throw Error(ErrorKind::SchemaError,
                    "'schematype' of '" + var.name + "' names " +
                        std::to_string(overrides.size()) + " types for " +
                        std::to_string(leaves) + " leaves",
                    var.where);
      }
    } else {
      throw Error(ErrorKind::SchemaError,
                  "'schematype' of '" + var.name + "' must be a string or list", var.where);
    }
  }

  std::size_t leaf = 0;
  RngNode elem = RngNode::element(var.name, type_pattern(var.type, var, overrides, leaf));
  if (ann && ann->contains("default")) return RngNode::wrap(Kind::Optional, {std::move(elem)});
  return elem;
}

RngNode build_archetype_schema(const ArchetypeInfo& info) {
  std::vector<const StateVar*> vars;
  for (const auto& v : info.state_vars) vars.push_back(&v);
  std::stable_sort(vars.begin(), vars.end(),
                   [](const StateVar* a, const StateVar* b) { return a->index < b->index; });
  RngNode inter = RngNode::wrap(Kind::Interleave, {});
  for (const StateVar* v : vars) inter.children.push_back(build_var_schema(*v));
  return RngNode::element(info.short_name, {std::move(inter)});
}

RngNode assemble_master(const std::vector<RngNode>& schemas) {
  if (schemas.empty()) throw Error(ErrorKind::SchemaError, "no archetype schemas to assemble");
  std::vector<RngNode> defines;
  std::vector<RngNode> refs;
  std::set<std::string> seen;
  for (const auto& s : schemas) {
    if (s.kind != Kind::Element || s.name.empty()) {
      throw Error(ErrorKind::SchemaError, "archetype schema must be a named element, got <" +
                                              std::string(to_tag(s.kind)) + ">");
    }
    if (!seen.insert(s.name).second) {
      throw Error(ErrorKind::DuplicateArchetypeName, "archetype '" + s.name + "' appears twice");
    }
    refs.push_back(RngNode::ref(s.name));
    defines.push_back(RngNode::define(s.name, {s}));
  }

  RngNode config_body = refs.size() == 1 ? refs.front() : RngNode::wrap(Kind::Choice, refs);
  RngNode facility = RngNode::element(
      "facility",
      {RngNode::element("name", {RngNode::text()}),
       RngNode::wrap(Kind::Optional,
                     {RngNode::element("lifetime", {RngNode::data("nonNegativeInteger")})}),
       RngNode::element("config", {std::move(config_body)})});

  RngNode grammar = RngNode::wrap(Kind::Grammar, {});
  grammar.children.push_back(RngNode::wrap(
      Kind::Start, {RngNode::wrap(Kind::Choice, {RngNode::element("simulation",
                                                                  {RngNode::ref("facilities")}),
                                                 RngNode::ref("facilities")})}));
  grammar.children.push_back(
      RngNode::define("facilities", {RngNode::wrap(Kind::OneOrMore, {std::move(facility)})}));
  for (auto& d : defines) grammar.children.push_back(std::move(d));
  return grammar;
}

// ---------------------------------------------------------------------------
// Rendering and parsing

namespace {

std::string escape_attr(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void render_node(const RngNode& n, int depth, const RenderOptions& o, std::string& out) {
  std::string ind(static_cast<std::size_t>(o.base_indent + depth * o.indent), ' ');
  std::string_view tag = to_tag(n.kind);
  std::string attrs;
  switch (n.kind) {
    case Kind::Element:
    case Kind::Ref:
    case Kind::Define:
      attrs = " name=\"" + escape_attr(n.name) + "\"";
      break;
    case Kind::Data:
      attrs = " type=\"" + escape_attr(n.name) + "\"";
      break;
    case Kind::Grammar:
      attrs = " xmlns=\"" + std::string(kRngNamespace) + "\" datatypeLibrary=\"" +
              std::string(kXsdLibrary) + "\"";
      break;
    default:
      break;
  }
  out += ind;
  out += '<';
  out += tag;
  out += attrs;
  if (n.children.empty()) {
    out += o.space_before_slash ? " />\n" : "/>\n";
    return;
  }
  out += ">\n";
  for (const auto& c : n.children) render_node(c, depth + 1, o, out);
  out += ind;
  out += "</";
  out += tag;
  out += ">\n";
}

std::string_view local_name(std::string_view tag) {
  auto colon = tag.rfind(':');
  return colon == std::string_view::npos ? tag : tag.substr(colon + 1);
}

bool blank(std::string_view s) {
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

RngNode from_xml(const XmlNode& x) {
  auto fail = [&](const std::string& why) -> Error {
    return Error(ErrorKind::SchemaError, "line " + std::to_string(x.line) + ": " + why,
                 SourceLocation{"<rng>", x.line});
  };
  std::string_view tag = local_name(x.name);
  auto kind = kind_from_tag(tag);
  if (!kind) throw fail("unsupported pattern <" + std::string(tag) + ">");
  if (!blank(x.text)) throw fail("unexpected text inside <" + std::string(tag) + ">");

  RngNode n;
  n.kind = *kind;
  auto need = [&](const char* attr) {
    const std::string* v = x.attribute(attr);
    if (!v || v->empty()) {
      throw fail("<" + std::string(tag) + "> needs a non-empty '" + attr + "' attribute");
    }
    return *v;
  };
  switch (n.kind) {
    case Kind::Element:
    case Kind::Ref:
    case Kind::Define:
      n.name = need("name");
      break;
    case Kind::Data:
      n.name = need("type");
      break;
    default:
      break;
  }
  for (const auto& c : x.children) n.children.push_back(from_xml(c));

  switch (n.kind) {
    case Kind::Data:
    case Kind::Text:
    case Kind::Empty:
    case Kind::Ref:
      if (!n.children.empty()) throw fail("<" + std::string(tag) + "> takes no children");
      break;
    case Kind::Optional:
    case Kind::ZeroOrMore:
    case Kind::OneOrMore:
    case Kind::Define:
    case Kind::Start:
      if (n.children.empty()) throw fail("<" + std::string(tag) + "> needs a pattern");
      break;
    case Kind::Grammar: {
      int starts = 0;
      for (const auto& c : n.children) {
        if (c.kind == Kind::Start) ++starts;
        else if (c.kind != Kind::Define) throw fail("<grammar> holds only <start> and <define>");
      }
      if (starts != 1) throw fail("<grammar> needs exactly one <start>");
      break;
    }
    default:
      break;
  }
  return n;
}

}  // namespace

std::string render_rng(const RngNode& node, const RenderOptions& options) {
  std::string out;
  render_node(node, 0, options, out);
  return out;
}

RngNode parse_rng(std::string_view text) { return from_xml(parse_xml(text)); }

// ---------------------------------------------------------------------------
// Validation

std::string ValidationError::render() const {
  return "Entity: line " + std::to_string(line) + ": element " + element +
         ": Relax-NG validity error : " + message;
}

std::string ValidationResult::report() const {
  if (errors.empty()) return {};
  std::string out;
  for (const auto& e : errors) out += e.render() + "\n";
  out += kValidationSummary;
  out += "\n";
  return out;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool parse_integer(std::string_view s, long long& out) {
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parse_real(std::string_view s, bool allow_exponent) {
  if (s == "INF" || s == "-INF" || s == "+INF" || s == "NaN") return allow_exponent;
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  }
  if (digits == 0) return false;
  if (allow_exponent && i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t exp = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++exp;
    if (exp == 0) return false;
  }
  return i == s.size();
}

bool datatype_allows(std::string_view type, std::string_view raw) {
  std::string v = trim(raw);
  if (type == "string" || type == "token" || type == "normalizedString") return true;
  if (type == "boolean") return v == "true" || v == "false" || v == "1" || v == "0";
  if (type == "float" || type == "double") return parse_real(v, true);
  if (type == "decimal") return parse_real(v, false);
  long long n = 0;
  if (type == "int") {
    return parse_integer(v, n) && n >= std::numeric_limits<std::int32_t>::min() &&
           n <= std::numeric_limits<std::int32_t>::max();
  }
  if (type == "long" || type == "integer") return parse_integer(v, n);
  if (type == "nonNegativeInteger") return parse_integer(v, n) && n >= 0;
  if (type == "positiveInteger") return parse_integer(v, n) && n > 0;
  if (type == "nonPositiveInteger") return parse_integer(v, n) && n <= 0;
  if (type == "negativeInteger") return parse_integer(v, n) && n < 0;
  return true;
}

struct Pat;
using P = std::shared_ptr<const Pat>;

struct Pat {
  enum K { Empty, NotAllowed, Text, Data, Element, Choice, Group, Interleave, OneOrMore, Ref } k;
  std::string name;
  P a, b;
};

const P& empty_p() {
  static const P p = std::make_shared<Pat>(Pat{Pat::Empty, {}, nullptr, nullptr});
  return p;
}
const P& not_allowed() {
  static const P p = std::make_shared<Pat>(Pat{Pat::NotAllowed, {}, nullptr, nullptr});
  return p;
}
const P& text_p() {
  static const P p = std::make_shared<Pat>(Pat{Pat::Text, {}, nullptr, nullptr});
  return p;
}

P make(Pat::K k, std::string name = {}, P a = nullptr, P b = nullptr) {
  return std::make_shared<Pat>(Pat{k, std::move(name), std::move(a), std::move(b)});
}

P choice(P a, P b) {
  if (a->k == Pat::NotAllowed) return b;
  if (b->k == Pat::NotAllowed) return a;
  if (a == b) return a;
  if (a->k == Pat::Empty && b->k == Pat::Empty) return a;
  return make(Pat::Choice, {}, std::move(a), std::move(b));
}
P group(P a, P b) {
  if (a->k == Pat::NotAllowed || b->k == Pat::NotAllowed) return not_allowed();
  if (a->k == Pat::Empty) return b;
  if (b->k == Pat::Empty) return a;
  return make(Pat::Group, {}, std::move(a), std::move(b));
}
P interleave(P a, P b) {
  if (a->k == Pat::NotAllowed || b->k == Pat::NotAllowed) return not_allowed();
  if (a->k == Pat::Empty) return b;
  if (b->k == Pat::Empty) return a;
  return make(Pat::Interleave, {}, std::move(a), std::move(b));
}
P one_or_more(P a) {
  if (a->k == Pat::NotAllowed || a->k == Pat::Empty) return a;
  return make(Pat::OneOrMore, {}, std::move(a));
}

class Validator {
 public:
  explicit Validator(const RngNode& schema) {
    if (schema.kind == Kind::Grammar) {
      for (const auto& c : schema.children) {
        if (c.kind == Kind::Define) {
          if (defines_.count(c.name)) {
            throw Error(ErrorKind::SchemaError, "define '" + c.name + "' appears twice");
          }
          defines_[c.name] = nullptr;
        }
      }
      for (const auto& c : schema.children) {
        if (c.kind == Kind::Define) defines_[c.name] = fold(c.children, group);
        if (c.kind == Kind::Start) start_ = fold(c.children, group);
      }
      if (!start_) throw Error(ErrorKind::SchemaError, "grammar has no start");
    } else {
      start_ = convert(schema);
    }
  }

  ValidationResult run(const XmlNode& doc) {
    ValidationResult result;
    Step step;
    P after = deriv_element(start_, doc, step);
    if (after->k == Pat::NotAllowed || !nullable(after)) {
      if (step.name_matched) {
        result.errors = std::move(step.child_errors);
      } else {
        auto expected = first_element(start_);
        result.errors.push_back({doc.line, doc.name,
                                 expected ? "Expecting element " + *expected + ", got " + doc.name
                                          : "Did not expect element " + doc.name + " there"});
      }
    }
    return result;
  }

 private:
  struct Step {
    bool name_matched = false;
    std::vector<ValidationError> child_errors;
    std::map<const Pat*, bool> memo;
  };

  P fold(const std::vector<RngNode>& nodes, P (*op)(P, P)) {
    P acc;
    for (const auto& n : nodes) acc = acc ? op(acc, convert(n)) : convert(n);
    return acc ? acc : empty_p();
  }

  P convert(const RngNode& n) {
    switch (n.kind) {
      case Kind::Element:
        return make(Pat::Element, n.name, fold(n.children, group));
      case Kind::Data:
        return make(Pat::Data, n.name);
      case Kind::Text:
        return text_p();
      case Kind::Empty:
        return empty_p();
      case Kind::Optional:
        return choice(fold(n.children, group), empty_p());
      case Kind::ZeroOrMore:
        return choice(one_or_more(fold(n.children, group)), empty_p());
      case Kind::OneOrMore:
        return one_or_more(fold(n.children, group));
      case Kind::Interleave:
        return fold(n.children, interleave);
      case Kind::Choice: {
        if (n.children.empty()) return not_allowed();
        return fold(n.children, choice);
      }
      case Kind::Group:
        return fold(n.children, group);
      case Kind::Ref:
        if (!defines_.count(n.name)) {
          throw Error(ErrorKind::SchemaError, "reference to undefined pattern '" + n.name + "'");
        }
        return make(Pat::Ref, n.name);
      case Kind::Define:
      case Kind::Start:
      case Kind::Grammar:
        throw Error(ErrorKind::SchemaError,
                    "<" + std::string(to_tag(n.kind)) + "> is only allowed at grammar level");
    }
    return not_allowed();
  }

  const P& resolve(const Pat& p, int depth) const {
    if (depth > 64) {
      throw Error(ErrorKind::SchemaError, "reference '" + p.name + "' does not reach an element");
    }
    return defines_.at(p.name);
  }

  bool nullable(const P& p, int depth = 0) const {
    switch (p->k) {
      case Pat::Empty:
      case Pat::Text:
        return true;
      case Pat::NotAllowed:
      case Pat::Data:
      case Pat::Element:
        return false;
      case Pat::Choice:
        return nullable(p->a, depth) || nullable(p->b, depth);
      case Pat::Group:
      case Pat::Interleave:
        return nullable(p->a, depth) && nullable(p->b, depth);
      case Pat::OneOrMore:
        return nullable(p->a, depth);
      case Pat::Ref:
        return nullable(resolve(*p, depth), depth + 1);
    }
    return false;
  }

  std::optional<std::string> first_element(const P& p, int depth = 0) const {
    switch (p->k) {
      case Pat::Element:
        return p->name;
      case Pat::Choice: {
        if (auto a = first_element(p->a, depth)) return a;
        return first_element(p->b, depth);
      }
      case Pat::Group:
      case Pat::Interleave:
        if (!nullable(p->a, depth)) return first_element(p->a, depth);
        if (auto b = first_element(p->b, depth); b && !nullable(p->b, depth)) return b;
        if (auto a = first_element(p->a, depth)) return a;
        return first_element(p->b, depth);
      case Pat::OneOrMore:
        return first_element(p->a, depth);
      case Pat::Ref:
        return first_element(resolve(*p, depth), depth + 1);
      default:
        return std::nullopt;
    }
  }

  bool expects_data(const P& p, int depth = 0) const {
    switch (p->k) {
      case Pat::Data:
        return true;
      case Pat::Choice:
      case Pat::Group:
      case Pat::Interleave:
        return expects_data(p->a, depth) || expects_data(p->b, depth);
      case Pat::OneOrMore:
        return expects_data(p->a, depth);
      case Pat::Ref:
        return expects_data(resolve(*p, depth), depth + 1);
      default:
        return false;
    }
  }

  struct TextStep {
    std::optional<std::string> rejected_type;
  };

  P deriv_text(const P& p, const std::string& value, TextStep& st, int depth = 0) {
    switch (p->k) {
      case Pat::Text:
        return p;
      case Pat::Data:
        if (datatype_allows(p->name, value)) return empty_p();
        if (!st.rejected_type) st.rejected_type = p->name;
        return not_allowed();
      case Pat::Choice:
        return choice(deriv_text(p->a, value, st, depth), deriv_text(p->b, value, st, depth));
      case Pat::Group: {
        P r = group(deriv_text(p->a, value, st, depth), p->b);
        if (nullable(p->a, depth)) r = choice(r, deriv_text(p->b, value, st, depth));
        return r;
      }
      case Pat::Interleave:
        return choice(interleave(deriv_text(p->a, value, st, depth), p->b),
                      interleave(p->a, deriv_text(p->b, value, st, depth)));
      case Pat::OneOrMore:
        return group(deriv_text(p->a, value, st, depth),
                     choice(p, empty_p()));
      case Pat::Ref:
        return deriv_text(resolve(*p, depth), value, st, depth + 1);
      default:
        return not_allowed();
    }
  }

  P deriv_element(const P& p, const XmlNode& x, Step& st, int depth = 0) {
    switch (p->k) {
      case Pat::Element: {
        if (p->name != x.name) return not_allowed();
        auto memo = st.memo.find(p.get());
        bool ok;
        if (memo != st.memo.end()) {
          ok = memo->second;
        } else {
          std::vector<ValidationError> errs = check_content(x, p->a);
          ok = errs.empty();
          st.memo[p.get()] = ok;
          if (!ok && !st.name_matched) st.child_errors = std::move(errs);
        }
        st.name_matched = true;
        return ok ? empty_p() : not_allowed();
      }
      case Pat::Choice:
        return choice(deriv_element(p->a, x, st, depth), deriv_element(p->b, x, st, depth));
      case Pat::Group: {
        P r = group(deriv_element(p->a, x, st, depth), p->b);
        if (nullable(p->a, depth)) r = choice(r, deriv_element(p->b, x, st, depth));
        return r;
      }
      case Pat::Interleave:
        return choice(interleave(deriv_element(p->a, x, st, depth), p->b),
                      interleave(p->a, deriv_element(p->b, x, st, depth)));
      case Pat::OneOrMore:
        return group(deriv_element(p->a, x, st, depth), choice(p, empty_p()));
      case Pat::Ref:
        return deriv_element(resolve(*p, depth), x, st, depth + 1);
      default:
        return not_allowed();
    }
  }

  std::vector<ValidationError> content_failed(const XmlNode& x,
                                              std::vector<ValidationError> errs) const {
    errs.push_back({x.line, x.name, "Element " + x.name + " failed to validate content"});
    return errs;
  }

  std::vector<ValidationError> datatype_failed(const XmlNode& x, const std::string& type,
                                               const std::string& value) const {
    return content_failed(
        x, {{x.line, x.name, "Type " + type + " doesn't allow value '" + value + "'"},
            {x.line, x.name, "Error validating datatype " + type}});
  }

  std::vector<ValidationError> check_content(const XmlNode& x, const P& content) {
    P p = content;
    std::string value = trim(x.text);
    bool has_text = !value.empty();
    if (has_text) {
      TextStep ts;
      P after = deriv_text(p, value, ts);
      if (after->k == Pat::NotAllowed) {
        if (ts.rejected_type) return datatype_failed(x, *ts.rejected_type, value);
        return content_failed(x, {{x.line, x.name, "Element " + x.name + " has extra content: text"}});
      }
      p = after;
    }
    for (const auto& child : x.children) {
      Step st;
      P after = deriv_element(p, child, st);
      if (after->k == Pat::NotAllowed) {
        if (st.name_matched) return std::move(st.child_errors);
        return content_failed(
            x, {{child.line, child.name, "Did not expect element " + child.name + " there"}});
      }
      p = after;
    }
    if (nullable(p)) return {};
    if (!has_text && x.children.empty() && expects_data(p)) {
      TextStep ts;
      P after = deriv_text(p, value, ts);
      if (after->k != Pat::NotAllowed && nullable(after)) return {};
      if (ts.rejected_type) return datatype_failed(x, *ts.rejected_type, value);
    }
    auto expected = first_element(p);
    std::string msg = expected ? "Expecting an element " + *expected + ", got nothing"
                               : "Expecting data, got nothing";
    return content_failed(x, {{x.line, x.name, msg}});
  }

  std::map<std::string, P> defines_;
  P start_;
};

}  // namespace

ValidationResult validate(const XmlNode& doc, const RngNode& schema) {
  return Validator(schema).run(doc);
}

}  // namespace cycpp
