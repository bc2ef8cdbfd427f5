#include "cycpp/annotation.hpp"

#include <algorithm>
#include <array>
#include <charconv>

namespace cycpp {

namespace {

struct RegistryRow {
  std::string_view key;
  bool read_only;
  std::string_view description;
};

constexpr std::array<RegistryRow, 16> kVarKeys = {{
    {"type", true, "Canonical C++ type of the variable."},
    {"index", true, "0-based position of the variable in declaration order."},
    {"default", false, "Value used when the input file omits the variable."},
    {"shape", false, "Per-dimension lengths; -1 keeps a dimension variable-length."},
    {"doc", false, "Documentation string."},
    {"tooltip", false, "Short help text for user interfaces."},
    {"units", false, "Physical units."},
    {"userlevel", false, "Difficulty from 0 (easy) to 10 (expert)."},
    {"schematype", false, "XSD datatype to use in the input schema."},
    {"initfromcopy", false, "Replacement code for InitFrom(Agent*)."},
    {"initfromdb", false, "Replacement code for InitFrom(QueryableBackend*)."},
    {"infiletodb", false, "Replacement read/write code for InfileToDb()."},
    {"schema", false, "Replacement RELAX NG fragment."},
    {"snapshot", false, "Replacement code for Snapshot()."},
    {"snapshotinv", false, "Replacement code for SnapshotInv()."},
    {"initinv", false, "Replacement code for InitInv()."},
}};

constexpr std::array<RegistryRow, 8> kArchetypeKeys = {{
    {"vars", true, "Annotations of every state variable."},
    {"name", true, "Class name of the archetype."},
    {"entity", true, "Role derived from the class ancestry."},
    {"parents", true, "Direct superclasses."},
    {"all_parents", true, "Every known superclass."},
    {"doc", false, "Documentation string."},
    {"tooltip", false, "Short help text for user interfaces."},
    {"userlevel", false, "Difficulty from 0 (easy) to 10 (expert)."},
}};

template <std::size_t N>
const RegistryRow* find_row(const std::array<RegistryRow, N>& rows, std::string_view key) {
  for (const auto& r : rows) {
    if (r.key == key) return &r;
  }
  return nullptr;
}

void check_userlevel(const MetaValue& v) {
  if (!v.is_int() || v.as_int() < 0 || v.as_int() > 10) {
    throw Error(ErrorKind::InvalidAnnotation,
                "userlevel must be an integer from 0 to 10, got " + render_json(v));
  }
}

bool key_text_matches(const std::string& key, const CanonicalType& t) {
  if (t.name == "std::string") return true;
  if (t.name == "int") {
    long long v;
    auto res = std::from_chars(key.data(), key.data() + key.size(), v);
    return res.ec == std::errc() && res.ptr == key.data() + key.size();
  }
  if (t.name == "float" || t.name == "double") {
    double v;
    auto res = std::from_chars(key.data(), key.data() + key.size(), v);
    return res.ec == std::errc() && res.ptr == key.data() + key.size();
  }
  if (t.name == "bool") return key == "true" || key == "false";
  return false;
}

}  // namespace

KeyInfo registry_lookup(std::string_view key, KeyContext context) {
  const RegistryRow* row = context == KeyContext::Var ? find_row(kVarKeys, key)
                                                      : find_row(kArchetypeKeys, key);
  if (!row) return {};
  return {true, row->read_only, std::string(row->description)};
}

std::vector<std::string> reserved_keys(KeyContext context) {
  std::vector<std::string> out;
  if (context == KeyContext::Var) {
    for (const auto& r : kVarKeys) out.emplace_back(r.key);
  } else {
    for (const auto& r : kArchetypeKeys) out.emplace_back(r.key);
  }
  return out;
}

MetaValue type_to_meta(const CanonicalType& t) {
  if (!t.is_template()) return MetaValue(t.name);
  MetaArray out{MetaValue(t.name)};
  for (const auto& p : t.params) out.push_back(type_to_meta(p));
  return MetaValue(std::move(out));
}

bool default_compatible(const MetaValue& value, const CanonicalType& t,
                        const FinalizeOptions& options) {
  const std::string& n = t.name;
  if (n == "bool") return value.is_bool();
  if (n == "int") return value.is_int();
  if (n == "float" || n == "double") {
    return value.is_float() || (options.promote_int_to_float && value.is_int());
  }
  if (n == "std::string" || n == "cyclus::Blob" || n == "boost::uuids::uuid") {
    return value.is_string();
  }
  if (n == "std::vector" || n == "std::set" || n == "std::list") {
    if (!value.is_array()) return false;
    return std::all_of(value.as_array().begin(), value.as_array().end(),
                       [&](const MetaValue& e) { return default_compatible(e, t.params[0], options); });
  }
  if (n == "std::pair") {
    if (!value.is_array() || value.as_array().size() != 2) return false;
    return default_compatible(value.as_array()[0], t.params[0], options) &&
           default_compatible(value.as_array()[1], t.params[1], options);
  }
  if (n == "std::map") {
    if (value.is_object()) {
      for (const auto& [k, v] : value.as_object()) {
        if (!key_text_matches(k, t.params[0])) return false;
        if (!default_compatible(v, t.params[1], options)) return false;
      }
      return true;
    }
    if (value.is_array()) {
      CanonicalType pair{"std::pair", {t.params[0], t.params[1]}};
      return std::all_of(value.as_array().begin(), value.as_array().end(),
                         [&](const MetaValue& e) { return default_compatible(e, pair, options); });
    }
    return false;
  }
  return false;
}

MetaValue finalize_var(const MetaValue& user, const CanonicalType& type, int index,
                       const FinalizeOptions& options) {
  if (!user.is_object()) {
    throw Error(ErrorKind::NotAnObject,
                "state variable annotation must be a dict, got " + std::string(user.type_name()));
  }
  if (index < 0) throw Error(ErrorKind::InvalidAnnotation, "negative state variable index");
  MetaObject out;
  for (const auto& [key, value] : user.as_object()) {
    KeyInfo info = registry_lookup(key, KeyContext::Var);
    if (info.read_only) {
      throw Error(ErrorKind::ReadOnlyKeyViolation, "'" + key + "' is read-only");
    }
    out.set(key, value);
  }

  if (const auto* shape = out.find("shape")) {
    int r = rank(type);
    if (!shape->is_array()) {
      throw Error(ErrorKind::ShapeRankMismatch, "shape must be a list of integers");
    }
    for (const auto& e : shape->as_array()) {
      if (!e.is_int() || (e.as_int() <= 0 && e.as_int() != -1)) {
        throw Error(ErrorKind::ShapeRankMismatch,
                    "shape entries must be positive or -1, got " + render_json(e));
      }
    }
    if (static_cast<int>(shape->as_array().size()) != r) {
      throw Error(ErrorKind::ShapeRankMismatch,
                  "shape has " + std::to_string(shape->as_array().size()) +
                      " entries but type '" + type.cpp() + "' has rank " + std::to_string(r));
    }
  }
  if (const auto* level = out.find("userlevel")) check_userlevel(*level);
  if (const auto* def = out.find("default")) {
    if (!default_compatible(*def, type, options)) {
      throw Error(ErrorKind::DefaultTypeMismatch,
                  "default " + render_json(*def) + " does not match type '" + type.cpp() + "'");
    }
  }
  if (const auto* io = out.find("infiletodb")) {
    if (!io->is_object() || !io->as_object().contains("read") ||
        !io->as_object().contains("write")) {
      throw Error(ErrorKind::OverrideShapeMismatch,
                  "infiletodb must be a dict with 'read' and 'write' code strings");
    }
  }

  out.set("type", type_to_meta(type));
  out.set("index", MetaValue(static_cast<std::int64_t>(index)));
  return MetaValue(std::move(out));
}

void check_archetype_notes(const MetaValue& notes) {
  if (!notes.is_object()) {
    throw Error(ErrorKind::NotAnObject, "note must be a dict, got " + std::string(notes.type_name()));
  }
  for (const auto& [key, value] : notes.as_object()) {
    if (registry_lookup(key, KeyContext::Archetype).read_only) {
      throw Error(ErrorKind::ReadOnlyKeyViolation, "'" + key + "' is read-only");
    }
    if (key == "userlevel") check_userlevel(value);
  }
}

MetaValue make_archetype_annotation(const std::string& name, const std::string& entity,
                                    const std::vector<std::string>& parents,
                                    const std::vector<std::string>& all_parents,
                                    const MetaObject& notes, const MetaObject& vars) {
  auto strings = [](const std::vector<std::string>& xs) {
    MetaArray a;
    for (const auto& x : xs) a.emplace_back(x);
    return MetaValue(std::move(a));
  };
  MetaObject out;
  out.set("name", MetaValue(name));
  out.set("entity", MetaValue(entity));
  out.set("parents", strings(parents));
  out.set("all_parents", strings(all_parents));
  for (const auto& [k, v] : notes) out.set(k, v);
  out.set("vars", MetaValue(vars));
  return MetaValue(std::move(out));
}

}  // namespace cycpp
