#pragma once

// State-variable and archetype annotations: finalization of user metadata,
// and the registry of reserved keys.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cycpp/meta_value.hpp"
#include "cycpp/type_system.hpp"

namespace cycpp {

enum class KeyContext { Var, Archetype };

struct KeyInfo {
  bool reserved = false;
  bool read_only = false;
  std::string description;
};

KeyInfo registry_lookup(std::string_view key, KeyContext context);

/// Every reserved key for `context`, in table order.
std::vector<std::string> reserved_keys(KeyContext context);

/// `double` for leaves, `["std::map", "int", ["std::vector", "double"]]` for
/// templates.
MetaValue type_to_meta(const CanonicalType& t);

struct FinalizeOptions {
  /// Accept an int default for float and double variables.
  bool promote_int_to_float = true;
};

/// Merges the read-only `type` and `index` keys into `user` and checks the
/// reserved keys it carries.
/// Errors: NotAnObject, ReadOnlyKeyViolation, ShapeRankMismatch,
/// DefaultTypeMismatch, InvalidAnnotation.
MetaValue finalize_var(const MetaValue& user, const CanonicalType& type, int index,
                       const FinalizeOptions& options = {});

/// True when `value` is an acceptable default for a variable of type `t`.
bool default_compatible(const MetaValue& value, const CanonicalType& t,
                        const FinalizeOptions& options = {});

/// Checks a merged `note` dictionary: no read-only keys, userlevel in range.
void check_archetype_notes(const MetaValue& notes);

/// Assembles the annotation object for one archetype: name, entity, parents,
/// all_parents, then note keys, then vars.
MetaValue make_archetype_annotation(const std::string& name, const std::string& entity,
                                    const std::vector<std::string>& parents,
                                    const std::vector<std::string>& all_parents,
                                    const MetaObject& notes, const MetaObject& vars);

}  // namespace cycpp
