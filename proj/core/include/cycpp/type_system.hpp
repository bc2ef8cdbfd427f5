#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cycpp/error.hpp"

namespace cycpp {

/// Alias-free, fully qualified spelling of a state-variable type. A leaf has
/// no params; a template instance names a registered template.
struct CanonicalType {
  std::string name;
  std::vector<CanonicalType> params;

  static CanonicalType leaf(std::string name) { return {std::move(name), {}}; }

  bool is_template() const { return !params.empty(); }

  /// C++ spelling, e.g. `std::map<int, std::vector<double>>`.
  std::string cpp() const;

  friend bool operator==(const CanonicalType&, const CanonicalType&) = default;
  friend bool operator<(const CanonicalType& a, const CanonicalType& b) {
    if (a.name != b.name) return a.name < b.name;
    return std::lexicographical_compare(a.params.begin(), a.params.end(), b.params.begin(),
                                        b.params.end());
  }
};

namespace types {

bool is_primitive(std::string_view name);
bool is_known_class(std::string_view name);
/// Arity of a registered template, or nullopt.
std::optional<std::size_t> template_arity(std::string_view name);
bool is_known(std::string_view name);

/// Templates whose length is variable (and so count toward rank).
bool is_variable_length_template(std::string_view name);

}  // namespace types

/// Lexical scope for name lookup during pass 2: namespaces, classes, blocks,
/// plus the typedef/using alias graph.
class TypeScope {
 public:
  /// Visibility snapshot used to interpret a type expression.
  struct Context {
    std::vector<std::string> prefixes;  // innermost first; always ends with ""
    std::vector<std::string> using_namespaces;
    std::map<std::string, std::string> namespace_aliases;
  };

  struct AliasEdge {
    std::string target;  // type text as written
    Context context;     // where it was written
  };

  TypeScope();

  void push_namespace(const std::string& name);  // "" for anonymous, "a::b" ok
  void push_class(const std::string& name);
  void push_block();
  void pop();
  std::size_t depth() const { return frames_.size(); }

  /// Qualified name of the innermost named scope (namespaces and classes).
  std::string prefix() const;
  std::string qualify(std::string_view name) const;

  /// typedef / alias-declaration in the current scope. Throws AliasCycle.
  void add_alias(const std::string& name, const std::string& target);
  /// `using ns::name;`
  void add_using_declaration(const std::string& qualified);
  void add_using_namespace(const std::string& ns);
  void add_namespace_alias(const std::string& alias, const std::string& target);

  Context context() const;

  /// Qualified key of the alias `name` refers to from `ctx`, if any.
  std::optional<std::string> find_alias(std::string_view name, const Context& ctx) const;
  /// Qualified known type `name` refers to from `ctx`, if any.
  std::optional<std::string> find_known(std::string_view name, const Context& ctx) const;
  /// Candidate qualified spellings of `name` from `ctx`, in lookup order.
  std::vector<std::string> candidates(std::string_view name, const Context& ctx) const;

  const AliasEdge* alias(const std::string& key) const;
  const std::map<std::string, AliasEdge>& aliases() const { return aliases_; }

 private:
  enum class FrameKind { Namespace, Class, Block };
  struct Frame {
    FrameKind kind;
    std::string qualified;  // prefix contributed by this frame
    std::vector<std::string> using_namespaces;
    std::map<std::string, std::string> namespace_aliases;
  };

  bool reaches(const std::string& from_text, const Context& ctx, const std::string& key,
               std::vector<std::string>& visited) const;

  std::vector<Frame> frames_;
  std::map<std::string, AliasEdge> aliases_;
  int block_counter_ = 0;
};

/// Resolves `text` to its canonical form in `scope`.
/// Errors: PointerOrReference, UnknownTemplate, UnresolvableName, AliasCycle.
CanonicalType canonicalize(std::string_view text, const TypeScope& scope = TypeScope());

/// Follows alias edges from `name` to a fixed point and returns the final
/// target text. Names with no edge come back unchanged.
std::string resolve_alias(std::string_view name, const TypeScope& scope);

/// Number of variable-length dimensions: strings and VL containers count one
/// each, recursively.
int rank(const CanonicalType& t);

/// Preorder list of the variable-length slots of `t`. Bit i of a vl_mask
/// refers to slot i.
std::vector<const CanonicalType*> vl_slots(const CanonicalType& t);

struct DbTypeEntry {
  int id = 0;
  std::string name;
  CanonicalType cpp;
  int rank = 0;
  std::uint32_t vl_mask = 0;

  friend bool operator==(const DbTypeEntry&, const DbTypeEntry&) = default;
};

/// The database type enumeration, loaded from the tab-separated data file.
class DbTypeTable {
 public:
  /// Parses `# comment` lines and records `id<TAB>name<TAB>cpp<TAB>rank<TAB>vl_mask`.
  static DbTypeTable parse(std::string_view tsv);
  /// The table shipped with the library.
  static const DbTypeTable& builtin();

  const DbTypeEntry& lookup(int id) const;
  const DbTypeEntry& lookup(std::string_view name) const;
  /// Every flavor of `t`, ordered by id. Throws UnregisteredType.
  std::vector<DbTypeEntry> variants(const CanonicalType& t) const;
  /// The flavor with no variable-length slots selected.
  const DbTypeEntry& base(const CanonicalType& t) const;

  const std::vector<DbTypeEntry>& entries() const { return entries_; }
  std::vector<CanonicalType> registered_types() const;

 private:
  std::vector<DbTypeEntry> entries_;
  std::map<int, std::size_t> by_id_;
  std::map<std::string, std::size_t, std::less<>> by_name_;
  std::map<CanonicalType, std::vector<std::size_t>> by_type_;
};

std::vector<DbTypeEntry> db_variants(const CanonicalType& t);

/// Builds the `VL_`-prefixed enumeration name for flavor `mask` of `t`.
std::string db_type_name(const CanonicalType& t, std::uint32_t mask);

}  // namespace cycpp
