#pragma once

// Pass 2: walks normalized source through an ordered filter chain and
// collects archetype classes, their state variables and notes.

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cycpp/annotation.hpp"
#include "cycpp/meta_value.hpp"
#include "cycpp/normalizer.hpp"
#include "cycpp/type_system.hpp"

namespace cycpp {

enum class FilterId {
  ClassAndSuperclass = 1,
  Access,
  Exec,
  UsingNamespace,
  NamespaceAlias,
  Namespace,
  Typedef,
  Using,
  Linemarker,
  NoteDecoration,
  VarDecoration,
  VarDeclaration,
  PragmaCyclusError,
};

inline constexpr std::size_t kFilterCount = 13;

std::string_view to_string(FilterId id);

/// The shipped precedence, highest first.
const std::vector<FilterId>& default_filter_order();

enum class Access { Public, Protected, Private };

std::string_view to_string(Access a);

struct StateVar {
  std::string name;
  CanonicalType type;
  MetaValue annotation;  // finalized, includes type and index
  int index = 0;
  Access access = Access::Private;
  SourceLocation where;
};

struct ArchetypeInfo {
  std::string name;        // namespace-qualified
  std::string short_name;  // last component
  std::vector<std::string> namespace_path;
  bool is_struct = false;
  std::vector<std::string> parents;      // public bases, declaration order
  std::vector<std::string> all_parents;  // transitive, over classes seen this run
  std::string entity = "unknown";
  std::vector<StateVar> state_vars;
  MetaObject notes;
  SourceLocation where;
  int directive_count = 0;

  const StateVar* find_var(std::string_view var) const;
  /// name, entity, parents, all_parents, note keys, vars.
  MetaValue annotation() const;
};

struct ClassRecord {
  std::string name;
  std::vector<std::string> parents;
};

class Registry {
 public:
  /// Classes holding at least one cyclus directive, in declaration order.
  std::vector<ArchetypeInfo> archetypes;
  /// Every class seen, directive or not.
  std::vector<ClassRecord> classes;

  /// Match on qualified name, else on unique short name.
  /// Errors: UnknownClass, AmbiguousClass.
  const ArchetypeInfo& find(std::string_view name) const;
  const ArchetypeInfo* find_qualified(std::string_view qualified) const;

  /// Debug view as canonical JSON.
  MetaValue dump() const;
};

/// "region", "institution", "facility", "archetype" or "unknown".
std::string classify_entity(const ArchetypeInfo& info);

/// Runs `name = expr` statements separated by `;` or newlines.
/// Errors: SyntaxError, UnknownName.
void exec_directive(std::string_view code, MetaEnv& env);

struct AccumulateOptions {
  std::vector<FilterId> order = default_filter_order();
  MetaEnv env;
  FinalizeOptions finalize;
};

struct FilterStats {
  std::array<std::size_t, kFilterCount + 1> matched{};  // indexed by FilterId
  std::size_t statements = 0;
  std::size_t passed_through = 0;
  std::size_t max_transformations_per_statement = 0;
};

struct TraceEntry {
  SourceLocation where;
  std::string statement;
  std::optional<FilterId> filter;
};

class Accumulator {
 public:
  explicit Accumulator(AccumulateOptions options = {});
  ~Accumulator();
  Accumulator(Accumulator&&) noexcept;
  Accumulator& operator=(Accumulator&&) noexcept;

  /// Feeds one physical line of normalized text (linemarkers included).
  void feed_line(std::string_view line);
  /// Processes one complete statement; returns the filter that fired.
  std::optional<FilterId> apply_filters(std::string_view statement);
  /// Flushes pending text and checks for dangling decorations.
  Registry finish();

  const FilterStats& stats() const;
  const std::vector<TraceEntry>& trace() const;
  void enable_trace(bool on);
  const TypeScope& scope() const;
  const MetaEnv& env() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Pass 2 over a normalized source.
Registry accumulate(const NormalizedSource& src, const AccumulateOptions& options = {});
/// Pass 2 over rendered normalized text (with linemarkers).
Registry accumulate_text(std::string_view text, const AccumulateOptions& options = {});

}  // namespace cycpp
