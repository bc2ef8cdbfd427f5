#pragma once

// `#pragma cyclus ...` directive lines.

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "cycpp/error.hpp"

namespace cycpp {

enum class CodegenForm { Decl, Def, Impl };

enum class MemberFunction {
  InitFromCopy,
  InitFromDb,
  InfileToDb,
  Clone,
  Schema,
  Annotations,
  InitInv,
  SnapshotInv,
  Snapshot,
};

/// Generation order used for the prime directive and for `all`.
inline constexpr std::array<MemberFunction, 9> kAllMemberFunctions = {
    MemberFunction::InitFromCopy, MemberFunction::InitFromDb,  MemberFunction::InfileToDb,
    MemberFunction::Clone,        MemberFunction::Schema,      MemberFunction::Annotations,
    MemberFunction::InitInv,      MemberFunction::SnapshotInv, MemberFunction::Snapshot,
};

/// Lowercase directive token, e.g. `initfromcopy`.
std::string_view to_token(MemberFunction f);
std::string_view to_token(CodegenForm f);
std::optional<MemberFunction> member_function_from_token(std::string_view token);

struct Directive {
  enum class Kind { Prime, Targeted, Var, Note, Exec };

  Kind kind = Kind::Prime;
  CodegenForm form = CodegenForm::Def;
  std::optional<MemberFunction> function;  // nullopt means every function
  std::optional<std::string> class_name;
  std::string argument;  // payload of var / note / exec

  bool is_codegen() const { return kind == Kind::Prime || kind == Kind::Targeted; }
};

/// Parses `#pragma cyclus [<decl|def|impl> [<func> [<agent>]]]` and the
/// var/note/exec forms. Errors: MalformedDirective.
Directive parse_directive(std::string_view line);

}  // namespace cycpp
