#pragma once

// Pass 3: replaces code-generation directives in the original source with
// implementations of the archetype member functions.

#include <string>
#include <string_view>
#include <vector>

#include "cycpp/accumulator.hpp"
#include "cycpp/directive.hpp"

namespace cycpp {

struct MemberOptions {
  std::string indent = "  ";  // column of the directive line
  bool in_class_body = true;  // def/decl spelled as members, else out of line
};

/// One function in one form. Each emitted line ends in '\n'; `impl` of an
/// empty body yields "". Errors: OverrideShapeMismatch, InvalidAnnotation,
/// UnmappableType, SchemaError.
std::string gen_member(MemberFunction f, CodegenForm form, const ArchetypeInfo& info,
                       const MemberOptions& options = {});

/// The string-literal lines passed to the runtime JSON reader, chunked at
/// `width` escaped characters per literal.
std::vector<std::string> gen_annotations_literal(const ArchetypeInfo& info,
                                                 std::size_t width = 60);

/// Body of schema(): the interleave of var patterns as the returned string.
std::string schema_string(const ArchetypeInfo& info);

/// Backslash-escapes `"` and `\` and control characters for a C++ literal.
std::string escape_cpp_string(std::string_view s);

struct GeneratedBlock {
  Directive directive;
  std::string class_name;
  std::string text;
  int line = 0;
};

struct GenerateResult {
  std::string text;
  std::vector<GeneratedBlock> blocks;
};

struct GenerateOptions {
  std::string file_name = "<input>";
};

/// Errors: UnknownClass, AmbiguousClass, MalformedDirective, plus anything
/// gen_member raises, located at the directive line.
GenerateResult generate(std::string_view original, const Registry& registry,
                        const GenerateOptions& options = {});

}  // namespace cycpp
