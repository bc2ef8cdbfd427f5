#pragma once

// RELAX NG schemas for archetypes: construction from accumulated state,
// master-grammar assembly, a small XML reader, and a derivative-based
// validator that reports errors the way libxml2 does.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cycpp/accumulator.hpp"
#include "cycpp/error.hpp"

namespace cycpp {

struct RngNode {
  enum class Kind {
    Element,     // name, children form a group
    Data,        // name is the XSD datatype
    Text,
    Empty,
    Optional,
    ZeroOrMore,
    OneOrMore,
    Interleave,
    Choice,
    Group,
    Ref,         // name
    Define,      // name, children form a group
    Start,
    Grammar,     // children: one Start, any number of Defines
  };

  Kind kind = Kind::Empty;
  std::string name;
  std::vector<RngNode> children;

  static RngNode element(std::string name, std::vector<RngNode> children);
  static RngNode data(std::string type);
  static RngNode text();
  static RngNode empty();
  static RngNode ref(std::string name);
  static RngNode define(std::string name, std::vector<RngNode> children);
  static RngNode wrap(Kind kind, std::vector<RngNode> children);

  friend bool operator==(const RngNode&, const RngNode&) = default;
};

std::string_view to_tag(RngNode::Kind kind);

/// XSD datatype for a primitive, or nullopt.
std::optional<std::string> xsd_type(const CanonicalType& t);

/// The pattern for one state variable: `element var {...}`, wrapped in
/// optional when the annotation has a default. A `schema` annotation replaces
/// it outright; `schematype` overrides datatypes of the data leaves.
/// Errors: UnmappableType, SchemaError.
RngNode build_var_schema(const StateVar& var);

/// `element <Class> { interleave { ...vars } }`.
RngNode build_archetype_schema(const ArchetypeInfo& info);

/// Grammar whose start accepts `<simulation>` or a bare `<facility>` list, with
/// one define per archetype. Errors: DuplicateArchetypeName, SchemaError.
RngNode assemble_master(const std::vector<RngNode>& schemas);

struct RenderOptions {
  int indent = 2;
  int base_indent = 0;
  bool space_before_slash = true;  // `<data type="x" />`
};

std::string render_rng(const RngNode& node, const RenderOptions& options = {});
/// Errors: XmlSyntaxError, SchemaError.
RngNode parse_rng(std::string_view text);

struct XmlNode {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<XmlNode> children;  // elements, in document order
  std::string text;               // direct character data, concatenated
  int line = 0;

  const std::string* attribute(std::string_view key) const;
};

/// Elements, attributes, text, comments, CDATA, processing instructions and
/// the five predefined entities plus character references.
/// Errors: XmlSyntaxError.
XmlNode parse_xml(std::string_view text);

struct ValidationError {
  int line = 0;
  std::string element;
  std::string message;

  /// `Entity: line N: element X: Relax-NG validity error : message`
  std::string render() const;
};

struct ValidationResult {
  std::vector<ValidationError> errors;

  bool ok() const { return errors.empty(); }
  /// Error rows followed by the summary line; empty when ok.
  std::string report() const;
};

inline constexpr std::string_view kValidationSummary =
    " ERROR(core  ):Document failed schema validation";

/// Errors: SchemaError for dangling refs.
ValidationResult validate(const XmlNode& doc, const RngNode& schema);

/// Collapses whitespace runs and drops blanks next to `< > / = "`, for
/// comparing XML text modulo layout.
std::string normalize_xml_whitespace(std::string_view text);

}  // namespace cycpp
