#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cycpp {

/// Position in an original source file, as recovered from linemarkers.
struct SourceLocation {
  std::string file;
  int line = 0;

  friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

enum class ErrorKind {
  // normalizer
  MalformedDirective,
  UnresolvableInclude,
  // annotation literals / metadata
  SyntaxError,
  UnknownName,
  NotAnObject,
  ReadOnlyKeyViolation,
  ShapeRankMismatch,
  DefaultTypeMismatch,
  InvalidAnnotation,
  // types
  PointerOrReference,
  UnknownTemplate,
  UnresolvableName,
  AliasCycle,
  UnregisteredType,
  NotFound,
  // accumulation and code generation
  DanglingDecoration,
  UnknownClass,
  AmbiguousClass,
  OverrideShapeMismatch,
  // schema
  UnmappableType,
  DuplicateArchetypeName,
  SchemaError,
  XmlSyntaxError,
  // store
  TypeMismatch,
  KeyNotFound,
  CorruptStore,
  // locator
  EmptyArchetypeName,
  TooManyColons,
  // filesystem
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// The single exception type thrown by the toolchain. The kind is what tests
/// and the CLI dispatch on; the location is filled in as the error bubbles up
/// through a pass that knows where it is.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<SourceLocation> where = std::nullopt)
      : std::runtime_error(message), kind_(kind), where_(std::move(where)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::optional<SourceLocation>& where() const noexcept { return where_; }

  /// Returns a copy carrying `loc` unless a location is already attached.
  Error located(const SourceLocation& loc) const {
    return Error(kind_, what(), where_ ? where_ : std::optional(loc));
  }

  /// `file:line: message`, or just the message when no location is known.
  std::string diagnostic() const;

 private:
  ErrorKind kind_;
  std::optional<SourceLocation> where_;
};

}  // namespace cycpp
