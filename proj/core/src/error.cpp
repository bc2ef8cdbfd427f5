#include "cycpp/error.hpp"

namespace cycpp {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedDirective: return "MalformedDirective";
    case ErrorKind::UnresolvableInclude: return "UnresolvableInclude";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::NotAnObject: return "NotAnObject";
    case ErrorKind::ReadOnlyKeyViolation: return "ReadOnlyKeyViolation";
    case ErrorKind::ShapeRankMismatch: return "ShapeRankMismatch";
    case ErrorKind::DefaultTypeMismatch: return "DefaultTypeMismatch";
    case ErrorKind::InvalidAnnotation: return "InvalidAnnotation";
    case ErrorKind::PointerOrReference: return "PointerOrReference";
    case ErrorKind::UnknownTemplate: return "UnknownTemplate";
    case ErrorKind::UnresolvableName: return "UnresolvableName";
    case ErrorKind::AliasCycle: return "AliasCycle";
    case ErrorKind::UnregisteredType: return "UnregisteredType";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::DanglingDecoration: return "DanglingDecoration";
    case ErrorKind::UnknownClass: return "UnknownClass";
    case ErrorKind::AmbiguousClass: return "AmbiguousClass";
    case ErrorKind::OverrideShapeMismatch: return "OverrideShapeMismatch";
    case ErrorKind::UnmappableType: return "UnmappableType";
    case ErrorKind::DuplicateArchetypeName: return "DuplicateArchetypeName";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::XmlSyntaxError: return "XmlSyntaxError";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::KeyNotFound: return "KeyNotFound";
    case ErrorKind::CorruptStore: return "CorruptStore";
    case ErrorKind::EmptyArchetypeName: return "EmptyArchetypeName";
    case ErrorKind::TooManyColons: return "TooManyColons";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

std::string Error::diagnostic() const {
  if (!where_) return what();
  return where_->file + ":" + std::to_string(where_->line) + ": " + what();
}

}  // namespace cycpp
