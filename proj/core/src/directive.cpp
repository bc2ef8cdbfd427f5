#include "cycpp/directive.hpp"

#include <regex>
#include <sstream>
#include <vector>

#include "text_util.hpp"

namespace cycpp {

std::string_view to_token(MemberFunction f) {
  switch (f) {
    case MemberFunction::InitFromCopy: return "initfromcopy";
    case MemberFunction::InitFromDb: return "initfromdb";
    case MemberFunction::InfileToDb: return "infiletodb";
    case MemberFunction::Clone: return "clone";
    case MemberFunction::Schema: return "schema";
    case MemberFunction::Annotations: return "annotations";
    case MemberFunction::InitInv: return "initinv";
    case MemberFunction::SnapshotInv: return "snapshotinv";
    case MemberFunction::Snapshot: return "snapshot";
  }
  return "";
}

std::string_view to_token(CodegenForm f) {
  switch (f) {
    case CodegenForm::Decl: return "decl";
    case CodegenForm::Def: return "def";
    case CodegenForm::Impl: return "impl";
  }
  return "";
}

std::optional<MemberFunction> member_function_from_token(std::string_view token) {
  for (auto f : kAllMemberFunctions) {
    if (to_token(f) == token) return f;
  }
  return std::nullopt;
}

Directive parse_directive(std::string_view line) {
  static const std::regex head(R"(^\s*#\s*pragma\s+cyclus(?:\s+(.*))?$)");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(line.begin(), line.end(), m, head)) {
    throw Error(ErrorKind::MalformedDirective,
                "not a '#pragma cyclus' directive: " + std::string(trim(line)));
  }
  std::string rest(trim(m[1].str()));
  Directive d;
  if (rest.empty()) return d;

  auto sp = rest.find_first_of(" \t");
  std::string first = rest.substr(0, sp);
  std::string tail = sp == std::string::npos ? "" : std::string(trim(rest.substr(sp)));

  if (first == "var" || first == "note" || first == "exec") {
    d.kind = first == "var" ? Directive::Kind::Var
             : first == "note" ? Directive::Kind::Note
                               : Directive::Kind::Exec;
    if (tail.empty() && d.kind != Directive::Kind::Exec) {
      throw Error(ErrorKind::MalformedDirective,
                  "'#pragma cyclus " + first + "' needs a dict argument");
    }
    d.argument = tail;
    return d;
  }

  std::vector<std::string> tokens;
  std::istringstream words(rest);
  for (std::string w; words >> w;) tokens.push_back(w);

  if (tokens[0] == "decl") {
    d.form = CodegenForm::Decl;
  } else if (tokens[0] == "def") {
    d.form = CodegenForm::Def;
  } else if (tokens[0] == "impl") {
    d.form = CodegenForm::Impl;
  } else {
    throw Error(ErrorKind::MalformedDirective,
                "unknown '#pragma cyclus' form '" + tokens[0] +
                    "' (expected decl, def, impl, var, note or exec)");
  }
  d.kind = Directive::Kind::Targeted;
  if (tokens.size() > 3) {
    throw Error(ErrorKind::MalformedDirective,
                "too many arguments to '#pragma cyclus " + tokens[0] + "'");
  }
  if (tokens.size() >= 2 && tokens[1] != "all") {
    d.function = member_function_from_token(tokens[1]);
    if (!d.function) {
      throw Error(ErrorKind::MalformedDirective, "unknown member function '" + tokens[1] + "'");
    }
  }
  if (tokens.size() == 3) {
    static const std::regex ident(R"(^(::)?[A-Za-z_]\w*(::[A-Za-z_]\w*)*$)");
    if (!std::regex_match(tokens[2], ident)) {
      throw Error(ErrorKind::MalformedDirective, "bad class name '" + tokens[2] + "'");
    }
    d.class_name = tokens[2].rfind("::", 0) == 0 ? tokens[2].substr(2) : tokens[2];
  }
  return d;
}

}  // namespace cycpp
