#include "cycpp/meta_value.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

namespace cycpp {

// ---------------------------------------------------------------------------
// MetaObject

MetaObject::MetaObject(std::initializer_list<Member> members) {
  for (const auto& m : members) set(m.first, m.second);
}

bool MetaObject::contains(std::string_view key) const { return find(key) != nullptr; }

const MetaValue* MetaObject::find(std::string_view key) const {
  for (const auto& m : members_) {
    if (m.first == key) return &m.second;
  }
  return nullptr;
}

MetaValue* MetaObject::find(std::string_view key) {
  for (auto& m : members_) {
    if (m.first == key) return &m.second;
  }
  return nullptr;
}

const MetaValue& MetaObject::at(std::string_view key) const {
  if (const auto* v = find(key)) return *v;
  throw Error(ErrorKind::KeyNotFound, "no key '" + std::string(key) + "'");
}

void MetaObject::set(std::string key, MetaValue value) {
  if (auto* v = find(key)) {
    *v = std::move(value);
  } else {
    members_.emplace_back(std::move(key), std::move(value));
  }
}

bool MetaObject::erase(std::string_view key) {
  for (auto it = members_.begin(); it != members_.end(); ++it) {
    if (it->first == key) {
      members_.erase(it);
      return true;
    }
  }
  return false;
}

bool operator==(const MetaObject& a, const MetaObject& b) { return a.members_ == b.members_; }

std::string_view MetaValue::type_name() const {
  switch (v_.index()) {
    case 0: return "null";
    case 1: return "bool";
    case 2: return "int";
    case 3: return "float";
    case 4: return "string";
    case 5: return "list";
    default: return "dict";
  }
}

// ---------------------------------------------------------------------------
// Rendering

std::string format_float_repr(double d) {
  if (std::isnan(d)) return "NaN";
  if (std::isinf(d)) return d < 0 ? "-Infinity" : "Infinity";
  if (d == 0) return std::signbit(d) ? "-0.0" : "0.0";

  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, d, std::chars_format::scientific);
  std::string sci(buf, res.ptr);
  auto e = sci.find('e');
  std::string mantissa = sci.substr(0, e);
  int exp = std::stoi(sci.substr(e + 1));
  bool negative = mantissa.front() == '-';
  if (negative) mantissa.erase(0, 1);
  std::string digits;
  for (char c : mantissa) {
    if (c != '.') digits += c;
  }

  std::string out = negative ? "-" : "";
  if (exp >= -4 && exp < 16) {
    if (exp < 0) {
      out += "0." + std::string(static_cast<std::size_t>(-exp - 1), '0') + digits;
    } else if (static_cast<int>(digits.size()) <= exp + 1) {
      out += digits + std::string(static_cast<std::size_t>(exp + 1) - digits.size(), '0') + ".0";
    } else {
      out += digits.substr(0, static_cast<std::size_t>(exp + 1)) + "." +
             digits.substr(static_cast<std::size_t>(exp + 1));
    }
    return out;
  }
  out += digits.substr(0, 1);
  if (digits.size() > 1) out += "." + digits.substr(1);
  char ebuf[16];
  std::snprintf(ebuf, sizeof ebuf, "e%c%02d", exp < 0 ? '-' : '+', exp < 0 ? -exp : exp);
  return out + ebuf;
}

std::string json_quote(std::string_view s) {
  std::string out = "\"";
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  out += '"';
  return out;
}

namespace {

void render(const MetaValue& v, std::string& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::nullptr_t>) {
          out += "null";
        } else if constexpr (std::is_same_v<T, bool>) {
          out += x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          out += std::to_string(x);
        } else if constexpr (std::is_same_v<T, double>) {
          out += format_float_repr(x);
        } else if constexpr (std::is_same_v<T, std::string>) {
          out += json_quote(x);
        } else if constexpr (std::is_same_v<T, MetaArray>) {
          out += '[';
          for (std::size_t i = 0; i < x.size(); ++i) {
            if (i) out += ',';
            render(x[i], out);
          }
          out += ']';
        } else {
          out += '{';
          bool first = true;
          for (const auto& [k, val] : x) {
            if (!first) out += ',';
            first = false;
            out += json_quote(k);
            out += ':';
            render(val, out);
          }
          out += '}';
        }
      },
      v.storage());
}

}  // namespace

std::string render_json(const MetaValue& value) {
  std::string out;
  render(value, out);
  return out;
}

// ---------------------------------------------------------------------------
// Literal parsing

namespace {

struct Tok {
  enum Kind { Str, Int, Float, Name, Punct, End } kind;
  std::string text;
  std::int64_t ival = 0;
  double fval = 0;
  std::size_t pos = 0;
};

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : s_(text) {}

  std::vector<Tok> run() {
    std::vector<Tok> out;
    while (true) {
      skip_space();
      if (i_ >= s_.size()) break;
      char c = s_[i_];
      std::size_t start = i_;
      if (c == '\'' || c == '"') {
        out.push_back({Tok::Str, string_literal(), 0, 0, start});
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && i_ + 1 < s_.size() &&
                  std::isdigit(static_cast<unsigned char>(s_[i_ + 1])))) {
        out.push_back(number());
        out.back().pos = start;
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (i_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) {
          ++i_;
        }
        out.push_back({Tok::Name, std::string(s_.substr(start, i_ - start)), 0, 0, start});
      } else if (std::string_view("{}[]():,+-*").find(c) != std::string_view::npos) {
        ++i_;
        out.push_back({Tok::Punct, std::string(1, c), 0, 0, start});
      } else {
        fail("unexpected character '" + std::string(1, c) + "'", start);
      }
    }
    out.push_back({Tok::End, "", 0, 0, s_.size()});
    return out;
  }

  [[noreturn]] static void fail(const std::string& why, std::size_t pos) {
    throw Error(ErrorKind::SyntaxError, why + " at column " + std::to_string(pos + 1));
  }

 private:
  void skip_space() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  std::uint32_t hex_digits(int n) {
    if (i_ + static_cast<std::size_t>(n) > s_.size()) fail("truncated escape", i_);
    std::uint32_t v = 0;
    auto res = std::from_chars(s_.data() + i_, s_.data() + i_ + n, v, 16);
    if (res.ptr != s_.data() + i_ + n) fail("bad hex escape", i_);
    i_ += static_cast<std::size_t>(n);
    return v;
  }

  std::string string_literal() {
    char quote = s_[i_];
    std::size_t start = i_++;
    std::string out;
    while (true) {
      if (i_ >= s_.size() || s_[i_] == '\n') fail("unterminated string", start);
      char c = s_[i_++];
      if (c == quote) break;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (i_ >= s_.size()) fail("unterminated string", start);
      char e = s_[i_++];
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case 'b': out += '\b'; break;
        case 'f': out += '\f'; break;
        case 'v': out += '\v'; break;
        case 'a': out += '\a'; break;
        case '0': out += '\0'; break;
        case '\\': out += '\\'; break;
        case '\'': out += '\''; break;
        case '"': out += '"'; break;
        case '\n': break;
        case 'x': append_utf8(out, hex_digits(2)); break;
        case 'u': append_utf8(out, hex_digits(4)); break;
        case 'U': append_utf8(out, hex_digits(8)); break;
        default:
          out += '\\';
          out += e;
      }
    }
    return out;
  }

  Tok number() {
    std::size_t start = i_;
    if (s_.substr(i_, 2) == "0x" || s_.substr(i_, 2) == "0X") {
      i_ += 2;
      std::size_t digits = i_;
      while (i_ < s_.size() && std::isxdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      std::int64_t v = 0;
      auto res = std::from_chars(s_.data() + digits, s_.data() + i_, v, 16);
      if (digits == i_ || res.ec != std::errc()) fail("bad hex literal", start);
      return {Tok::Int, std::string(s_.substr(start, i_ - start)), v, 0, start};
    }
    bool is_float = false;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (i_ < s_.size() && s_[i_] == '.') {
      is_float = true;
      ++i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
      std::size_t save = i_++;
      if (i_ < s_.size() && (s_[i_] == '+' || s_[i_] == '-')) ++i_;
      if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
        is_float = true;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      } else {
        i_ = save;
        fail("malformed exponent", save);
      }
    }
    if (i_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) {
      fail("bad number literal", start);
    }
    std::string text(s_.substr(start, i_ - start));
    Tok t{is_float ? Tok::Float : Tok::Int, text, 0, 0, start};
    if (is_float) {
      auto res = std::from_chars(text.data(), text.data() + text.size(), t.fval);
      if (res.ec == std::errc::result_out_of_range) {
        t.fval = std::strtod(text.c_str(), nullptr);
      } else if (res.ec != std::errc()) {
        fail("bad number literal", start);
      }
    } else {
      if (text.size() > 1 && text[0] == '0' &&
          text.find_first_not_of('0') != std::string::npos) {
        fail("leading zeros in integer literal", start);
      }
      auto res = std::from_chars(text.data(), text.data() + text.size(), t.ival);
      if (res.ec != std::errc()) fail("integer literal out of range", start);
    }
    return t;
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

class LiteralParser {
 public:
  LiteralParser(std::string_view text, const MetaEnv& env)
      : toks_(Lexer(text).run()), env_(env) {}

  MetaValue parse() {
    MetaValue v = expr();
    if (peek().kind != Tok::End) Lexer::fail("unexpected '" + peek().text + "'", peek().pos);
    return v;
  }

 private:
  const Tok& peek() const { return toks_[pos_]; }
  bool at_punct(char c) const {
    return peek().kind == Tok::Punct && peek().text[0] == c;
  }
  void expect(char c) {
    if (!at_punct(c)) {
      Lexer::fail(std::string("expected '") + c + "'" +
                      (peek().kind == Tok::End ? " before end of input" : ""),
                  peek().pos);
    }
    ++pos_;
  }

  MetaValue expr() {
    MetaValue lhs = term();
    while (at_punct('+') || at_punct('-')) {
      char op = toks_[pos_++].text[0];
      std::size_t at = peek().pos;
      MetaValue rhs = term();
      lhs = op == '+' ? add(lhs, rhs, at) : sub(lhs, rhs, at);
    }
    return lhs;
  }

  MetaValue term() {
    MetaValue lhs = unary();
    while (at_punct('*')) {
      std::size_t at = toks_[pos_++].pos;
      MetaValue rhs = unary();
      lhs = mul(lhs, rhs, at);
    }
    return lhs;
  }

  MetaValue unary() {
    if (at_punct('-') || at_punct('+')) {
      char op = toks_[pos_].text[0];
      std::size_t at = toks_[pos_++].pos;
      MetaValue v = unary();
      if (!v.is_number()) Lexer::fail("bad operand for unary " + std::string(1, op), at);
      if (op == '+') return v;
      if (v.is_int()) {
        if (v.as_int() == std::numeric_limits<std::int64_t>::min()) {
          Lexer::fail("integer overflow", at);
        }
        return MetaValue(-v.as_int());
      }
      return MetaValue(-v.as_float());
    }
    return primary();
  }

  MetaValue primary() {
    const Tok& t = peek();
    switch (t.kind) {
      case Tok::Str: {
        std::string s;
        while (peek().kind == Tok::Str) s += toks_[pos_++].text;  // adjacent literals join
        return MetaValue(std::move(s));
      }
      case Tok::Int: ++pos_; return MetaValue(t.ival);
      case Tok::Float: ++pos_; return MetaValue(t.fval);
      case Tok::Name: {
        ++pos_;
        if (auto it = env_.find(t.text); it != env_.end()) return it->second;
        if (t.text == "True" || t.text == "true") return MetaValue(true);
        if (t.text == "False" || t.text == "false") return MetaValue(false);
        if (t.text == "None" || t.text == "null") return MetaValue(nullptr);
        throw Error(ErrorKind::UnknownName, "name '" + t.text + "' is not defined");
      }
      case Tok::Punct:
        if (t.text == "[") return sequence('[', ']');
        if (t.text == "(") return paren();
        if (t.text == "{") return dict();
        break;
      case Tok::End:
        Lexer::fail("unexpected end of input", t.pos);
    }
    Lexer::fail("unexpected '" + t.text + "'", t.pos);
  }

  MetaValue sequence(char open, char close) {
    expect(open);
    MetaArray items;
    while (!at_punct(close)) {
      items.push_back(expr());
      if (!at_punct(',')) break;
      ++pos_;
    }
    expect(close);
    return MetaValue(std::move(items));
  }

  // `(x)` is grouping; `()` and `(x,)` and `(x, y)` are tuples.
  MetaValue paren() {
    expect('(');
    if (at_punct(')')) {
      ++pos_;
      return MetaValue(MetaArray{});
    }
    MetaValue first = expr();
    if (at_punct(')')) {
      ++pos_;
      return first;
    }
    MetaArray items{first};
    while (at_punct(',')) {
      ++pos_;
      if (at_punct(')')) break;
      items.push_back(expr());
    }
    expect(')');
    return MetaValue(std::move(items));
  }

  MetaValue dict() {
    expect('{');
    MetaObject obj;
    while (!at_punct('}')) {
      MetaValue key = expr();
      expect(':');
      MetaValue val = expr();
      obj.set(key.is_string() ? key.as_string() : render_json(key), std::move(val));
      if (!at_punct(',')) break;
      ++pos_;
    }
    expect('}');
    return MetaValue(std::move(obj));
  }

  static MetaValue add(const MetaValue& a, const MetaValue& b, std::size_t at) {
    if (a.is_int() && b.is_int()) {
      std::int64_t r;
      if (__builtin_add_overflow(a.as_int(), b.as_int(), &r)) Lexer::fail("integer overflow", at);
      return MetaValue(r);
    }
    if (a.is_number() && b.is_number()) return MetaValue(a.as_number() + b.as_number());
    if (a.is_string() && b.is_string()) return MetaValue(a.as_string() + b.as_string());
    if (a.is_array() && b.is_array()) {
      MetaArray out = a.as_array();
      out.insert(out.end(), b.as_array().begin(), b.as_array().end());
      return MetaValue(std::move(out));
    }
    bad_operands('+', a, b, at);
  }

  static MetaValue sub(const MetaValue& a, const MetaValue& b, std::size_t at) {
    if (a.is_int() && b.is_int()) {
      std::int64_t r;
      if (__builtin_sub_overflow(a.as_int(), b.as_int(), &r)) Lexer::fail("integer overflow", at);
      return MetaValue(r);
    }
    if (a.is_number() && b.is_number()) return MetaValue(a.as_number() - b.as_number());
    bad_operands('-', a, b, at);
  }

  static MetaValue mul(const MetaValue& a, const MetaValue& b, std::size_t at) {
    if (a.is_int() && b.is_int()) {
      std::int64_t r;
      if (__builtin_mul_overflow(a.as_int(), b.as_int(), &r)) Lexer::fail("integer overflow", at);
      return MetaValue(r);
    }
    if (a.is_number() && b.is_number()) return MetaValue(a.as_number() * b.as_number());
    const MetaValue* seq = (a.is_string() || a.is_array()) ? &a : &b;
    const MetaValue* count = seq == &a ? &b : &a;
    if ((seq->is_string() || seq->is_array()) && count->is_int()) {
      std::int64_t n = std::max<std::int64_t>(0, count->as_int());
      if (n > (1 << 20)) Lexer::fail("repetition count too large", at);
      if (seq->is_string()) {
        std::string out;
        for (std::int64_t i = 0; i < n; ++i) out += seq->as_string();
        return MetaValue(std::move(out));
      }
      MetaArray out;
      for (std::int64_t i = 0; i < n; ++i) {
        out.insert(out.end(), seq->as_array().begin(), seq->as_array().end());
      }
      return MetaValue(std::move(out));
    }
    bad_operands('*', a, b, at);
  }

  [[noreturn]] static void bad_operands(char op, const MetaValue& a, const MetaValue& b,
                                        std::size_t at) {
    Lexer::fail("unsupported operand types for " + std::string(1, op) + ": '" +
                    std::string(a.type_name()) + "' and '" + std::string(b.type_name()) + "'",
                at);
  }

  std::vector<Tok> toks_;
  const MetaEnv& env_;
  std::size_t pos_ = 0;
};

}  // namespace

MetaValue parse_literal(std::string_view text, const MetaEnv& env) {
  return LiteralParser(text, env).parse();
}

MetaValue parse_annotation_literal(std::string_view text, const MetaEnv& env) {
  MetaValue v = parse_literal(text, env);
  if (!v.is_object()) {
    throw Error(ErrorKind::NotAnObject,
                "annotation must be a dict, got " + std::string(v.type_name()));
  }
  return v;
}

}  // namespace cycpp
