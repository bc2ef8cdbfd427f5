#include <cctype>
#include <charconv>

#include "cycpp/schema.hpp"

namespace cycpp {

const std::string* XmlNode::attribute(std::string_view key) const {
  for (const auto& [k, v] : attributes) {
    if (k == key) return &v;
  }
  return nullptr;
}

namespace {

bool name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool name_char(char c) {
  return name_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '.';
}

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

class XmlParser {
 public:
  explicit XmlParser(std::string_view s) : s_(s) {}

  XmlNode document() {
    if (s_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
    misc();
    if (eof() || peek() != '<') fail("expected a root element");
    XmlNode root = element();
    misc();
    if (!eof()) fail("content after the root element");
    return root;
  }

 private:
  bool eof() const { return pos_ >= s_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0';
  }
  bool looking_at(std::string_view t) const { return s_.substr(pos_, t.size()) == t; }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < s_.size(); ++i) {
      if (s_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::XmlSyntaxError, "line " + std::to_string(line_) + ": " + why,
                SourceLocation{"<xml>", line_});
  }

  void skip_space() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  void skip_until(std::string_view end, const char* what) {
    while (!eof() && !looking_at(end)) advance();
    if (eof()) fail(std::string("unterminated ") + what);
    advance(end.size());
  }

  // Whitespace, comments and processing instructions outside the root.
  void misc() {
    while (true) {
      skip_space();
      if (looking_at("<!--")) {
        advance(4);
        skip_until("-->", "comment");
      } else if (looking_at("<?")) {
        advance(2);
        skip_until("?>", "processing instruction");
      } else if (looking_at("<!DOCTYPE")) {
        fail("document type declarations are not supported");
      } else {
        return;
      }
    }
  }

  std::string name() {
    if (!name_start(peek())) fail("expected a name");
    std::size_t start = pos_;
    while (!eof() && name_char(peek())) advance();
    return std::string(s_.substr(start, pos_ - start));
  }

  void reference(std::string& out) {
    advance();  // '&'
    std::size_t semi = s_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 12) fail("unterminated entity reference");
    std::string_view ent = s_.substr(pos_, semi - pos_);
    if (ent == "lt") out += '<';
    else if (ent == "gt") out += '>';
    else if (ent == "amp") out += '&';
    else if (ent == "quot") out += '"';
    else if (ent == "apos") out += '\'';
    else if (!ent.empty() && ent[0] == '#') {
      std::uint32_t cp = 0;
      bool hex = ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X');
      std::string_view digits = ent.substr(hex ? 2 : 1);
      auto res = std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
      if (digits.empty() || res.ptr != digits.data() + digits.size() || cp == 0 ||
          cp > 0x10FFFF) {
        fail("bad character reference '&" + std::string(ent) + ";'");
      }
      append_utf8(out, cp);
    } else {
      fail("unknown entity '&" + std::string(ent) + ";'");
    }
    advance(ent.size() + 1);
  }

  std::string attribute_value() {
    char quote = peek();
    if (quote != '"' && quote != '\'') fail("expected a quoted attribute value");
    advance();
    std::string out;
    while (true) {
      if (eof()) fail("unterminated attribute value");
      char c = peek();
      if (c == quote) break;
      if (c == '<') fail("'<' in attribute value");
      if (c == '&') {
        reference(out);
      } else {
        out += c;
        advance();
      }
    }
    advance();
    return out;
  }

  XmlNode element() {
    XmlNode node;
    node.line = line_;
    advance();  // '<'
    node.name = name();
    while (true) {
      bool had_space = !eof() && std::isspace(static_cast<unsigned char>(peek()));
      skip_space();
      if (looking_at("/>")) {
        advance(2);
        return node;
      }
      if (peek() == '>') {
        advance();
        break;
      }
      if (eof()) fail("unterminated start tag <" + node.name + ">");
      if (!had_space) fail("expected whitespace before attribute in <" + node.name + ">");
      std::string key = name();
      skip_space();
      if (peek() != '=') fail("expected '=' after attribute " + key);
      advance();
      skip_space();
      std::string value = attribute_value();
      if (node.attribute(key)) fail("duplicate attribute " + key);
      node.attributes.emplace_back(std::move(key), std::move(value));
    }
    content(node);
    return node;
  }

  void content(XmlNode& node) {
    while (true) {
      if (eof()) fail("missing end tag for <" + node.name + ">");
      if (looking_at("</")) {
        advance(2);
        std::string closing = name();
        skip_space();
        if (peek() != '>') fail("malformed end tag </" + closing + ">");
        advance();
        if (closing != node.name) {
          fail("end tag </" + closing + "> does not match <" + node.name + ">");
        }
        return;
      }
      if (looking_at("<!--")) {
        advance(4);
        skip_until("-->", "comment");
      } else if (looking_at("<![CDATA[")) {
        advance(9);
        std::size_t start = pos_;
        while (!eof() && !looking_at("]]>")) advance();
        if (eof()) fail("unterminated CDATA section");
        node.text += s_.substr(start, pos_ - start);
        advance(3);
      } else if (looking_at("<?")) {
        advance(2);
        skip_until("?>", "processing instruction");
      } else if (looking_at("<!")) {
        fail("markup declarations are not supported");
      } else if (peek() == '<') {
        node.children.push_back(element());
      } else if (peek() == '&') {
        reference(node.text);
      } else {
        node.text += peek();
        advance();
      }
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace

XmlNode parse_xml(std::string_view text) { return XmlParser(text).document(); }

std::string normalize_xml_whitespace(std::string_view text) {
  std::string collapsed;
  bool in_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      in_space = true;
      continue;
    }
    if (in_space && !collapsed.empty()) collapsed += ' ';
    in_space = false;
    collapsed += c;
  }
  auto sticky = [](char c) {
    return c == '<' || c == '>' || c == '/' || c == '=' || c == '"';
  };
  std::string out;
  for (std::size_t i = 0; i < collapsed.size(); ++i) {
    char c = collapsed[i];
    if (c == ' ') {
      char prev = out.empty() ? '\0' : out.back();
      char next = i + 1 < collapsed.size() ? collapsed[i + 1] : '\0';
      if (sticky(prev) || sticky(next)) continue;
    }
    out += c;
  }
  return out;
}

}  // namespace cycpp
