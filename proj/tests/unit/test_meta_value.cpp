#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <json.hpp>

#include "cycpp/meta_value.hpp"

using namespace cycpp;

TEST(RenderJson, FollowsListingSpelling) {
  EXPECT_EQ(render_json(MetaObject{{"doc", "Are we operating?"}}), R"({"doc":"Are we operating?"})");
  EXPECT_EQ(render_json(MetaObject{}), "{}");
  EXPECT_EQ(render_json(MetaObject{{"x", MetaArray{1, -1}}}), R"({"x":[1,-1]})");
}

TEST(RenderJson, FloatsPrintLikePythonRepr) {
  EXPECT_EQ(format_float_repr(4e14), "400000000000000.0");
  EXPECT_EQ(format_float_repr(1e16), "1e+16");
  EXPECT_EQ(format_float_repr(42.0), "42.0");
  EXPECT_EQ(format_float_repr(0.1), "0.1");
  EXPECT_EQ(format_float_repr(1e-5), "1e-05");
  EXPECT_EQ(format_float_repr(0.0001), "0.0001");
  EXPECT_EQ(format_float_repr(-2.5), "-2.5");
  EXPECT_EQ(format_float_repr(1e299), "1e+299");
}

TEST(RenderJson, EscapesStrings) {
  EXPECT_EQ(json_quote("a\"b\\c\n"), R"("a\"b\\c\n")");
  EXPECT_EQ(json_quote(std::string("\x01", 1)), R"("\u0001")");
}

TEST(RenderJson, KeepsInsertionOrder) {
  MetaObject o;
  o.set("z", 1);
  o.set("a", 2);
  o.set("z", 3);
  EXPECT_EQ(render_json(o), R"({"z":3,"a":2})");
}

TEST(ParseLiteral, FluxAnnotation) {
  auto v = parse_annotation_literal(R"({"default": 42.0, "units": "n/cm2/s"})");
  EXPECT_EQ(v, MetaValue(MetaObject{{"default", 42.0}, {"units", "n/cm2/s"}}));
}

TEST(ParseLiteral, EmptyDict) { EXPECT_EQ(parse_annotation_literal("{}"), MetaValue(MetaObject{})); }

TEST(ParseLiteral, EnvironmentNames) {
  MetaEnv env;
  env["C"] = 3;
  EXPECT_EQ(parse_annotation_literal("{'n': C}", env), MetaValue(MetaObject{{"n", 3}}));
}

TEST(ParseLiteral, UnknownName) {
  try {
    parse_literal("{'n': missing}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownName);
  }
}

TEST(ParseLiteral, NotAnObject) {
  try {
    parse_annotation_literal("[1, 2]");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAnObject);
  }
}

TEST(ParseLiteral, SyntaxErrors) {
  for (const char* bad : {"{", "{'a': }", "{'a' 1}", "'unterminated", "{'a': 1,, }", "@"}) {
    try {
      parse_literal(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::SyntaxError) << bad;
    }
  }
}

TEST(ParseLiteral, PythonScalars) {
  EXPECT_EQ(parse_literal("True"), MetaValue(true));
  EXPECT_EQ(parse_literal("False"), MetaValue(false));
  EXPECT_EQ(parse_literal("None"), MetaValue(nullptr));
  EXPECT_EQ(parse_literal("4e14"), MetaValue(4e14));
  EXPECT_EQ(parse_literal("0x10"), MetaValue(16));
  EXPECT_EQ(parse_literal("-7"), MetaValue(-7));
  EXPECT_EQ(parse_literal("'a' 'b'"), MetaValue("ab"));
  EXPECT_EQ(parse_literal("(1, 2)"), MetaValue(MetaArray{1, 2}));
}

TEST(ParseLiteral, IntAndFloatStayDistinct) {
  EXPECT_TRUE(parse_literal("42").is_int());
  EXPECT_TRUE(parse_literal("42.0").is_float());
  EXPECT_NE(parse_literal("42"), parse_literal("42.0"));
}

TEST(ParseLiteral, Arithmetic) {
  EXPECT_EQ(parse_literal("2 * 3 + 1"), MetaValue(7));
  EXPECT_EQ(parse_literal("'ab' * 2"), MetaValue("abab"));
  EXPECT_EQ(parse_literal("[1] + [2]"), MetaValue(MetaArray{1, 2}));
  EXPECT_EQ(parse_literal("1.5 * 2"), MetaValue(3.0));
}

// -- round trip against an independent JSON parser --------------------------

namespace {

MetaValue from_json(const nlohmann::ordered_json& j) {
  if (j.is_null()) return nullptr;
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  if (j.is_array()) {
    MetaArray a;
    for (const auto& e : j) a.push_back(from_json(e));
    return a;
  }
  MetaObject o;
  for (auto it = j.begin(); it != j.end(); ++it) o.set(it.key(), from_json(it.value()));
  return o;
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  MetaValue value(int depth) {
    int pick = uniform(0, depth > 3 ? 4 : 6);
    switch (pick) {
      case 0: return nullptr;
      case 1: return uniform(0, 1) == 1;
      case 2: return static_cast<std::int64_t>(rng_()) >> uniform(0, 62);
      case 3: return real();
      case 4: return str();
      case 5: {
        MetaArray a;
        for (int i = uniform(0, 4); i > 0; --i) a.push_back(value(depth + 1));
        return a;
      }
      default: {
        MetaObject o;
        for (int i = uniform(0, 4); i > 0; --i) o.set(str(), value(depth + 1));
        return o;
      }
    }
  }

 private:
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  double real() {
    switch (uniform(0, 3)) {
      case 0: return static_cast<double>(uniform(-1000, 1000));
      case 1: return std::uniform_real_distribution<double>(-1, 1)(rng_);
      case 2: return std::ldexp(std::uniform_real_distribution<double>(1, 2)(rng_), uniform(-80, 80));
      default: return std::pow(10.0, uniform(-20, 300));
    }
  }

  std::string str() {
    static const std::vector<std::string> pieces = {"a", "Z", "0", " ", "\"", "\\", "\n", "\t",
                                                    "/", "\x01", "\xc3\xa9", "\xe2\x82\xac",
                                                    "\xf0\x9f\x98\x80", "{", "'"};
    std::string s;
    for (int i = uniform(0, 8); i > 0; --i) s += pieces[static_cast<std::size_t>(uniform(0, 14))];
    return s;
  }

  std::mt19937_64 rng_;
};

}  // namespace

TEST(JsonRoundTrip, IndependentParserRecoversEveryValue) {
  Gen gen(1234);
  for (int i = 0; i < 2000; ++i) {
    MetaValue v = gen.value(0);
    std::string text = render_json(v);
    auto parsed = nlohmann::ordered_json::parse(text);
    ASSERT_EQ(from_json(parsed), v) << text;
  }
}

TEST(JsonRoundTrip, LiteralParserAcceptsCanonicalJson) {
  Gen gen(99);
  for (int i = 0; i < 2000; ++i) {
    MetaValue v = gen.value(0);
    std::string text = render_json(v);
    ASSERT_EQ(parse_literal(text), v) << text;
  }
}
