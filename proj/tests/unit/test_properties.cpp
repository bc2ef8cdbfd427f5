// Randomized checks of invariants that span modules.

#include <gtest/gtest.h>

#include <random>

#include "cycpp/codegen.hpp"
#include "cycpp/locator.hpp"
#include "cycpp/normalizer.hpp"
#include "cycpp/pipeline.hpp"
#include "cycpp/schema.hpp"
#include "cycpp/vl_store.hpp"
#include "support.hpp"

using namespace cycpp;

namespace {

std::mt19937_64& rng() {
  static std::mt19937_64 r(20240611);
  return r;
}

int pick(int n) { return static_cast<int>(rng()() % static_cast<std::uint64_t>(n)); }

std::string random_type(int depth = 0) {
  static const char* leaves[] = {"int", "double", "float", "bool", "std::string"};
  int k = depth > 2 ? 0 : pick(5);
  switch (k) {
    case 0:
    case 1: return leaves[pick(5)];
    case 2: return "std::vector<" + random_type(depth + 1) + ">";
    case 3: return "std::map<" + std::string(leaves[pick(5)]) + "," + random_type(depth + 1) + ">";
    default: return "std::pair<" + random_type(depth + 1) + "," + random_type(depth + 1) + ">";
  }
}

std::string sprinkle_spaces(const std::string& s) {
  std::string out;
  for (char c : s) {
    bool punct = c == '<' || c == '>' || c == ',';
    if (punct && pick(2)) out += std::string(static_cast<std::size_t>(pick(3)), ' ');
    out += c;
    if (punct && pick(2)) out += pick(2) ? "\t" : " ";
  }
  return out;
}

}  // namespace

TEST(Property, AliasFuzzMatchesSubstitutionOracle) {
  auto rep = testsupport::alias_fuzz(200, 5, 99);
  EXPECT_EQ(rep.graphs, 200);
  EXPECT_GT(rep.queries, 0);
  EXPECT_EQ(rep.mismatches, 0) << rep.first_mismatch;
}

TEST(Property, CanonicalizeIgnoresWhitespaceAndIsIdempotent) {
  for (int i = 0; i < 500; ++i) {
    std::string text = random_type();
    auto t = canonicalize(text);
    EXPECT_EQ(canonicalize(sprinkle_spaces(text)), t) << text;
    EXPECT_EQ(canonicalize(t.cpp()), t) << text;
  }
}

TEST(Property, StateVarIndicesFollowDeclarationOrder) {
  for (int round = 0; round < 50; ++round) {
    int n = 1 + pick(8);
    std::string src = "class A : public cyclus::Facility {\n  #pragma cyclus\n";
    std::vector<std::string> types;
    for (int i = 0; i < n; ++i) {
      types.push_back(random_type());
      if (pick(3) == 0) src += pick(2) ? " public:\n" : " private:\n";
      src += "  #pragma cyclus var {'doc': 'v" + std::to_string(i) + "'}\n";
      src += "  " + types.back() + " v" + std::to_string(i) + ";\n";
    }
    src += "};\n";
    auto reg = testsupport::registry_from(src);
    const auto& vars = reg.archetypes.at(0).state_vars;
    ASSERT_EQ(vars.size(), static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const auto& v = vars[static_cast<std::size_t>(i)];
      EXPECT_EQ(v.index, i);
      EXPECT_EQ(v.name, "v" + std::to_string(i));
      EXPECT_EQ(v.type, canonicalize(types[static_cast<std::size_t>(i)]));
    }
  }
}

TEST(Property, GeneratedSchemasValidateTheirOwnSamples) {
  // A document built from defaults-free scalar vars always validates.
  for (int round = 0; round < 30; ++round) {
    int n = 1 + pick(5);
    static const char* types[] = {"int", "double", "bool", "std::string"};
    static const char* samples[] = {"7", "2.5e3", "true", "hello"};
    std::string src = "class A : public cyclus::Facility {\n";
    std::vector<std::string> parts;
    for (int i = 0; i < n; ++i) {
      int k = pick(4);
      src += "  #pragma cyclus var {}\n  " + std::string(types[k]) + " v" + std::to_string(i) + ";\n";
      parts.push_back("<v" + std::to_string(i) + ">" + samples[k] + "</v" + std::to_string(i) + ">");
    }
    src += "};\n";
    auto reg = testsupport::registry_from(src);
    auto master = assemble_master({build_archetype_schema(reg.archetypes.at(0))});
    std::shuffle(parts.begin(), parts.end(), rng());
    std::string cfg;
    for (const auto& p : parts) cfg += p;
    std::string doc = "<facility><name>x</name><config><A>" + cfg + "</A></config></facility>";
    auto r = validate(parse_xml(doc), master);
    EXPECT_TRUE(r.ok()) << doc << "\n" << r.report();
    if (n > 0) {
      auto missing = doc;
      missing.erase(missing.find(parts[0]), parts[0].size());
      EXPECT_FALSE(validate(parse_xml(missing), master).ok()) << missing;
    }
  }
}

TEST(Property, DirectiveFreeSourcePassesThrough) {
  static const char* lines[] = {
      "int a = 1;", "// comment with #pragma cyclus inside", "struct S { int x; };",
      "namespace n { typedef double real; }", "#define LIMIT 3", "const char* s = \"{\";",
      "void f() {", "}", "", "  \t", "auto r = R\"x(#pragma cyclus)x\";", "/* block",
      "   still comment */", "class C : public cyclus::Facility {", "};"};
  for (int round = 0; round < 100; ++round) {
    std::string src;
    for (int i = pick(40); i > 0; --i) {
      src += lines[pick(15)];
      src += '\n';
    }
    auto out = generate(src, Registry{});
    EXPECT_EQ(out.text, src);
    EXPECT_TRUE(out.blocks.empty());
  }
}

TEST(Property, NormalizerIsIdempotentOnRandomText) {
  static const char* lines[] = {"#define A 1", "int x = A;", "#ifdef A", "int y;", "#endif",
                                "/* c */ int z; // t", "#pragma cyclus var {}", "double w;",
                                "#undef A", "  "};
  for (int round = 0; round < 200; ++round) {
    std::string src;
    int depth = 0;
    for (int i = pick(30); i > 0; --i) {
      int k = pick(10);
      if (k == 2) ++depth;
      if (k == 4) {
        if (depth == 0) continue;
        --depth;
      }
      src += lines[k];
      src += '\n';
    }
    for (; depth > 0; --depth) src += "#endif\n";
    auto once = normalize(src);
    auto twice = normalize(once.render());
    ASSERT_EQ(once.lines.size(), twice.lines.size()) << src;
    for (std::size_t i = 0; i < once.lines.size(); ++i) {
      EXPECT_EQ(once.lines[i].text, twice.lines[i].text);
    }
  }
}

TEST(Property, SpecRenderIsStable) {
  static const char* parts[] = {"", "a", "my/path", "lib", "X"};
  for (int i = 0; i < 200; ++i) {
    int n = 1 + pick(3);
    std::string s;
    for (int k = 0; k < n; ++k) {
      if (k) s += ':';
      s += k == n - 1 ? "Agent" : parts[pick(5)];
    }
    auto spec = parse_spec(s);
    EXPECT_EQ(parse_spec(spec.render()), spec) << s;
    EXPECT_EQ(spec.archetype, "Agent");
  }
}

TEST(Property, HashKeysAreStableAcrossLayouts) {
  auto map_t = canonicalize("std::map<std::string, int>");
  auto set_t = canonicalize("std::set<int>");
  for (int i = 0; i < 200; ++i) {
    ValuePairs entries;
    ValueList set;
    for (int k = pick(6); k > 0; --k) {
      entries.emplace_back(Value(std::to_string(k)), Value(static_cast<std::int32_t>(pick(10))));
      set.push_back(Value(static_cast<std::int32_t>(pick(10))));
    }
    ValuePairs shuffled_entries = entries;
    ValueList shuffled_set = set;
    std::shuffle(shuffled_entries.begin(), shuffled_entries.end(), rng());
    std::shuffle(shuffled_set.begin(), shuffled_set.end(), rng());
    if (!set.empty()) shuffled_set.push_back(set.front());
    EXPECT_EQ(hash_value(map_t, Value(entries)), hash_value(map_t, Value(shuffled_entries)));
    EXPECT_EQ(hash_value(set_t, Value(set)), hash_value(set_t, Value(shuffled_set)));
  }
}
