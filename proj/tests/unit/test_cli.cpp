#include <gtest/gtest.h>

#include <json.hpp>

#include "cycpp/pipeline.hpp"
#include "support.hpp"

using testsupport::fixture_path;
using testsupport::run_command;

namespace {

std::string fx(const char* name) { return fixture_path(name).string(); }

std::vector<std::string> nonempty_lines(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < s.size()) {
    auto nl = s.find('\n', start);
    auto line = s.substr(start, nl - start);
    if (!line.empty()) out.push_back(line);
    if (nl == std::string::npos) break;
    start = nl + 1;
  }
  return out;
}

}  // namespace

TEST(Cli, PreprocessMatchesLibrary) {
  auto r = run_command({CYCPP_CLI, "preprocess", fx("reactor.h")});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  cycpp::PipelineOptions o;
  o.file_name = fx("reactor.h");
  EXPECT_EQ(r.out, cycpp::preprocess(testsupport::read_fixture("reactor.h"), o).generated.text);
}

TEST(Cli, PreprocessWritesOutputFile) {
  testsupport::TempDir tmp;
  auto out = (tmp.path / "gen.h").string();
  auto r = run_command({CYCPP_CLI, "preprocess", fx("passthrough.h"), "-o", out});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(cycpp::read_file(out), testsupport::read_fixture("passthrough.h"));
}

TEST(Cli, AnnotatePrintsJsonLines) {
  auto r = run_command({CYCPP_CLI, "annotate", fx("reactor.h"), fx("sink.h")});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  auto lines = nonempty_lines(r.out);
  ASSERT_EQ(lines.size(), 2u);
  auto rx = nlohmann::ordered_json::parse(lines[0]);
  EXPECT_EQ(rx["name"], "Reactor");
  EXPECT_EQ(rx["entity"], "facility");
  EXPECT_EQ(rx["vars"]["power"]["index"], 1);
  EXPECT_EQ(nlohmann::ordered_json::parse(lines[1])["name"], "Sink");
}

TEST(Cli, DumpRegistry) {
  auto r = run_command({CYCPP_CLI, "annotate", "--dump-registry", fx("reactor.h")});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NO_THROW(nlohmann::ordered_json::parse(nonempty_lines(r.out).at(0)));
}

TEST(Cli, SchemaAndValidate) {
  testsupport::TempDir tmp;
  auto rng = (tmp.path / "master.rng").string();
  auto m = run_command({CYCPP_CLI, "master-schema", fx("reactor.h"), fx("source.h"), fx("sink.h"),
                        "-o", rng});
  ASSERT_EQ(m.exit_code, 0) << m.err;

  auto good = run_command({CYCPP_CLI, "validate", rng, fx("reactor_valid.xml")});
  EXPECT_EQ(good.exit_code, 0) << good.err;
  EXPECT_NE(good.out.find("validates"), std::string::npos);

  auto bad = run_command({CYCPP_CLI, "validate", rng, fx("reactor_magic.xml")});
  EXPECT_EQ(bad.exit_code, 2);
  EXPECT_NE(bad.err.find("Type float doesn't allow value 'magic'"), std::string::npos) << bad.err;
  EXPECT_NE(bad.err.find("Document failed schema validation"), std::string::npos);

  auto s = run_command({CYCPP_CLI, "schema", fx("reactor.h")});
  ASSERT_EQ(s.exit_code, 0);
  EXPECT_NE(s.out.find("<element name=\"Reactor\">"), std::string::npos);
}

TEST(Cli, Locate) {
  testsupport::TempDir tmp;
  testsupport::touch(tmp.path / "my/path/libmylib.so");
  auto r = run_command({"env", "CYCLUS_PATH=" + tmp.path.string(), CYCPP_CLI, "locate",
                        "my/path:mylib:MyAgent"});
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find((tmp.path / "my/path/libmylib.so").string()), std::string::npos) << r.out;
  auto miss = run_command({"env", "CYCLUS_PATH=" + tmp.path.string(), CYCPP_CLI, "locate", "Nope"});
  EXPECT_EQ(miss.exit_code, 1);
  EXPECT_EQ(run_command({CYCPP_CLI, "locate", "a:b:c:d"}).exit_code, 1);
}

TEST(Cli, CheckTableName) {
  EXPECT_EQ(run_command({CYCPP_CLI, "check-table-name", "ReactorState"}).exit_code, 0);
  EXPECT_EQ(run_command({CYCPP_CLI, "check-table-name", "Resources"}).exit_code, 1);
}

TEST(Cli, ErrorsAreLocatedAndExitOne) {
  testsupport::TempDir tmp;
  auto src = tmp.path / "bad.h";
  cycpp::write_file(src, "class A : public cyclus::Facility {\n  #pragma cyclus var {\n  int x;\n};\n");
  auto r = run_command({CYCPP_CLI, "preprocess", src.string()});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("bad.h:2"), std::string::npos) << r.err;
}

TEST(Cli, JsonDiagnostics) {
  testsupport::TempDir tmp;
  auto src = tmp.path / "bad.h";
  cycpp::write_file(src, "class A : public cyclus::Facility {\n  #pragma cyclus var {'type': 1}\n  int x;\n};\n");
  auto r = run_command({CYCPP_CLI, "--json-diagnostics", "annotate", src.string()});
  EXPECT_EQ(r.exit_code, 1);
  auto j = nlohmann::ordered_json::parse(nonempty_lines(r.err).at(0));
  EXPECT_EQ(j["kind"], "ReadOnlyKeyViolation");
  EXPECT_EQ(j["line"], 2);
  EXPECT_NE(j["file"].get<std::string>().find("bad.h"), std::string::npos);
}

TEST(Cli, IncludeDirsAndDefines) {
  testsupport::TempDir tmp;
  std::filesystem::create_directories(tmp.path / "inc");
  cycpp::write_file(tmp.path / "inc/types.h", "typedef double real;\n");
  auto src = tmp.path / "a.h";
  cycpp::write_file(src,
                    "#include \"types.h\"\n"
                    "class A : public cyclus::Facility {\n"
                    "#ifdef WANT\n"
                    "  #pragma cyclus var {}\n"
                    "  real x;\n"
                    "#endif\n"
                    "};\n");
  auto r = run_command({CYCPP_CLI, "-I", (tmp.path / "inc").string(), "-D", "WANT", "annotate",
                        src.string()});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  auto j = nlohmann::ordered_json::parse(nonempty_lines(r.out).at(0));
  EXPECT_EQ(j["vars"]["x"]["type"], "double");
}

TEST(Cli, UsageErrors) {
  EXPECT_NE(run_command({CYCPP_CLI}).exit_code, 0);
  EXPECT_NE(run_command({CYCPP_CLI, "preprocess", "/no/such/file.h"}).exit_code, 0);
  EXPECT_EQ(run_command({CYCPP_CLI, "--help"}).exit_code, 0);
}
