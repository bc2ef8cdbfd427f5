// cycpp: archetype preprocessor, schema generator and input validator.

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cycpp/locator.hpp"
#include "cycpp/meta_value.hpp"
#include "cycpp/pipeline.hpp"
#include "cycpp/schema.hpp"
#include "cycpp/vl_store.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kToolError = 1;
constexpr int kRejected = 2;

struct Common {
  std::vector<std::string> include_dirs;
  std::vector<std::string> defines;
  bool json_diagnostics = false;
};

void report(const Common& c, const cycpp::Error& e) {
  if (!c.json_diagnostics) {
    std::cerr << "cycpp: " << e.diagnostic() << "\n";
    return;
  }
  cycpp::MetaObject o;
  o.set("kind", std::string(cycpp::to_string(e.kind())));
  o.set("file", e.where() ? cycpp::MetaValue(e.where()->file) : cycpp::MetaValue(nullptr));
  o.set("line", e.where() ? cycpp::MetaValue(std::int64_t{e.where()->line})
                          : cycpp::MetaValue(nullptr));
  o.set("message", std::string(e.what()));
  std::cerr << cycpp::render_json(cycpp::MetaValue(std::move(o))) << "\n";
}

cycpp::PipelineOptions pipeline_options(const Common& c, const std::string& file) {
  cycpp::PipelineOptions o;
  o.file_name = file;
  o.include_dirs = c.include_dirs;
  for (const auto& d : c.defines) {
    auto eq = d.find('=');
    if (eq == std::string::npos) o.defines[d] = "1";
    else o.defines[d.substr(0, eq)] = d.substr(eq + 1);
  }
  return o;
}

cycpp::Registry load(const Common& c, const std::string& file) {
  return cycpp::annotate(cycpp::read_file(file), pipeline_options(c, file));
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) std::cout << text;
  else cycpp::write_file(out, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Archetype preprocessor, schema generator and input validator"};
  app.require_subcommand(1);
  Common common;
  app.add_option("-I", common.include_dirs, "Add an include directory")->type_name("DIR");
  app.add_option("-D", common.defines, "Predefine a macro")->type_name("NAME[=VAL]");
  app.add_flag("--json-diagnostics", common.json_diagnostics,
               "Print errors as one JSON object per line");

  std::string input, output;
  std::vector<std::string> inputs;

  auto* pre = app.add_subcommand("preprocess", "Generate archetype member functions");
  pre->add_option("input", input, "Source file")->required()->check(CLI::ExistingFile);
  pre->add_option("-o,--output", output, "Write here instead of stdout");

  bool dump_registry = false;
  auto* ann = app.add_subcommand("annotate", "Print archetype annotations as JSON");
  ann->add_option("inputs", inputs, "Source files")->required()->check(CLI::ExistingFile);
  ann->add_flag("--dump-registry", dump_registry, "Print the full class registry instead");

  auto* sch = app.add_subcommand("schema", "Print the RELAX NG schema of each archetype");
  sch->add_option("input", input, "Source file")->required()->check(CLI::ExistingFile);
  sch->add_option("-o,--output", output, "Write here instead of stdout");

  auto* master = app.add_subcommand("master-schema", "Print the master simulation schema");
  master->add_option("inputs", inputs, "Source files")->required()->check(CLI::ExistingFile);
  master->add_option("-o,--output", output, "Write here instead of stdout");

  std::string schema_path, xml_path;
  auto* val = app.add_subcommand("validate", "Validate an input file against a schema");
  val->add_option("schema", schema_path, "RELAX NG file")->required()->check(CLI::ExistingFile);
  val->add_option("xml", xml_path, "Input file")->required()->check(CLI::ExistingFile);

  std::string spec;
  auto* loc = app.add_subcommand("locate", "Resolve an archetype specification to a library");
  loc->add_option("spec", spec, "path:library:archetype")->required();

  std::string table;
  auto* tbl = app.add_subcommand("check-table-name", "Fail if a table name is reserved");
  tbl->add_option("name", table, "Table name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kToolError;
  }

  try {
    if (*pre) {
      auto r = cycpp::preprocess(cycpp::read_file(input), pipeline_options(common, input));
      emit(r.generated.text, output);
    } else if (*ann) {
      for (const auto& file : inputs) {
        auto reg = load(common, file);
        if (dump_registry) {
          std::cout << cycpp::render_json(reg.dump()) << "\n";
          continue;
        }
        for (const auto& a : reg.archetypes) {
          std::cout << cycpp::render_json(a.annotation()) << "\n";
        }
      }
    } else if (*sch) {
      auto reg = load(common, input);
      std::string text;
      for (const auto& a : reg.archetypes) {
        text += cycpp::render_rng(cycpp::build_archetype_schema(a));
      }
      emit(text, output);
    } else if (*master) {
      std::vector<cycpp::RngNode> schemas;
      for (const auto& file : inputs) {
        for (const auto& a : load(common, file).archetypes) {
          schemas.push_back(cycpp::build_archetype_schema(a));
        }
      }
      emit(cycpp::render_rng(cycpp::assemble_master(schemas)), output);
    } else if (*val) {
      auto schema = cycpp::parse_rng(cycpp::read_file(schema_path));
      auto doc = cycpp::parse_xml(cycpp::read_file(xml_path));
      auto result = cycpp::validate(doc, schema);
      if (result.ok()) {
        std::cout << xml_path << " validates\n";
        return kOk;
      }
      if (common.json_diagnostics) {
        for (const auto& e : result.errors) {
          cycpp::MetaObject o;
          o.set("kind", std::string("ValidationError"));
          o.set("file", xml_path);
          o.set("line", std::int64_t{e.line});
          o.set("element", e.element);
          o.set("message", e.message);
          std::cerr << cycpp::render_json(cycpp::MetaValue(std::move(o))) << "\n";
        }
      } else {
        std::cerr << result.report();
      }
      return kRejected;
    } else if (*loc) {
      std::cout << cycpp::search(cycpp::parse_spec(spec), cycpp::default_search_dirs()).string()
                << "\n";
    } else if (*tbl) {
      if (cycpp::is_reserved_table_name(table)) {
        std::cerr << "cycpp: '" << table << "' is a reserved table name\n";
        return kToolError;
      }
    }
  } catch (const cycpp::Error& e) {
    report(common, e);
    return kToolError;
  }
  return kOk;
}
