// Command-line front end. Talks to the library only through the C API.

#include "palab/palab.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (static_cast<unsigned char>(c) < 0x20) continue;
    out += c;
  }
  return out;
}

int fail(palab_status status, const char* stage) {
  std::cerr << "{\"error\":\"" << json_escape(palab_last_error()) << "\",\"stage\":\"" << stage
            << "\",\"status\":" << static_cast<int>(status) << "}\n";
  return palab_exit_code(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy amplification lab: batch experiments with CSV/JSON reports"};
  app.footer(palab_experiment_help());

  // String-valued; the library parses them like config-file values.
  const std::vector<std::pair<std::string, std::string>> flags = {
      {"experiment", "rates | distill-sweep | equivalence | coding-bound | checker-fuzz | uncertainty-fuzz"},
      {"n", "block length (sweeps run 2..n)"},
      {"theta", "attack angle in radians"},
      {"delta", "typicality parameter"},
      {"epsilon", "typicality failure budget"},
      {"margin", "extra announced bits beyond n (1 - chi)"},
      {"seed", "base seed"},
      {"trials", "trials per setting"},
      {"out", "report path (stdout when omitted)"},
      {"format", "csv | json"},
  };
  std::vector<std::string> values(flags.size());
  std::vector<CLI::Option*> options;
  for (std::size_t i = 0; i < flags.size(); ++i)
    options.push_back(app.add_option("--" + flags[i].first, values[i], flags[i].second));
  std::string config_path;
  app.add_option("--config", config_path, "JSON file with the same keys; flags override it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  palab_config* config = nullptr;
  if (auto s = palab_config_new(&config); s != PALAB_OK) return fail(s, "config");

  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "{\"error\":\"cannot read config file\",\"stage\":\"config\",\"status\":8}\n";
      palab_config_free(config);
      return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    if (auto s = palab_config_load_json(config, buf.str().c_str()); s != PALAB_OK) {
      palab_config_free(config);
      return fail(s, "config");
    }
  }
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (options[i]->count() == 0) continue;
    if (auto s = palab_config_set(config, flags[i].first.c_str(), values[i].c_str()); s != PALAB_OK) {
      palab_config_free(config);
      return fail(s, "config");
    }
  }

  palab_report* report = nullptr;
  const palab_status status = palab_run(config, &report);
  palab_config_free(config);
  if (status != PALAB_OK) return fail(status, "run");

  if (!palab_report_wrote_file(report)) std::fputs(palab_report_text(report), stdout);
  for (std::size_t i = 0; i < palab_report_failure_count(report); ++i)
    std::cerr << palab_report_failure(report, i) << "\n";
  const int code = palab_report_exit_code(report);
  palab_report_free(report);
  return code;
}
