#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "phasegeo/errors.hpp"
#include "phasegeo/harness.hpp"

using json = nlohmann::json;

namespace {

struct Options {
  std::string config;
  std::string preset;
  std::string out = "out";
  std::uint64_t seed = 0;
  int threads = 0;
};

// Loads the config from --config or --preset; returns exit status 2 on error.
int load(const std::string& command, const Options& o, json& cfg) {
  if (o.config.empty() == o.preset.empty()) {
    std::cerr << "error: give exactly one of --config or --preset\n";
    return 2;
  }
  if (!o.preset.empty()) {
    try {
      const auto& p = phasegeo::find_preset(o.preset);
      if (p.command != command) {
        std::cerr << "error: preset '" << o.preset << "' belongs to command '" << p.command
                  << "'\n";
        return 2;
      }
      cfg = p.config;
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  std::ifstream in(o.config);
  if (!in) {
    std::cerr << "error: cannot open config file " << o.config << "\n";
    return 2;
  }
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    std::cerr << "error: invalid JSON in " << o.config << ": " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degenerate-metric geodesics, transition profiles and phase-field sweeps"};
  app.require_subcommand(1);
  Options o;
  o.threads = phasegeo::default_threads();

  for (const auto& name : phasegeo::command_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " command");
    sub->add_option("--config", o.config, "JSON configuration file");
    sub->add_option("--preset", o.preset, "named preset instead of a config file");
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
    sub->add_option("--seed", o.seed, "random seed recorded in the manifest")->capture_default_str();
    sub->add_option("--threads", o.threads, "worker threads (default from PHASEGEO_THREADS)")
        ->check(CLI::Range(1, 1024));
  }
  auto* list = app.add_subcommand("presets", "list the built-in presets");
  bool as_json = false;
  list->add_flag("--json", as_json, "print presets with their configs as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list->parsed()) {
    if (as_json) {
      json out = json::array();
      for (const auto& p : phasegeo::presets()) {
        out.push_back({{"name", p.name}, {"description", p.description}, {"command", p.command},
                       {"config", p.config}});
      }
      std::cout << out.dump(2) << "\n";
    } else {
      for (const auto& p : phasegeo::presets()) {
        std::cout << p.name << "  [" << p.command << "]  " << p.description << "\n";
      }
    }
    return 0;
  }

  for (auto* sub : app.get_subcommands()) {
    const std::string command = sub->get_name();
    json cfg;
    if (const int rc = load(command, o, cfg); rc != 0) return rc;
    const auto m = phasegeo::run(command, cfg, o.out, o.seed, o.threads);
    if (m.exit_code != 0) {
      std::cerr << "error: " << m.error << "\n";
    } else {
      std::cout << command << ": wrote " << m.files.size() << " files to " << o.out
                << " (config " << m.config_hash << ", " << m.seconds << " s)\n";
    }
    return m.exit_code;
  }
  return 0;
}
