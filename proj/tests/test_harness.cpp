#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "phasegeo/errors.hpp"
#include "phasegeo/harness.hpp"

using namespace phasegeo;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("phasegeo_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> files_under(const fs::path& dir) {
  std::vector<std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out.push_back(fs::relative(e.path(), dir).generic_string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

RunManifest run_preset(const std::string& name, const fs::path& out) {
  const auto& p = find_preset(name);
  return run(p.command, p.config, out);
}

int run_cli(const std::string& args) {
  const char* cli = std::getenv("PHASEGEO_CLI");
  REQUIRE(cli != nullptr);
  const int status = std::system((std::string(cli) + " " + args + " 2>/dev/null").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("preset list") {
  std::vector<std::string> names;
  for (const auto& p : presets()) {
    names.push_back(p.name);
    CHECK_FALSE(p.description.empty());
    CHECK(std::find(command_names().begin(), command_names().end(), p.command) !=
          command_names().end());
  }
  for (const char* required :
       {"double-well-sweep", "moving-wells-1d", "dirichlet-1d", "counterexample"}) {
    CHECK(std::find(names.begin(), names.end(), required) != names.end());
  }
  CHECK_THROWS_AS(find_preset("nope"), ConfigError);
}

TEST_CASE("double-well sweep preset") {
  const auto out = scratch("sweep");
  const auto m = run_preset("double-well-sweep", out);
  REQUIRE(m.exit_code == 0);
  std::istringstream csv(slurp(out / "sweep.csv"));
  std::string line;
  int rows = -1;  // header
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 4);
  CHECK(m.files == files_under(out));
  const json manifest = json::parse(slurp(out / "manifest.json"));
  CHECK(manifest.at("config_hash") == m.config_hash);
  fs::remove_all(out);
}

TEST_CASE("runs are deterministic") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  for (const char* name : {"moving-wells-1d", "near-well-geodesic"}) {
    CAPTURE(name);
    const auto ma = run_preset(name, a);
    const auto mb = run_preset(name, b);
    REQUIRE(ma.exit_code == 0);
    CHECK(ma.files == mb.files);
    CHECK(ma.config_hash == mb.config_hash);
    for (const auto& f : ma.files) {
      if (f.size() > 4 && f.substr(f.size() - 4) == ".csv") CHECK(slurp(a / f) == slurp(b / f));
    }
    fs::remove_all(a);
    fs::remove_all(b);
  }
}

TEST_CASE("counterexample preset") {
  const auto out = scratch("counter");
  const auto m = run_preset("counterexample", out);
  REQUIRE(m.exit_code == 0);
  const json res = json::parse(slurp(out / "sharp.json"));
  const auto& rows = res.at("counterexample").at("rows");
  REQUIRE(rows.size() == 9);
  CHECK(res.at("counterexample").at("all_within").get<bool>());
  for (const auto& r : rows) CHECK(r.at("within").get<bool>());
  CHECK(m.files == files_under(out));
  fs::remove_all(out);
}

TEST_CASE("module errors are recorded in the manifest") {
  const auto out = scratch("errors");
  const json bad_jump = {{"potential", "scalar-double-well"},
                         {"minimal_jump", {{"left", 1}, {"right", 2}, {"mass", {2.5}}}}};
  const auto m = run("sharp", bad_jump, out);
  CHECK(m.exit_code == 4);
  CHECK(m.status == "error");
  CHECK(json::parse(slurp(out / "manifest.json")).at("exit_code") == 4);
  fs::remove_all(out);

  const auto m2 = run("sharp", {{"potential", "scalar-double-well"}, {"bogus", 1}}, out);
  CHECK(m2.exit_code == 2);
  fs::remove_all(out);
}

TEST_CASE("exit codes and hashing") {
  CHECK(exit_code_of(ConfigError("x")) == 2);
  CHECK(exit_code_of(ParameterError("x")) == 2);
  CHECK(exit_code_of(NumericError("x")) == 3);
  CHECK(exit_code_of(StalledError("x")) == 3);
  CHECK(exit_code_of(InfeasibleError("x")) == 4);
  CHECK(exit_code_of(GeometryError("x")) == 4);
  // FNV-1a 64-bit reference values
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  const json c = {{"b", 1}, {"a", 2}};
  CHECK(config_hash("sweep", c, 1) == config_hash("sweep", json::parse(c.dump()), 1));
  CHECK(config_hash("sweep", c, 1) != config_hash("sweep", c, 2));
  CHECK(config_hash("sweep", c, 1).size() == 16);
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("command line") {
  const auto dir = scratch("cli");
  fs::create_directories(dir);
  {
    std::ofstream(dir / "broken.json") << "{\"potential\": ";
  }
  CHECK(run_cli("sweep --config " + (dir / "broken.json").string() + " --out " +
                (dir / "o1").string()) == 2);
  CHECK(run_cli("sweep --config " + (dir / "missing.json").string() + " --out " +
                (dir / "o2").string()) == 2);
  CHECK(run_cli("geodesic --preset near-well-geodesic --out " + (dir / "o3").string()) == 0);
  CHECK(fs::exists(dir / "o3" / "manifest.json"));
  CHECK(run_cli("presets --json > " + (dir / "list.json").string()) == 0);
  const json list = json::parse(slurp(dir / "list.json"));
  CHECK(list.size() == presets().size());
  fs::remove_all(dir);
}
