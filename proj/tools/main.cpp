#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "quakebend/run.hpp"

namespace {

std::string read_file(const std::string& path, bool& ok) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    ok = false;
    return {};
  }
  std::ostringstream os;
  os << is.rdbuf();
  ok = static_cast<bool>(is);
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Twist/bend deformations of surface-group representations into SO(n,1),\n"
      "earthquake approximation along multicurve sequences, and numerical\n"
      "verification of the structural identities."};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  double tol = 0.0;
  auto* config_opt = app.add_option("--config", config_path, "TOML configuration file");
  auto* seed_opt = app.add_option("--seed", seed, "override the configured random seed");
  app.add_option("--out", out_dir, "output directory for reports and artifacts");
  auto* tol_opt =
      app.add_option("--tol", tol, "override the earthquake convergence tolerance");

  app.add_subcommand("deform", "apply the multicurve deformation at parameter t")->fallthrough();
  app.add_subcommand("earthquake", "run the multicurve sequence and certify its convergence")
      ->fallthrough();
  app.add_subcommand("verify", "run the named structural checks (default: all)")->fallthrough();
  app.add_subcommand("crossings",
                     "list the signed lift crossings of a word's basepoint segment")
      ->fallthrough();
  app.add_subcommand("limitset", "sample boundary fixed points and emit CSV/SVG")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // command-line errors are configuration errors
  }

  std::string config_text;
  if (config_opt->count() > 0) {
    bool ok = true;
    config_text = read_file(config_path, ok);
    if (!ok) {
      std::cerr << "error (config): cannot read config file: " << config_path << "\n";
      return 2;
    }
  }

  qb::RunOverrides overrides;
  if (seed_opt->count() > 0) overrides.seed = seed;
  if (tol_opt->count() > 0) overrides.tol = tol;

  const std::string command = app.get_subcommands().front()->get_name();
  return qb::run_command(command, config_text, out_dir, overrides);
}
