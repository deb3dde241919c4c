#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "lpi/error.hpp"
#include "lpi/tools/scenario.hpp"
#include "lpi/tools/suites.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

int run(const std::string& path, double tol) {
  try {
    const auto outcome = lpi::scenario::execute_file(path, tol);
    std::cout << lpi::io::dump(outcome.report);
    if (!outcome.ok) std::cerr << "lpi: scenario did not complete\n";
    return outcome.ok ? kOk : kFailed;
  } catch (const lpi::Error& e) {
    std::cerr << "lpi: " << e.what() << '\n';
    return kUsage;
  }
}

int verify(const lpi::suites::Config& cfg) {
  const auto results = lpi::suites::run_all(cfg);
  bool ok = true;
  for (const auto& r : results) {
    if (!r.passed()) {
      ok = false;
      std::cerr << "lpi: suite '" << r.name << "' failed " << r.failures << '/' << r.instances
                << (r.message.empty() ? "" : ": " + r.message) << '\n';
    }
  }
  std::cout << lpi::io::dump(lpi::suites::summary(cfg, results));
  return ok ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional expectations, slices, types and independence over finite weighted cell spaces"};
  app.require_subcommand(1);
  double tol = lpi::kDefaultTol;
  app.add_option("--tol", tol, "comparison tolerance")->capture_default_str();

  std::string path;
  auto* run_cmd = app.add_subcommand("run", "execute a scenario document and print the report");
  run_cmd->add_option("scenario", path, "scenario JSON file")->required();

  lpi::suites::Config cfg;
  auto* verify_cmd = app.add_subcommand("verify", "run the invariant suites and print a summary");
  verify_cmd->add_option("--seed", cfg.seed, "base seed")->capture_default_str();
  verify_cmd->add_option("--size", cfg.size, "cell budget of random instances")->capture_default_str();
  verify_cmd->add_option("--trials", cfg.trials, "random instances per suite")->capture_default_str();
  for (auto* sub : {run_cmd, verify_cmd}) sub->add_option("--tol", tol, "comparison tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (*run_cmd) return run(path, tol);
  cfg.tol = tol;
  return verify(cfg);
}
