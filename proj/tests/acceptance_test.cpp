// Runs every acceptance criterion at its pinned size and prints one line each.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "lpi/tools/suites.hpp"

namespace {

using lpi::suites::Config;
using lpi::suites::Result;

struct Criterion {
  int number;
  std::string title;
  std::vector<std::function<Result(const Config&)>> suites;
  std::size_t trials;        // random instances per suite (fixtures ignore it)
  std::size_t min_instances; // instances that must have been checked
  double seconds;            // wall-clock limit, 0 = none
};

bool run(const Criterion& c) {
  Config cfg;
  cfg.seed = 20240601;
  cfg.size = 8;
  cfg.trials = c.trials;
  const auto start = std::chrono::steady_clock::now();
  std::size_t instances = 0, failures = 0;
  std::string message;
  for (const auto& suite : c.suites) {
    const Result r = suite(cfg);
    instances += r.instances;
    failures += r.failures;
    if (message.empty() && !r.message.empty()) message = r.name + ": " + r.message;
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool ok = failures == 0 && instances >= c.min_instances;
  std::string why;
  if (failures) why = std::to_string(failures) + " failing instance(s); first: " + message;
  if (instances < c.min_instances) why = "only " + std::to_string(instances) + " instances checked";
  if (c.seconds > 0 && elapsed >= c.seconds) {
    ok = false;
    why = "took " + std::to_string(elapsed) + " s, limit " + std::to_string(c.seconds) + " s";
  }
  std::printf("%s criterion %d: %s [%zu instances, %.3f s]%s%s\n", ok ? "PASS" : "FAIL", c.number, c.title.c_str(),
              instances, elapsed, why.empty() ? "" : " ", why.c_str());
  return ok;
}

}  // namespace

int main() {
  namespace s = lpi::suites;
  const std::vector<Criterion> criteria = {
      {1, "three-interval fixture: expectations, independence verdict and witness", {s::three_intervals}, 0, 2, 1.0},
      {2, "quarter fixture: verdicts for p in {1, 1.5, 2, 3}", {s::quarters}, 0, 4, 1.0},
      {3, "expectation and norm as integrals of slices", {s::slice_integrals}, 1000, 1000, 10.0},
      {4, "type distance: sorted coupling, sampled couplings, metric axioms, realizations",
       {s::type_distance}, 500, 500, 30.0},
      {5, "slices against the definition, monotonicity, sign decomposition", {s::slice_definition}, 1000, 1000, 0},
      {6, "conditional expectation characterization", {s::expectation}, 1000, 1000, 0},
      {7, "independence axioms and slice criterion", {s::independence_axioms}, 300, 300, 0},
      {8, "canonical bases: inclusion, certification, slice generation, minimality",
       {s::canonical_bases, s::canonical_base_minimality}, 300, 310, 0},
      {9, "Maharam selection hits rational targets", {s::maharam}, 300, 300, 0},
      {10, "invariance under density changes", {s::representation}, 100, 100, 0},
  };
  bool all = true;
  for (const auto& c : criteria) all = run(c) && all;
  std::printf("%s\n", all ? "all criteria pass" : "some criteria fail");
  return all ? 0 : 1;
}
