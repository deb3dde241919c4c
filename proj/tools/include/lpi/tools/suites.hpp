#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lpi/tolerance.hpp"
#include "lpi/tools/json_io.hpp"

namespace lpi::suites {

struct Config {
  std::uint64_t seed = 1;
  std::size_t size = 8;     ///< cell budget of random instances
  std::size_t trials = 100; ///< random instances per suite
  double tol = kDefaultTol; ///< tolerance handed to the library
};

struct Result {
  std::string name;
  std::size_t instances = 0;
  std::size_t failures = 0;
  std::string message;               ///< first failed check
  std::optional<io::Json> replay;    ///< scenario reproducing the first failure

  bool passed() const noexcept { return failures == 0 && instances > 0; }
};

/// Seed of the i-th random instance of a run.
std::uint64_t instance_seed(std::uint64_t base, std::size_t i);

// Fixture suites ignore `trials`; the rest draw `trials` random instances.
Result three_intervals(const Config& cfg);
Result quarters(const Config& cfg);
Result slice_integrals(const Config& cfg);
Result type_distance(const Config& cfg);
Result slice_definition(const Config& cfg);
Result expectation(const Config& cfg);
Result independence_axioms(const Config& cfg);
Result canonical_bases(const Config& cfg);
Result canonical_base_minimality(const Config& cfg);
Result maharam(const Config& cfg);
Result representation(const Config& cfg);
Result oracle_agreement(const Config& cfg);

std::vector<Result> run_all(const Config& cfg);
io::Json summary(const Config& cfg, const std::vector<Result>& results);

/// Scenario documents for the two worked fixtures.
io::Json three_intervals_scenario(double p);
io::Json quarters_scenario(double p);

}  // namespace lpi::suites
