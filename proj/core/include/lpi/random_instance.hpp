#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lpi/step_function.hpp"
#include "lpi/sublattice.hpp"

namespace lpi {

/// Seeded generator with a fixed algorithm so instances replay across builds:
///   next()         = std::mt19937_64(seed) output
///   uniform01()    = (next() >> 11) * 2^-53
///   uniform_int(n) = next() % n
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  std::size_t uniform_int(std::size_t n) { return static_cast<std::size_t>(next() % n); }
  bool chance(double prob) { return uniform01() < prob; }

 private:
  std::mt19937_64 engine_;
};

/// A space, a chain C <= B <= D of sublattices and a few functions.
struct Instance {
  Space space;
  Sublattice d;
  Sublattice b;
  Sublattice c;
  std::vector<StepFunction> functions;
};

/// Draw order (all from one Rng):
///   cells n = 2 + uniform_int(max(size,2) - 1), ids "c0".."c{n-1}"
///   dyadic = chance(0.5); weight per cell = dyadic ? {0.25,0.5,1,2}[uniform_int(4)] : 0.1 + 1.9 u
///   p = {1, 1.5, 2, 3}[uniform_int(4)]
///   D: each cell in its support with chance 0.85 (first cell forced if none),
///      block label uniform_int(1 + uniform_int(#support)) per support cell,
///      indicator profile with chance 0.5 else 0.25 + 1.75 u per cell
///   B from D, then C from B: each block kept with chance 0.8, kept blocks
///      grouped by uniform_int(#kept), per-block scale 1 (indicator) or 0.5 + 1.5 u
///   3 functions: kind uniform_int(4) = general / member of C / orthogonal to C /
///      band of D; values dyadic ? (uniform_int(9) - 4) / 2 : -2 + 4 u, zeroed with chance 0.2
Instance random_instance(std::uint64_t seed, std::size_t size);

/// Draws one value with the instance generator's value law.
double random_value(Rng& rng, bool dyadic);

}  // namespace lpi
