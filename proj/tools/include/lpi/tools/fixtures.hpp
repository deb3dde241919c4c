#pragma once

#include <string>
#include <vector>

#include "lpi/space.hpp"
#include "lpi/step_function.hpp"
#include "lpi/sublattice.hpp"

namespace lpi::fixtures {

/// [0,1], (1,2], (2,3] with Lebesgue weights. f = 2 chi[0,1] + chi(2,3].
/// A = multiples of f, B = constant on [0,2] and (2,3], C = constants.
struct ThreeIntervals {
  Space space;
  StepFunction f;
  StepFunction tail;  ///< chi(2,3]
  Sublattice a;
  Sublattice b;
  Sublattice c;
};
ThreeIntervals three_intervals(double p);

/// Quarters of [0,1]; a1 = chi(q1 + q3), a2 = chi(q1 + q4), a3 = chi(q1 + q2),
/// C = constants.
struct Quarters {
  Space space;
  StepFunction a1;
  StepFunction a2;
  StepFunction a3;
  StepFunction q1;
  Sublattice c;
};
Quarters quarters(double p);

/// Small hand-built canonical-base instances.
struct BaseCase {
  std::string name;
  std::vector<StepFunction> fs;
  Sublattice a;
};
std::vector<BaseCase> curated_base_cases();

}  // namespace lpi::fixtures
