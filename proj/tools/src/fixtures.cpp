#include "lpi/tools/fixtures.hpp"

namespace lpi::fixtures {

ThreeIntervals three_intervals(double p) {
  Space s = Space::make({{"[0,1]", 1.0}, {"(1,2]", 1.0}, {"(2,3]", 1.0}}, p);
  StepFunction f(s, {2.0, 0.0, 1.0});
  StepFunction tail(s, {0.0, 0.0, 1.0});
  Sublattice a = dcl(s, std::vector{f});
  Sublattice b = Sublattice::from_partition(s, {{0, 1}, {2}});
  Sublattice c = Sublattice::from_partition(s, {{0, 1, 2}});
  return {s, f, tail, a, b, c};
}

Quarters quarters(double p) {
  Space s = Space::make({{"q1", 0.25}, {"q2", 0.25}, {"q3", 0.25}, {"q4", 0.25}}, p);
  return {s,
          StepFunction(s, {1, 0, 1, 0}),
          StepFunction(s, {1, 0, 0, 1}),
          StepFunction(s, {1, 1, 0, 0}),
          StepFunction(s, {1, 0, 0, 0}),
          Sublattice::from_partition(s, {{0, 1, 2, 3}})};
}

std::vector<BaseCase> curated_base_cases() {
  std::vector<BaseCase> out;
  const Quarters q = quarters(1.0);
  const Sublattice halves = Sublattice::from_partition(q.space, {{0, 1}, {2, 3}});
  out.push_back({"quarter over halves", {q.q1}, halves});
  out.push_back({"a1 over dcl(a3, C)", {q.a1}, lattice_join(dcl(q.space, std::vector{q.a3}), q.c)});
  out.push_back({"a1 a2 over dcl(a3, C)", {q.a1, q.a2}, lattice_join(dcl(q.space, std::vector{q.a3}), q.c)});

  const ThreeIntervals t = three_intervals(2.0);
  out.push_back({"f over halves", {t.f}, t.b});
  out.push_back({"tail over halves", {t.tail}, t.b});

  {
    Space s = Space::make({{"x", 1.0}, {"y", 1.0}, {"z", 2.0}, {"u", 0.5}, {"v", 0.5}}, 1.5);
    Sublattice a = Sublattice::from_partition(s, {{0, 1}, {2}, {3, 4}});
    out.push_back({"three blocks", {StepFunction(s, {3, 1, 2, -1, 0})}, a});
    out.push_back({"pair over three blocks", {StepFunction(s, {1, 0, 1, 0, 2}), StepFunction(s, {0, 1, 1, 2, 2})}, a});
  }
  {
    Space s = Space::make({{"x", 1.0}, {"y", 2.0}, {"z", 1.0}, {"w", 1.0}}, 2.0);
    const double prof[] = {1.0, 0.5, 1.0, 2.0};
    Sublattice a = Sublattice::from_blocks(s, {{0, 1}, {2, 3}}, prof);
    out.push_back({"profiled blocks", {StepFunction(s, {2, -1, 0, 4})}, a});
    out.push_back({"profiled pair", {StepFunction(s, {2, 0, 1, 0}), StepFunction(s, {0, 1, 1, 2})}, a});
  }
  {
    Space s = Space::make({{"m", 1.0}, {"n", 1.0}, {"o", 1.0}, {"r", 1.0}, {"t", 1.0}, {"e", 1.0}}, 3.0);
    Sublattice a = Sublattice::from_partition(s, {{0, 1, 2}, {3, 4, 5}});
    out.push_back({"signed thirds", {StepFunction(s, {1, -1, 0, 2, 2, -3})}, a});
  }
  return out;
}

}  // namespace lpi::fixtures
