#include "doctest.h"
#include "lpi/error.hpp"
#include "lpi/oracles.hpp"
#include "lpi/random_instance.hpp"
#include "lpi/sublattice.hpp"
#include "lpi/tools/fixtures.hpp"

using namespace lpi;

namespace {

Space unit_cells(std::size_t n, double p) {
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < n; ++i) cells.push_back({"x" + std::to_string(i), 1.0});
  return Space::make(cells, p);
}

std::vector<StepFunction> random_generators(Rng& rng, const Space& s, std::size_t count) {
  std::vector<StepFunction> out;
  for (std::size_t g = 0; g < count; ++g) {
    std::vector<double> v(s.size());
    for (double& x : v) x = rng.chance(0.35) ? 0.0 : random_value(rng, true);
    out.emplace_back(s, v);
  }
  return out;
}

}  // namespace

TEST_CASE("dcl of a single function is its ray") {
  const auto t = fixtures::three_intervals(1.0);
  REQUIRE(t.a.block_count() == 1);
  CHECK(t.a.block(0) == CellSet{0, 2});
  CHECK(t.a.profile(0) == 1.0);
  CHECK(t.a.profile(2) == 0.5);
}

TEST_CASE("dcl of f and the constants separates every cell") {
  const auto t = fixtures::three_intervals(1.0);
  const Sublattice j = dcl(t.space, std::vector{t.f, StepFunction::constant(t.space, 1.0)});
  CHECK(j.block_count() == 3);
  CHECK(j.has_indicator_profile());
  CHECK(contains(j, t.tail));
  CHECK(dcl(t.space, std::vector<StepFunction>{}).block_count() == 0);
}

TEST_CASE("contains") {
  const auto t = fixtures::three_intervals(2.0);
  auto coef = contains(t.b, t.b.generator(1));
  REQUIRE(coef);
  CHECK((*coef)[0] == 0.0);
  CHECK((*coef)[1] == 1.0);
  CHECK_FALSE(contains(t.c, t.tail));
  CHECK_FALSE(contains(t.a, t.tail));
}

TEST_CASE("is_sublattice_of") {
  Space s = unit_cells(4, 1.0);
  Sublattice constants = Sublattice::from_partition(s, {{0, 1, 2, 3}});
  Sublattice halves = Sublattice::from_partition(s, {{0, 1}, {2, 3}});
  CHECK(is_sublattice_of(constants, halves));
  CHECK_FALSE(is_sublattice_of(halves, constants));
  CHECK(is_sublattice_of(halves, halves));
}

TEST_CASE("band_decompose") {
  const auto t = fixtures::three_intervals(1.0);
  StepFunction g(t.space, {0, 5, 0});
  BandParts parts = band_decompose(g, t.a);
  CHECK(parts.band.is_zero());
  CHECK(approx_equal(parts.orth, g));
  parts = band_decompose(t.f, t.a);
  CHECK(parts.orth.is_zero());
}

TEST_CASE("conditional expectation fixtures") {
  for (double p : {1.0, 2.0}) {
    const auto t = fixtures::three_intervals(p);
    CHECK(approx_equal(cond_exp(t.f, t.c), StepFunction::constant(t.space, 1.0), 1e-12));
    CHECK(approx_equal(cond_exp(t.f, t.b), StepFunction::constant(t.space, 1.0), 1e-12));
    CHECK(approx_equal(cond_exp(t.tail, t.b), t.tail, 1e-12));
    CHECK(approx_equal(cond_exp(t.tail, t.c), StepFunction::constant(t.space, 1.0 / 3.0), 1e-12));
  }
  Space s = unit_cells(2, 1.0);
  const double w[] = {2.0, 1.0};
  Sublattice c = Sublattice::from_blocks(s, {{0, 1}}, w);
  CHECK(approx_equal(cond_exp(StepFunction(s, {1, 0}), c), StepFunction(s, {2.0 / 3.0, 1.0 / 3.0})));
}

TEST_CASE("lattice_intersection and join fixtures") {
  const auto t = fixtures::three_intervals(1.0);
  CHECK(lattice_intersection(t.a, t.c).block_count() == 0);
  CHECK(lattice_intersection(t.a, t.a).approx_equal(t.a));
  Sublattice left = Sublattice::from_partition(t.space, {{0}});
  Sublattice right = Sublattice::from_partition(t.space, {{1, 2}});
  CHECK(lattice_intersection(left, right).block_count() == 0);
  CHECK(lattice_join(t.a, t.c).block_count() == 3);
  CHECK(lattice_join(t.c, t.c).approx_equal(t.c));
  CHECK(lattice_join(t.c, Sublattice::trivial(t.space)).approx_equal(t.c));
  CHECK_FALSE(intersects_well(t.a, t.c));
  CHECK(intersects_well(t.b, t.c));
  CHECK(intersects_well(left, right));
}

TEST_CASE("dcl agrees with the closure oracle") {
  Rng rng(101);
  for (int trial = 0; trial < 400; ++trial) {
    const double p = trial % 2 ? 1.0 : 2.5;
    Space s = unit_cells(2 + rng.uniform_int(5), p);
    const auto gens = random_generators(rng, s, rng.uniform_int(4));
    const Sublattice fast = dcl(s, gens);
    const Sublattice brute = oracles::brute_dcl_closure(s, gens);
    CHECK(fast.approx_equal(brute, 1e-9));
  }
}

TEST_CASE("lattice_intersection agrees with the constraint-solve oracle") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Instance in = random_instance(seed, 7);
    Rng rng(seed);
    const Sublattice x = dcl(in.space, random_generators(rng, in.space, 1 + rng.uniform_int(3)));
    for (const Sublattice* y : {&in.b, &in.c, &in.d}) {
      CHECK(lattice_intersection(x, *y).approx_equal(oracles::brute_intersection(x, *y), 1e-8));
      CHECK(lattice_intersection(in.d, *y).approx_equal(*y, 1e-9));
    }
  }
}

TEST_CASE("members are closed under the lattice operations") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Instance in = random_instance(seed, 8);
    Rng rng(seed + 1000);
    std::vector<double> a(in.d.block_count()), b(in.d.block_count());
    for (double& x : a) x = random_value(rng, false);
    for (double& x : b) x = random_value(rng, false);
    const StepFunction f = member(in.d, a), g = member(in.d, b);
    CHECK(contains(in.d, meet(f, g)));
    CHECK(contains(in.d, join(f, g)));
    CHECK(contains(in.d, f + 2.0 * g));
  }
}

TEST_CASE("cond_exp characterization on random instances") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Instance in = random_instance(seed, 8);
    for (const Sublattice* c : {&in.b, &in.c, &in.d})
      for (const auto& f : in.functions) {
        const StepFunction e = cond_exp(f, *c);
        CHECK(contains(*c, e));
        CHECK(approx_equal(cond_exp(e, *c), e));
        CHECK(norm(e) <= norm(f) + 1e-9);
        CHECK(cond_exp(band_decompose(f, *c).orth, *c).is_zero());
        const StepFunction pos = cond_exp(abs(f), *c);
        for (double v : pos.values()) CHECK(v >= -1e-12);
        // Defining property in the nu-presentation.
        for (std::size_t k = 0; k < c->block_count(); ++k) {
          double lhs = 0.0, rhs = 0.0;
          for (std::size_t i : c->block(k)) {
            lhs += c->nu(i) * e[i] / c->profile(i);
            rhs += c->nu(i) * f[i] / c->profile(i);
          }
          CHECK(near(lhs, rhs));
        }
      }
  }
}

TEST_CASE("lift and density change transport sublattice operations") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Instance in = random_instance(seed, 6);
    Rng rng(seed + 5);
    std::vector<double> d(in.space.size());
    for (double& x : d) x = 0.5 + 1.5 * rng.uniform01();
    DensityChange dc(StepFunction(in.space, d));
    const Sublattice c2 = transport(in.c, dc);
    for (const auto& f : in.functions) {
      CHECK(approx_equal(dc.to_old(cond_exp(dc.to_new(f), c2)), cond_exp(f, in.c), 1e-9));
    }
    CHECK(transport(lattice_join(in.b, in.c), dc).approx_equal(lattice_join(transport(in.b, dc), c2)));
    CHECK(transport(dcl(in.space, in.functions), dc)
              .approx_equal(dcl(dc.new_space(), std::vector{dc.to_new(in.functions[0]), dc.to_new(in.functions[1]),
                                                            dc.to_new(in.functions[2])})));

    std::vector<std::vector<double>> fr(in.space.size());
    for (auto& v : fr)
      if (rng.chance(0.5)) v = {0.3, 0.7};
    Refinement r = split_cells(in.space, fr);
    const Sublattice lc = lift(in.c, r);
    CHECK(lc.block_count() == in.c.block_count());
    for (const auto& f : in.functions) CHECK(approx_equal(cond_exp(lift(f, r), lc), lift(cond_exp(f, in.c), r)));
  }
}

TEST_CASE("validation of explicit blocks") {
  Space s = unit_cells(3, 1.0);
  const double prof[] = {1.0, 1.0, 1.0};
  CHECK_THROWS_AS(Sublattice::from_blocks(s, {{0, 1}, {1}}, prof), Error);
  CHECK_THROWS_AS(Sublattice::from_blocks(s, {{}}, prof), Error);
  const double zero[] = {0.0, 1.0, 1.0};
  CHECK_THROWS_AS(Sublattice::from_blocks(s, {{0}}, zero), Error);
}

TEST_CASE("canonical form normalizes profiles and orders blocks") {
  Space s = unit_cells(3, 1.0);
  const double prof[] = {4.0, 2.0, 3.0};
  Sublattice c = Sublattice::from_blocks(s, {{2}, {1, 0}}, prof);
  CHECK(c.block(0) == CellSet{0, 1});
  CHECK(c.profile(0) == 1.0);
  CHECK(c.profile(1) == 0.5);
  CHECK(c.profile(2) == 1.0);
}
