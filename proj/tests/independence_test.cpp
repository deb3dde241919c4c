#include <variant>

#include "doctest.h"
#include "lpi/error.hpp"
#include "lpi/independence.hpp"
#include "lpi/random_instance.hpp"
#include "lpi/tools/fixtures.hpp"

using namespace lpi;

namespace {

const ExpectationWitness& expectation_witness(const IndependenceVerdict& v) {
  REQUIRE(v.witness);
  REQUIRE(std::holds_alternative<ExpectationWitness>(*v.witness));
  return std::get<ExpectationWitness>(*v.witness);
}

std::vector<StepFunction> lifted(std::span<const StepFunction> fs, const Refinement& r) {
  std::vector<StepFunction> out;
  for (const auto& f : fs) out.push_back(lift(f, r));
  return out;
}

}  // namespace

TEST_CASE("three intervals: A is not independent from B over the constants") {
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    const auto t = fixtures::three_intervals(p);
    const IndependenceVerdict v = star_independent(t.a, t.b, t.c);
    CHECK_FALSE(v.independent);
    const auto& w = expectation_witness(v);
    CHECK(approx_equal(w.element, t.tail, 1e-12));
    CHECK(approx_equal(w.over_b, t.tail, 1e-12));
    CHECK(approx_equal(w.over_c, StepFunction::constant(t.space, 1.0 / 3.0), 1e-12));
    CHECK(norm(w.over_b - w.over_c) > 1e-9);
  }
}

TEST_CASE("quarters: pairwise independence without joint independence") {
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    const auto q = fixtures::quarters(p);
    const std::vector<StepFunction> a1{q.a1}, a2{q.a2}, a3{q.a3}, both{q.a1, q.a2}, none;
    CHECK(star_independent(a1, a3, none, q.space).independent == false);  // over {0} they are dependent
    const std::vector<StepFunction> one{StepFunction::constant(q.space, 1.0)};
    CHECK(star_independent(a1, a3, one, q.space).independent);
    CHECK(star_independent(a2, a3, one, q.space).independent);
    const IndependenceVerdict v = star_independent(both, a3, one, q.space);
    CHECK_FALSE(v.independent);
    CHECK(approx_equal(expectation_witness(v).element, q.q1));
  }
}

TEST_CASE("members of the base are independent from anything") {
  const auto t = fixtures::three_intervals(2.0);
  CHECK(star_independent(t.c, t.b, t.c).independent);
  CHECK(star_independent(t.c, t.a, t.c).independent);
}

TEST_CASE("restricted_star_check") {
  const auto t = fixtures::three_intervals(1.0);
  try {
    restricted_star_check(t.a, t.b, t.c);
    FAIL("expected PreconditionFailed");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::PreconditionFailed);
    CHECK(std::string(e.what()).find("intersect well") != std::string::npos);
  }
  CHECK(restricted_star_check(t.c, t.b, t.c));
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Instance in = random_instance(seed, 7);
    const Sublattice a = dcl(in.space, std::vector{in.functions[0]});
    for (const Sublattice* x : {&a, &in.d, &in.b}) {
      if (!intersects_well(*x, in.c)) continue;
      CHECK(restricted_star_check(*x, in.b, in.c) == star_independent(*x, in.b, in.c).independent);
    }
  }
}

TEST_CASE("product_check") {
  const auto q = fixtures::quarters(1.0);
  const Sublattice a = lattice_join(dcl(q.space, std::vector{q.a1}), q.c);
  const Sublattice b = lattice_join(dcl(q.space, std::vector{q.a3}), q.c);
  CHECK(product_check(a, b, q.c));
  const Sublattice pair = lattice_join(dcl(q.space, std::vector{q.a1, q.a2}), q.c);
  CHECK_FALSE(product_check(pair, b, q.c));
  CHECK(product_check(q.c, q.c, q.c));
  CHECK_THROWS_AS(product_check(a, b, Sublattice::from_partition(q.space, {{0, 1}, {2, 3}})), Error);
  CHECK(product_check(a, b, q.c) == star_independent(a, b, q.c).independent);
  CHECK(product_check(pair, b, q.c) == star_independent(pair, b, q.c).independent);
}

TEST_CASE("slice_independent") {
  const auto q = fixtures::quarters(2.0);
  const Sublattice b = lattice_join(dcl(q.space, std::vector{q.a3}), q.c);
  CHECK(slice_independent(q.a1, b, q.c).independent);
  CHECK(slice_independent(StepFunction::constant(q.space, 2.0), b, q.c).independent);
  const auto t = fixtures::three_intervals(1.0);
  const IndependenceVerdict v = slice_independent(t.tail, t.b, t.c);
  CHECK_FALSE(v.independent);
  REQUIRE(v.witness);
  const auto& w = std::get<SliceWitness>(*v.witness);
  CHECK(approx_equal(w.over_b, t.tail));
  CHECK_FALSE(contains(t.c, w.over_b));
  CHECK_THROWS_AS(slice_independent(t.tail, t.c, t.b), Error);
}

TEST_CASE("slice and star independence agree on single functions") {
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const Instance in = random_instance(seed, 8);
    for (const auto& f : in.functions) {
      const std::vector<StepFunction> fs{f};
      CHECK(slice_independent(f, in.b, in.c).independent == star_independent(fs, in.b, in.c).independent);
      CHECK(slice_independent(f, in.d, in.b).independent == star_independent(fs, in.d, in.b).independent);
    }
  }
}

TEST_CASE("nonforking extension") {
  const auto t = fixtures::three_intervals(1.0);
  const std::vector<StepFunction> fs{t.f};
  const Realization ext = nonforking_extension(fs, t.c, t.b);
  const Sublattice lc = lift(t.c, ext.refinement), lb = lift(t.b, ext.refinement);
  CHECK(ext.space().size() == 9);
  CHECK(tuple_type_equal(ext.functions, lifted(fs, ext.refinement), lc));
  CHECK(star_independent(ext.functions, lb, lc).independent);
  for (const auto& block : lb.blocks()) {
    // Each B-block carries the values of f in equal thirds.
    double level = 0.0;
    for (std::size_t i : block) level += ext.functions[0][i] == 2.0 ? ext.space().weight(i) : 0.0;
    CHECK(near(level, (block.size() == 3 ? 1.0 : 2.0) / 3.0));
  }

  const std::vector<StepFunction> member{t.c.generator(0)};
  const Realization same = nonforking_extension(member, t.c, t.b);
  CHECK(same.refinement.is_identity());
  CHECK(approx_equal(same.functions[0], member[0]));
  CHECK_THROWS_AS(nonforking_extension(fs, t.b, t.c), Error);

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Instance in = random_instance(seed, 6);
    const Realization e = nonforking_extension(in.functions, in.c, in.b);
    const Sublattice c2 = lift(in.c, e.refinement), b2 = lift(in.b, e.refinement);
    CHECK(tuple_type_equal(e.functions, lifted(in.functions, e.refinement), c2));
    CHECK(star_independent(e.functions, b2, c2).independent);
  }
}

TEST_CASE("stationarity") {
  const auto t = fixtures::three_intervals(1.0);
  const std::vector<StepFunction> fs{t.f};
  const StationarityResult self = stationarity_check(fs, fs, t.c, t.b);
  CHECK_FALSE(self.hypotheses_met);
  CHECK(self.holds);

  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const Instance in = random_instance(seed, 6);
    const Realization e1 = nonforking_extension(in.functions, in.c, in.b);
    std::vector<std::vector<double>> fr(in.space.size());
    for (auto& v : fr) v = {0.5, 0.25, 0.25};
    const Refinement pre = split_cells(in.space, fr);
    const Realization e2 =
        nonforking_extension(lifted(in.functions, pre), lift(in.c, pre), lift(in.b, pre));
    const Refinement r2 = pre.then(e2.refinement);
    const CommonRefinement common = common_refinement(e1.refinement, r2);
    const Refinement to1 = e1.refinement.then(common.from_first);
    const auto g1 = lifted(e1.functions, common.from_first);
    const auto g2 = lifted(e2.functions, common.from_second);
    const StationarityResult res = stationarity_check(g1, g2, lift(in.c, to1), lift(in.b, to1));
    CHECK(res.hypotheses_met);
    CHECK(res.holds);
  }
}

TEST_CASE("canonical base fixtures") {
  const auto q = fixtures::quarters(1.0);
  const Sublattice halves = Sublattice::from_partition(q.space, {{0, 1}, {2, 3}});
  const std::vector<StepFunction> f{q.q1};
  const CanonicalBase cb = canonical_base(f, halves);
  CHECK(cb.certified);
  CHECK(cb.base.approx_equal(Sublattice::from_partition(q.space, {{0, 1}})));

  const Sublattice b = lattice_join(dcl(q.space, std::vector{q.a3}), q.c);
  const std::vector<StepFunction> a1{q.a1};
  CHECK(canonical_base(a1, b).base.approx_equal(q.c));

  const auto t = fixtures::three_intervals(2.0);
  const Sublattice big = dcl(t.space, std::vector{t.f, t.tail});
  const std::vector<StepFunction> member{t.f};
  CHECK(canonical_base(member, big).base.approx_equal(dcl(t.space, member)));

  for (const auto& cs : fixtures::curated_base_cases()) {
    const CanonicalBase res = canonical_base(cs.fs, cs.a);
    CAPTURE(cs.name);
    CHECK(res.certified);
    CHECK(is_sublattice_of(res.base, cs.a));
    for (std::size_t drop = 0; drop < res.base.block_count(); ++drop) {
      std::vector<StepFunction> keep;
      for (std::size_t k = 0; k < res.base.block_count(); ++k)
        if (k != drop) keep.push_back(res.base.generator(k));
      CHECK_FALSE(star_independent(cs.fs, cs.a, dcl(cs.a.space(), keep)).independent);
    }
  }
}

TEST_CASE("independence axioms on random instances") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Instance in = random_instance(seed, 7);
    const Sublattice a = dcl(in.space, std::vector{in.functions[0], in.functions[1]});
    CHECK(star_independent(a, in.b, in.c).independent == star_independent(in.b, a, in.c).independent);
    CHECK(star_independent(a, in.d, in.c).independent ==
          (star_independent(a, in.b, in.c).independent && star_independent(a, in.d, in.b).independent));
    const bool all = star_independent(in.functions, in.b, in.c).independent;
    bool each = true;
    for (std::size_t mask = 1; mask < 8; ++mask) {
      std::vector<StepFunction> sub;
      for (std::size_t i = 0; i < 3; ++i)
        if (mask & (1u << i)) sub.push_back(in.functions[i]);
      each = each && star_independent(sub, in.b, in.c).independent;
    }
    CHECK(all == each);
  }
}
