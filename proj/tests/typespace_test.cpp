#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "lpi/error.hpp"
#include "lpi/oracles.hpp"
#include "lpi/random_instance.hpp"
#include "lpi/realization.hpp"
#include "lpi/typespace.hpp"
#include "lpi/tools/fixtures.hpp"

using namespace lpi;

namespace {

Space unit_cells(std::size_t n, double p) {
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < n; ++i) cells.push_back({"x" + std::to_string(i), 1.0});
  return Space::make(cells, p);
}

Sublattice one_block(const Space& s) {
  CellSet all(s.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return Sublattice::from_partition(s, {all});
}

// r in (0,1) at least 1e-6 away from every breakpoint of the profile.
double sample_r(Rng& rng, const SliceProfile& profile) {
  const auto cuts = profile.breakpoints();
  while (true) {
    const double r = 0.001 + 0.998 * rng.uniform01();
    if (std::all_of(cuts.begin(), cuts.end(), [&](double b) { return std::abs(b - r) > 1e-6; })) return r;
  }
}

}  // namespace

TEST_CASE("cond_probability") {
  Space s = unit_cells(4, 1.0);
  Sublattice c = one_block(s);
  CHECK(approx_equal(cond_probability({0, 1, 2, 3}, c), c.generator(0)));
  CHECK(cond_probability({}, c).is_zero());
  CHECK(approx_equal(cond_probability({1, 3}, c), StepFunction::constant(s, 0.5)));
}

TEST_CASE("slices of the descending fixture") {
  Space s = unit_cells(4, 1.0);
  Sublattice c = one_block(s);
  StepFunction f(s, {4, 3, 2, 1});
  CHECK(approx_equal(slice(f, c, 0.3), StepFunction::constant(s, 3.0)));
  const SliceProfile prof = slice_profile(f, c);
  REQUIRE(prof.blocks.size() == 1);
  REQUIRE(prof.blocks[0].segments.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(prof.blocks[0].segments[k].length == doctest::Approx(0.25));
    CHECK(prof.blocks[0].segments[k].value == doctest::Approx(4.0 - static_cast<double>(k)));
  }
  // Right-continuity at a breakpoint.
  CHECK(approx_equal(slice(f, c, 0.25), StepFunction::constant(s, 3.0)));
  for (double r : {0.1, 0.3, 0.5, 0.9})
    CHECK(approx_equal(slice(f, c, r), oracles::slice_by_definition(f, c, r)));
  CHECK_THROWS_AS(slice(f, c, 0.0), Error);
  CHECK_THROWS_AS(slice(f, c, 1.0), Error);
}

TEST_CASE("slices of members and of signed functions") {
  Space s = Space::make({{"a", 0.5}, {"b", 0.5}}, 2.0);
  Sublattice c = one_block(s);
  StepFunction h(s, {2, -3});
  CHECK(approx_equal(slice(h, c, 0.25), StepFunction::constant(s, 2.0)));
  CHECK(approx_equal(slice(h, c, 0.75), StepFunction::constant(s, -3.0)));
  CHECK(approx_equal(oracles::slice_by_definition(h, c, 0.75), StepFunction::constant(s, -3.0)));
  const SliceProfile prof = slice_profile(h, c);
  REQUIRE(prof.blocks[0].segments.size() == 2);
  CHECK(prof.blocks[0].segments[1].value == -3.0);
  CHECK(slice_profile(StepFunction(s), c).blocks[0].segments.size() == 1);

  const double w[] = {1.0, 0.5};
  Sublattice d = Sublattice::from_blocks(s, {{0, 1}}, w);
  StepFunction m = 3.0 * d.generator(0);
  for (double r : {0.1, 0.5, 0.99}) CHECK(approx_equal(slice(m, d, r), m));
}

TEST_CASE("type_datum") {
  const auto t = fixtures::three_intervals(2.0);
  TypeDatum in = type_datum(t.f, t.a);
  CHECK(in.orth_pos == 0.0);
  CHECK(in.profile.blocks[0].segments.size() == 1);
  StepFunction g(t.space, {0, -2, 0});
  TypeDatum orth = type_datum(g, t.a);
  CHECK(orth.orth_neg == doctest::Approx(2.0));
  CHECK(orth.profile.blocks[0].segments[0].value == 0.0);
}

TEST_CASE("conditional distributions and tuple types") {
  const auto q = fixtures::quarters(1.0);
  const std::vector<StepFunction> a1{q.a1};
  ConditionalDistribution d = cond_distribution(a1, q.c);
  REQUIRE(d.blocks.size() == 1);
  REQUIRE(d.blocks[0].size() == 2);
  CHECK(d.blocks[0][0].value[0] == 1.0);
  CHECK(d.blocks[0][0].mass == doctest::Approx(0.5));
  CHECK(d.blocks[0][1].mass == doctest::Approx(0.5));

  const std::vector<StepFunction> pair{q.a1, q.a1};
  const ConditionalDistribution diag = cond_distribution(pair, q.c);
  for (const auto& atom : diag.blocks[0]) CHECK(atom.value[0] == atom.value[1]);

  Space s = unit_cells(3, 1.0);
  Sublattice c = one_block(s);
  const std::vector<StepFunction> f{StepFunction(s, {2, 0, 1})}, g{StepFunction(s, {1, 0, 2})};
  CHECK(tuple_type_equal(f, g, c));
  CHECK(tuple_type_equal(f, f, c));
  const std::vector<StepFunction> two{f[0], g[0]};
  CHECK_THROWS_AS(tuple_type_equal(f, two, c), Error);

  const auto t = fixtures::three_intervals(1.0);
  const std::vector<StepFunction> tf{t.f}, swapped{StepFunction(t.space, {1, 0, 2})};
  CHECK(tuple_type_equal(tf, swapped, t.c));
  CHECK_FALSE(tuple_type_equal(tf, swapped, t.b));
}

TEST_CASE("distance fixtures") {
  Space s = unit_cells(4, 1.0);
  Sublattice c = one_block(s);
  TypeDatum tf = type_datum(StepFunction(s, {4, 3, 2, 1}), c);
  TypeDatum tg = type_datum(StepFunction::constant(s, 1.0), c);
  CHECK(distance(tf, tf) == 0.0);
  CHECK(distance(tf, tg) == doctest::Approx(6.0));
  CHECK(oracles::coupling_upper_bounds(tf, tg, 200, 1) == doctest::Approx(6.0));

  for (double p : {1.0, 2.0, 3.0}) {
    Space e = Space::make({{"a", 1.0}, {"b", 1.0}}, p);
    Sublattice zero = Sublattice::trivial(e);
    TypeDatum x = type_datum(StepFunction(e, {2, -1}), zero);
    TypeDatum y = type_datum(StepFunction(e, {5, -3}), zero);
    CHECK(distance(x, y) == doctest::Approx(std::pow(std::pow(3.0, p) + std::pow(2.0, p), 1.0 / p)));
    CHECK(oracles::coupling_upper_bounds(x, y, 50, 2) == doctest::Approx(distance(x, y)));
  }
  CHECK_THROWS_AS(distance(tf, type_datum(StepFunction(s), Sublattice::trivial(s))), Error);
}

TEST_CASE("slice formula agrees with the literal definition") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Instance in = random_instance(seed, 8);
    Rng rng(seed * 7 + 1);
    for (const Sublattice* c : {&in.b, &in.c, &in.d})
      for (const auto& f : in.functions) {
        const SliceProfile prof = slice_profile(f, *c);
        for (int k = 0; k < 5; ++k) {
          const double r = sample_r(rng, prof);
          CHECK(approx_equal(prof.slice(r), oracles::slice_by_definition(f, *c, r)));
        }
        CHECK(approx_equal(slice(f, *c, 0.5), slice(band_decompose(f, *c).band, *c, 0.5)));
      }
  }
}

TEST_CASE("slice integrals reproduce expectation and norm") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Instance in = random_instance(seed, 8);
    for (const Sublattice* c : {&in.b, &in.c, &in.d})
      for (const auto& f : in.functions) {
        const SliceProfile prof = slice_profile(f, *c);
        CHECK(norm(cond_exp(f, *c) - integrate_slices(prof)) <= 1e-9);
        const TypeDatum t = type_datum(f, *c);
        const double p = in.space.p();
        CHECK(near(norm_pow(f), integrate_slice_norm_pow(prof) + std::pow(t.orth_pos, p) + std::pow(t.orth_neg, p)));
      }
  }
}

TEST_CASE("distance equals the sorted coupling and the canonical realizations") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const Instance in = random_instance(seed, 6);
    const Sublattice& c = in.c;
    const TypeDatum t1 = type_datum(in.functions[0], c), t2 = type_datum(in.functions[1], c);
    const double d = distance(t1, t2);
    const Realization pair = canonical_realization_pair(t1, t2);
    CHECK(near(d, norm(pair.functions[0] - pair.functions[1])));
    CHECK(d <= oracles::coupling_upper_bounds(t1, t2, 20, seed) + 1e-9);
    CHECK(near(d, distance(t2, t1)));
    // Each realization has the right type over the lifted sublattice.
    const Sublattice lc = lift(c, pair.refinement);
    CHECK(type_datum(pair.functions[0], lc).approx_equal(t1));
    CHECK(type_datum(pair.functions[1], lc).approx_equal(t2));
  }
}

TEST_CASE("canonical realization") {
  Space s = unit_cells(4, 1.0);
  Sublattice c = one_block(s);
  StepFunction f(s, {4, 3, 2, 1});
  const TypeDatum t = type_datum(f, c);
  const Realization r = canonical_realization(t);
  CHECK(r.space().size() == 16);
  CHECK(r.functions[0][0] == 4.0);
  CHECK(r.functions[0][3] == 1.0);
  const Sublattice lc = lift(c, r.refinement);
  CHECK(type_datum(r.functions[0], lc).approx_equal(t));
  // Idempotence: realizing again splits nothing new in value.
  const Realization again = canonical_realization(type_datum(r.functions[0], lc));
  CHECK(type_datum(again.functions[0], lift(lc, again.refinement)).approx_equal(t));

  StepFunction m = 2.0 * c.generator(0);
  const Realization same = canonical_realization(type_datum(m, c));
  CHECK(same.refinement.is_identity());
  CHECK(approx_equal(same.functions[0], m));

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Instance in = random_instance(seed, 6);
    for (const auto& g : in.functions) {
      const TypeDatum tg = type_datum(g, in.b);
      const Realization rg = canonical_realization(tg);
      const Sublattice lb = lift(in.b, rg.refinement);
      CHECK(type_datum(rg.functions[0], lb).approx_equal(tg));
      // Decreasing along the children of every support cell.
      for (std::size_t i = 0; i < in.space.size(); ++i) {
        const auto& ch = rg.refinement.children(i);
        for (std::size_t k = 1; k < ch.size(); ++k) CHECK(rg.functions[0][ch[k - 1]] >= rg.functions[0][ch[k]]);
      }
    }
  }
}

TEST_CASE("maharam_select") {
  Space s = unit_cells(2, 1.0);
  Sublattice c = one_block(s);
  const CellSelection sel = maharam_select({0}, c, StepFunction::constant(s, 1.0 / 3.0));
  CHECK(sel.cells.size() == 1);
  CHECK(sel.space().id(sel.cells[0]) == "x0#0");
  const StepFunction e = cond_exp(StepFunction::indicator(sel.space(), sel.cells), lift(c, sel.refinement));
  CHECK(approx_equal(e, StepFunction::constant(sel.space(), 1.0 / 3.0), 1e-12));

  const CellSelection whole = maharam_select({0}, c, StepFunction::constant(s, 0.5));
  CHECK(whole.refinement.is_identity());
  CHECK(whole.cells == CellSet{0});
  CHECK(maharam_select({0}, c, StepFunction(s)).cells.empty());
  CHECK_THROWS_AS(maharam_select({0}, c, StepFunction::constant(s, 0.75)), Error);
  CHECK_THROWS_AS(maharam_select({0}, c, StepFunction(s, {0.1, 0.2})), Error);
}

TEST_CASE("realize_cond_distribution") {
  Space s = Space::make({{"a", 2.0}}, 1.0);
  Sublattice c = one_block(s);
  ConditionalDistribution d{c, 1, {{{{4.0}, 1.0}, {{1.0}, 1.0}}}, {}};
  const Realization r = realize_cond_distribution(d);
  REQUIRE(r.space().size() == 2);
  CHECK(r.functions[0][0] == 4.0);
  CHECK(r.functions[0][1] == 1.0);
  CHECK(cond_distribution(r.functions, lift(c, r.refinement)).approx_equal(d));

  ConditionalDistribution point{c, 1, {{{{3.0}, 2.0}}}, {}};
  CHECK(realize_cond_distribution(point).refinement.is_identity());

  ConditionalDistribution negative{c, 1, {{{{4.0}, 3.0}, {{1.0}, -1.0}}}, {}};
  CHECK_THROWS_AS(realize_cond_distribution(negative), Error);
  ConditionalDistribution short_mass{c, 1, {{{{4.0}, 1.0}}}, {}};
  CHECK_THROWS_AS(realize_cond_distribution(short_mass), Error);

  const auto q = fixtures::quarters(2.0);
  const std::vector<StepFunction> a1{q.a1};
  Space fresh = Space::make({{"l", 0.5}, {"r", 0.5}}, 2.0);
  ConditionalDistribution law = cond_distribution(a1, q.c);
  law.sublattice = one_block(fresh);
  const Realization ra = realize_cond_distribution(law);
  CHECK(cond_distribution(ra.functions, lift(law.sublattice, ra.refinement)).approx_equal(
      ConditionalDistribution{lift(law.sublattice, ra.refinement), 1, law.blocks, {}}));

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Instance in = random_instance(seed, 6);
    const ConditionalDistribution law2 = cond_distribution(in.functions, in.c);
    const Realization rr = realize_cond_distribution(law2);
    const Sublattice lc = lift(in.c, rr.refinement);
    std::vector<StepFunction> lifted;
    for (const auto& f : in.functions) lifted.push_back(lift(f, rr.refinement));
    CHECK(tuple_type_equal(rr.functions, lifted, lc));
  }
}

TEST_CASE("types are invariant under lift and density change") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Instance in = random_instance(seed, 6);
    Rng rng(seed + 99);
    std::vector<double> dv(in.space.size());
    for (double& x : dv) x = 0.5 + 1.5 * rng.uniform01();
    DensityChange dc(StepFunction(in.space, dv));
    const Sublattice c2 = transport(in.b, dc);
    const TypeDatum t0 = type_datum(in.functions[0], in.b), t1 = type_datum(in.functions[1], in.b);
    const TypeDatum n0 = type_datum(dc.to_new(in.functions[0]), c2), n1 = type_datum(dc.to_new(in.functions[1]), c2);
    CHECK(near(distance(t0, t1), distance(n0, n1)));
    CHECK(near(t0.orth_pos, n0.orth_pos));
    std::vector<std::vector<double>> fr(in.space.size());
    for (auto& v : fr)
      if (rng.chance(0.5)) v = {0.5, 0.5};
    Refinement r = split_cells(in.space, fr);
    const TypeDatum l0 = type_datum(lift(in.functions[0], r), lift(in.b, r));
    CHECK(near(distance(l0, type_datum(lift(in.functions[1], r), lift(in.b, r))), distance(t0, t1)));
  }
}

TEST_CASE("orthogonal laws are taken on directions") {
  const Space s = unit_cells(2, 1.5);
  const Sublattice none = Sublattice::trivial(s);
  const std::vector<StepFunction> f{StepFunction(s, {0, -2})}, g{StepFunction(s, {-2, 0})};
  CHECK(tuple_type_equal(f, g, none));
  DensityChange dc(StepFunction(s, {0.5, 2.0}));
  const Sublattice moved = transport(none, dc);
  const std::vector<StepFunction> nf{dc.to_new(f[0])}, ng{dc.to_new(g[0])};
  CHECK(tuple_type_equal(nf, ng, moved));

  const ConditionalDistribution d = cond_distribution(nf, moved);
  REQUIRE(d.orth.size() == 1);
  CHECK(d.orth[0].value[0] == doctest::Approx(-1.0));
  CHECK(d.orth[0].mass == doctest::Approx(std::pow(2.0, 1.5)));

  const Space wide = unit_cells(3, 2.0);
  const Sublattice trivial = Sublattice::trivial(wide);
  const std::vector<StepFunction> h{StepFunction(wide, {1, 2, 0})};
  const std::vector<StepFunction> k{StepFunction(wide, {0, 0, std::sqrt(5.0)})};
  CHECK(tuple_type_equal(h, k, trivial));
  const std::vector<StepFunction> hh{h[0], StepFunction(wide, {1, 0, 0})};
  const std::vector<StepFunction> kk{k[0], StepFunction(wide, {0, 0, 1})};
  CHECK_FALSE(tuple_type_equal(hh, kk, trivial));
  const Realization r = realize_cond_distribution(cond_distribution(h, trivial));
  CHECK(cond_distribution(r.functions, lift(trivial, r.refinement)).approx_equal(cond_distribution(h, trivial)));
}
