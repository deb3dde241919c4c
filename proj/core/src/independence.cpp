#include "lpi/independence.hpp"

#include <algorithm>

#include "lpi/error.hpp"

namespace lpi {

namespace {

std::vector<double> piece_midpoints(std::vector<double> cuts, double tol) {
  cuts.push_back(0.0);
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> mids;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] - cuts[i] > tol) mids.push_back(0.5 * (cuts[i] + cuts[i + 1]));
  return mids;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::PreconditionFailed, what);
}

}  // namespace

IndependenceVerdict star_independent(const Sublattice& a, const Sublattice& b, const Sublattice& c, double tol) {
  require_same_space(a.space(), b.space(), "star_independent");
  require_same_space(a.space(), c.space(), "star_independent");
  const Sublattice a2 = lattice_join(a, c, tol);
  const Sublattice b2 = lattice_join(b, c, tol);
  IndependenceVerdict verdict;
  double worst = 0.0;
  for (std::size_t k = 0; k < a2.block_count(); ++k) {
    StepFunction e = a2.generator(k);
    StepFunction eb = cond_exp(e, b2);
    StepFunction ec = cond_exp(e, c);
    const double gap = norm(eb - ec);
    const double size = norm(e);
    if (gap <= tol * std::max(1.0, size)) continue;
    verdict.independent = false;
    if (gap / size > worst) {
      worst = gap / size;
      verdict.witness = ExpectationWitness{std::move(e), std::move(eb), std::move(ec)};
    }
  }
  return verdict;
}

IndependenceVerdict star_independent(std::span<const StepFunction> a, std::span<const StepFunction> b,
                                     std::span<const StepFunction> c, const Space& space, double tol) {
  return star_independent(dcl(space, a, tol), dcl(space, b, tol), dcl(space, c, tol), tol);
}

IndependenceVerdict star_independent(std::span<const StepFunction> fs, const Sublattice& b, const Sublattice& c,
                                     double tol) {
  return star_independent(dcl(c.space(), fs, tol), b, c, tol);
}

bool restricted_star_check(const Sublattice& a, const Sublattice& b, const Sublattice& c, double tol) {
  require_same_space(a.space(), b.space(), "restricted_star_check");
  require_same_space(a.space(), c.space(), "restricted_star_check");
  require(is_sublattice_of(c, b, tol), "C is not a sublattice of B");
  require(intersects_well(a, c, tol), "A and C do not intersect well");
  for (std::size_t k = 0; k < a.block_count(); ++k) {
    const StepFunction e = a.generator(k);
    if (norm(cond_exp(e, b) - cond_exp(e, c)) > tol * std::max(1.0, norm(e))) return false;
  }
  return true;
}

bool product_check(const Sublattice& a, const Sublattice& b, const Sublattice& c, double tol) {
  require_same_space(a.space(), b.space(), "product_check");
  require_same_space(a.space(), c.space(), "product_check");
  require(is_sublattice_of(c, a, tol), "C is not a sublattice of A");
  require(is_sublattice_of(c, b, tol), "C is not a sublattice of B");
  require(a.has_indicator_profile(tol) && b.has_indicator_profile(tol) && c.has_indicator_profile(tol),
          "product_check needs indicator profiles");
  for (std::size_t i = 0; i < a.space().size(); ++i)
    require((a.in_support(i) && b.in_support(i)) == c.in_support(i), "supp A & supp B differs from supp C");
  const Space& s = a.space();
  for (const auto& p0 : a.blocks())
    for (const auto& p1 : b.blocks()) {
      CellSet both;
      std::set_intersection(p0.begin(), p0.end(), p1.begin(), p1.end(), std::back_inserter(both));
      const StepFunction lhs = cond_exp(StepFunction::indicator(s, both), c);
      const StepFunction rhs =
          product(cond_exp(StepFunction::indicator(s, p0), c), cond_exp(StepFunction::indicator(s, p1), c));
      if (!approx_equal(lhs, rhs, tol)) return false;
    }
  return true;
}

IndependenceVerdict slice_independent(const StepFunction& f, const Sublattice& b, const Sublattice& c, double tol) {
  require(is_sublattice_of(c, b, tol), "C is not a sublattice of B");
  const SliceProfile over_b = slice_profile(f, b, tol);
  const SliceProfile over_c = slice_profile(f, c, tol);
  std::vector<double> cuts = over_b.breakpoints(tol);
  const auto more = over_c.breakpoints(tol);
  cuts.insert(cuts.end(), more.begin(), more.end());
  const double scale = std::max(1.0, norm(f));
  for (double r : piece_midpoints(std::move(cuts), tol)) {
    StepFunction sb = over_b.slice(r);
    StepFunction sc = over_c.slice(r);
    if (norm(sb - sc) > tol * scale)
      return IndependenceVerdict{false, SliceWitness{"f", r, std::move(sb), std::move(sc)}};
  }
  return {};
}

Realization nonforking_extension(std::span<const StepFunction> fs, const Sublattice& c, const Sublattice& b,
                                 double tol) {
  require(is_sublattice_of(c, b, tol), "C is not a sublattice of B");
  return realize_cond_distribution(cond_distribution(fs, c, tol), tol);
}

StationarityResult stationarity_check(std::span<const StepFunction> f1, std::span<const StepFunction> f2,
                                      const Sublattice& c, const Sublattice& b, double tol) {
  require(is_sublattice_of(c, b, tol), "C is not a sublattice of B");
  const bool met = tuple_type_equal(f1, f2, c, tol) && star_independent(f1, b, c, tol).independent &&
                   star_independent(f2, b, c, tol).independent;
  if (!met) return {false, true};
  return {true, tuple_type_equal(f1, f2, b, tol)};
}

std::vector<StepFunction> slice_values(const StepFunction& f, const Sublattice& a, double tol) {
  const SliceProfile profile = slice_profile(f, a, tol);
  std::vector<StepFunction> out;
  for (double r : piece_midpoints(profile.breakpoints(tol), tol)) out.push_back(profile.slice(r));
  return out;
}

CanonicalBase canonical_base(std::span<const StepFunction> fs, const Sublattice& a, double tol) {
  for (const auto& f : fs) require_same_space(f.space(), a.space(), "canonical_base");
  const Space& s = a.space();
  std::vector<StepFunction> gens;
  for (const auto& f : fs) {
    auto sv = slice_values(f, a, tol);
    gens.insert(gens.end(), sv.begin(), sv.end());
  }
  Sublattice base = dcl(s, gens, tol);
  std::size_t iterations = 1;
  if (fs.size() > 1) {
    const Sublattice tuple = dcl(s, fs, tol);
    const std::size_t guard = s.size() + 2;
    while (true) {
      if (iterations > guard) throw Error(Errc::NonTermination, "canonical base fixpoint did not stabilize");
      const Sublattice joined = lattice_join(tuple, base, tol);
      std::vector<StepFunction> next;
      for (std::size_t k = 0; k < joined.block_count(); ++k) {
        auto sv = slice_values(joined.generator(k), a, tol);
        next.insert(next.end(), sv.begin(), sv.end());
      }
      Sublattice grown = lattice_join(base, dcl(s, next, tol), tol);
      ++iterations;
      if (grown.approx_equal(base, tol)) break;
      base = std::move(grown);
    }
  }
  const bool certified = star_independent(fs, a, base, tol).independent;
  return CanonicalBase{std::move(base), certified, iterations};
}

}  // namespace lpi
