#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lpi/step_function.hpp"
#include "lpi/sublattice.hpp"
#include "lpi/typespace.hpp"

// Brute-force reference implementations. Slow by design; used by tests and the
// verify suites, never by the library itself.
namespace lpi::oracles {

inline constexpr std::size_t kMaxCells = 8;
inline constexpr std::size_t kMaxGenerators = 4;

/// Closes the span of the generators under positive parts of pairwise
/// differences until the dimension stabilizes, then reads the blocks off the
/// reduced row echelon basis. Throws GuardExceeded beyond 8 cells or 4 generators.
Sublattice brute_dcl_closure(const Space& space, std::span<const StepFunction> generators,
                             double tol = kDefaultTol);

/// A & C by solving the linear constraint system for the common span.
Sublattice brute_intersection(const Sublattice& a, const Sublattice& c, double tol = kDefaultTol);

/// S_r(f/C) by maximizing the coefficient over candidate values, f+ and f- separately.
StepFunction slice_by_definition(const StepFunction& f, const Sublattice& c, double r);

struct WeightedPoint {
  double value;
  double mass;
};

/// Optimal 1-D transport cost (sum mass |x - y|^p)^(1/p) via the sorted coupling.
/// Throws MassMismatch.
double wasserstein_block(std::span<const WeightedPoint> d1, std::span<const WeightedPoint> d2, double p,
                         double tol = kDefaultTol);

/// Least ||f' - g'|| over sampled pairs of realizations of t1, t2 on a common
/// space. Trial 0 is the comonotone coupling; the rest permute and subdivide
/// segments at random and place orthogonal parts aligned, crossed or apart.
double coupling_upper_bounds(const TypeDatum& t1, const TypeDatum& t2, int trials, std::uint64_t seed,
                             double tol = kDefaultTol);

}  // namespace lpi::oracles
