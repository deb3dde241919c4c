#pragma once

#include <span>
#include <vector>

#include "lpi/space.hpp"
#include "lpi/step_function.hpp"
#include "lpi/sublattice.hpp"

namespace lpi {

struct Segment {
  double length;
  double value;
};

/// Decreasing step function of r on (0,1) for one block, plus the block mass nu(B).
struct BlockProfile {
  double mass = 0.0;
  std::vector<Segment> segments;

  /// Right-continuous value at r.
  double value_at(double r) const;
  /// Cumulative segment ends (last entry is 1 up to rounding).
  std::vector<double> breakpoints() const;
};

/// r -> S_r(f/C), stored per block as merged segments in the nu-presentation.
struct SliceProfile {
  Sublattice sublattice;
  std::vector<BlockProfile> blocks;

  /// Member of C with block coefficients value_at(r).
  StepFunction slice(double r) const;
  /// Sorted interior breakpoints over all blocks (excluding 0 and 1).
  std::vector<double> breakpoints(double tol = kDefaultTol) const;
  /// Compares block masses and profiles; the sublattices may live on different
  /// refinements of one space.
  bool approx_equal(const SliceProfile& other, double tol = kDefaultTol) const;
};

/// Complete invariant of tp(f/C).
struct TypeDatum {
  SliceProfile profile;
  double orth_pos = 0.0;  ///< norm of the positive part of the C-orthogonal component
  double orth_neg = 0.0;  ///< norm of its negative part

  const Sublattice& sublattice() const noexcept { return profile.sublattice; }
  bool approx_equal(const TypeDatum& other, double tol = kDefaultTol) const;
};

struct Atom {
  std::vector<double> value;
  double mass;
};

/// dist(f-bar | C): per-block laws of profile-normalized value vectors (masses sum
/// to nu(B)) and the off-origin law of the C-orthogonal components, taken on
/// directions: a cell with vector v contributes mass mu*|v|_p^p at v/|v|_p.
struct ConditionalDistribution {
  Sublattice sublattice;
  std::size_t arity = 0;
  std::vector<std::vector<Atom>> blocks;
  std::vector<Atom> orth;

  /// Compares the laws block by block (as data, like SliceProfile::approx_equal).
  bool approx_equal(const ConditionalDistribution& other, double tol = kDefaultTol) const;
};

struct SegmentPair {
  double length;
  double v1;
  double v2;
};

/// Common refinement of two segment lists on (0,1). The last segment of each
/// list is taken to end exactly at 1.
std::vector<SegmentPair> overlay(const std::vector<Segment>& a, const std::vector<Segment>& b);

/// P_C(event): member of C with coefficient nu(event & B) / nu(B) per block.
StepFunction cond_probability(const CellSet& event, const Sublattice& c);

SliceProfile slice_profile(const StepFunction& f, const Sublattice& c, double tol = kDefaultTol);
/// S_r(f/C) for 0 < r < 1. Throws BadR.
StepFunction slice(const StepFunction& f, const Sublattice& c, double r, double tol = kDefaultTol);
TypeDatum type_datum(const StepFunction& f, const Sublattice& c, double tol = kDefaultTol);

ConditionalDistribution cond_distribution(std::span<const StepFunction> fs, const Sublattice& c,
                                          double tol = kDefaultTol);
bool tuple_type_equal(std::span<const StepFunction> fs, std::span<const StepFunction> gs, const Sublattice& c,
                      double tol = kDefaultTol);

/// Exact distance between two 1-types over the same sublattice. Throws SublatticeMismatch.
double distance(const TypeDatum& t1, const TypeDatum& t2, double tol = kDefaultTol);

/// Integral over r in (0,1) of S_r(f/C); equals cond_exp(f, C).
StepFunction integrate_slices(const SliceProfile& profile);
/// Integral over r of ||S_r(f/C)||^p.
double integrate_slice_norm_pow(const SliceProfile& profile);

}  // namespace lpi
