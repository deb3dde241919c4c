#pragma once

#include <span>
#include <vector>

#include "lpi/refinement.hpp"
#include "lpi/sublattice.hpp"
#include "lpi/typespace.hpp"

namespace lpi {

struct Realization {
  Refinement refinement;  ///< from the input space to the realizing space
  std::vector<StepFunction> functions;

  const Space& space() const noexcept { return refinement.child(); }
};

struct CellSelection {
  Refinement refinement;
  CellSet cells;  ///< in the child space

  const Space& space() const noexcept { return refinement.child(); }
};

/// The decreasing realization S(t): each support cell is split by the segment
/// lengths of its block, children carrying the segment values in decreasing
/// order. Orthogonal norms go to fresh unit cells. One function is returned.
Realization canonical_realization(const TypeDatum& t);

/// Decreasing realizations of two types over the same sublattice on one common
/// refinement (merged breakpoints, shared fresh cells). Throws SublatticeMismatch.
Realization canonical_realization_pair(const TypeDatum& t1, const TypeDatum& t2, double tol = kDefaultTol);

/// B within A (and supp C) with cond_exp(chi_B, C) = target, after splitting cells of A.
/// Throws TargetOutOfRange.
CellSelection maharam_select(const CellSet& a, const Sublattice& c, const StepFunction& target,
                             double tol = kDefaultTol);

/// A tuple with the given conditional distribution. Throws InvalidDistribution.
Realization realize_cond_distribution(const ConditionalDistribution& d, double tol = kDefaultTol);

}  // namespace lpi
