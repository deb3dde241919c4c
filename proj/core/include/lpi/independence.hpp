#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>

#include "lpi/realization.hpp"
#include "lpi/sublattice.hpp"
#include "lpi/typespace.hpp"

namespace lpi {

struct ExpectationWitness {
  StepFunction element;
  StepFunction over_b;  ///< E_B'(element)
  StepFunction over_c;  ///< E_C(element)
};

struct SliceWitness {
  std::string term;
  double r;
  StepFunction over_b;  ///< S_r(f/B)
  StepFunction over_c;  ///< S_r(f/C)
};

struct IndependenceVerdict {
  bool independent = true;
  std::optional<std::variant<ExpectationWitness, SliceWitness>> witness;
};

/// A *-independent from B over C: E_B' = E_C on dcl(AC), with B' = dcl(BC).
/// When dependent, the witness is the generator of dcl(AC) with the largest
/// relative discrepancy (ties broken by block order).
IndependenceVerdict star_independent(const Sublattice& a, const Sublattice& b, const Sublattice& c,
                                     double tol = kDefaultTol);
/// Generator-set form; each set is closed under dcl first.
IndependenceVerdict star_independent(std::span<const StepFunction> a, std::span<const StepFunction> b,
                                     std::span<const StepFunction> c, const Space& space,
                                     double tol = kDefaultTol);
/// Tuple form: dcl(fs) against B over C.
IndependenceVerdict star_independent(std::span<const StepFunction> fs, const Sublattice& b, const Sublattice& c,
                                     double tol = kDefaultTol);

/// E_B = E_C on the generators of A alone. Requires C <= B and that A and C
/// intersect well; throws PreconditionFailed otherwise.
bool restricted_star_check(const Sublattice& a, const Sublattice& b, const Sublattice& c, double tol = kDefaultTol);

/// E_C(chi_{P0 & P1}) = E_C(chi_P0) E_C(chi_P1) for all blocks P0 of A and P1 of B.
/// Requires C <= A, C <= B, supp A & supp B = supp C and indicator profiles.
bool product_check(const Sublattice& a, const Sublattice& b, const Sublattice& c, double tol = kDefaultTol);

/// Compares S_r(f/B) with S_r(f/C) on every piece of the joint breakpoint partition.
/// Requires C <= B.
IndependenceVerdict slice_independent(const StepFunction& f, const Sublattice& b, const Sublattice& c,
                                      double tol = kDefaultTol);

/// A tuple with the type of fs over C that is *-independent from B over C.
/// Band parts are spread across each C-block by their conditional law given C;
/// orthogonal parts move to fresh cells. Requires C <= B.
Realization nonforking_extension(std::span<const StepFunction> fs, const Sublattice& c, const Sublattice& b,
                                 double tol = kDefaultTol);

struct StationarityResult {
  bool hypotheses_met;
  bool holds;  ///< true when hypotheses are unmet
};
/// If f1 and f2 have the same type over C and are both independent from B over
/// C, checks that they have the same type over B. Requires C <= B.
StationarityResult stationarity_check(std::span<const StepFunction> f1, std::span<const StepFunction> f2,
                                      const Sublattice& c, const Sublattice& b, double tol = kDefaultTol);

struct CanonicalBase {
  Sublattice base;
  bool certified;  ///< fs is independent from A over base
  std::size_t iterations;
};
/// Cb(fs / A). Throws NonTermination if the fixpoint does not stabilize.
CanonicalBase canonical_base(std::span<const StepFunction> fs, const Sublattice& a, double tol = kDefaultTol);

/// Distinct slices S_r(f/A), one per piece of the breakpoint partition.
std::vector<StepFunction> slice_values(const StepFunction& f, const Sublattice& a, double tol = kDefaultTol);

}  // namespace lpi
