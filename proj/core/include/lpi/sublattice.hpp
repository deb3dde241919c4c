#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lpi/refinement.hpp"
#include "lpi/space.hpp"
#include "lpi/step_function.hpp"

namespace lpi {

/// A closed sublattice of L_p(space) in block/profile normal form.
///
/// Members are exactly the sums  sum_B c_B * (profile restricted to B)  over
/// disjoint blocks B of cells. Within a block the profile is positive and its
/// maximum is 1; blocks are ordered by their least cell index. Two sublattices
/// are equal iff their canonical forms agree.
///
/// Distributional notions use the nu-presentation of the sublattice: cell
/// weights nu_j = mu_j * w_j^p on the support, with g -> g / w mapping members
/// onto block-constant functions.
class Sublattice {
 public:
  /// The trivial sublattice {0}.
  static Sublattice trivial(const Space& space);

  /// `profile` is indexed by cell; entries off the blocks are ignored. Throws
  /// ValidationError on overlapping or empty blocks and non-positive profiles.
  static Sublattice from_blocks(const Space& space, std::vector<CellSet> blocks, std::span<const double> profile);

  /// Blocks with profile 1.
  static Sublattice from_partition(const Space& space, std::vector<CellSet> blocks);

  const Space& space() const noexcept { return space_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  const CellSet& block(std::size_t k) const { return blocks_.at(k); }
  std::span<const CellSet> blocks() const noexcept { return blocks_; }
  std::span<const double> profile() const noexcept { return profile_; }
  double profile(std::size_t cell) const { return profile_.at(cell); }
  std::optional<std::size_t> block_of(std::size_t cell) const;
  bool in_support(std::size_t cell) const { return block_of_.at(cell) >= 0; }
  CellSet support() const;

  /// profile restricted to block k.
  StepFunction generator(std::size_t k) const;
  std::vector<StepFunction> generators() const;

  /// mu_j * w_j^p
  double nu(std::size_t cell) const;
  /// sum of nu over block k.
  double block_mass(std::size_t k) const;

  bool has_indicator_profile(double tol = kDefaultTol) const;
  bool approx_equal(const Sublattice& other, double tol = kDefaultTol) const;

 private:
  Sublattice(Space space, std::vector<CellSet> blocks, std::vector<double> profile);

  Space space_;
  std::vector<CellSet> blocks_;
  std::vector<double> profile_;
  std::vector<long> block_of_;
};

/// The sublattice generated by `generators` (definable closure).
Sublattice dcl(const Space& space, std::span<const StepFunction> generators, double tol = kDefaultTol);

/// Per-block coefficients of f in C, or nullopt if f is not a member.
std::optional<std::vector<double>> contains(const Sublattice& c, const StepFunction& f, double tol = kDefaultTol);

/// Member of C with the given block coefficients.
StepFunction member(const Sublattice& c, std::span<const double> coefficients);

bool is_sublattice_of(const Sublattice& c, const Sublattice& b, double tol = kDefaultTol);

struct BandParts {
  StepFunction band;  ///< component in the band generated by C
  StepFunction orth;  ///< component in the orthogonal band
};
BandParts band_decompose(const StepFunction& f, const Sublattice& c);

/// Conditional expectation onto C (density-corrected per block, zero off the support).
StepFunction cond_exp(const StepFunction& f, const Sublattice& c);
/// Block coefficients of cond_exp(f, c).
std::vector<double> cond_exp_coefficients(const StepFunction& f, const Sublattice& c);

Sublattice lattice_intersection(const Sublattice& a, const Sublattice& c, double tol = kDefaultTol);
Sublattice lattice_join(const Sublattice& a, const Sublattice& c, double tol = kDefaultTol);
bool intersects_well(const Sublattice& a, const Sublattice& c, double tol = kDefaultTol);

Sublattice lift(const Sublattice& c, const Refinement& r);
/// Image of C under the density re-presentation.
Sublattice transport(const Sublattice& c, const DensityChange& change);
/// Same blocks and profile over a structurally compatible space (e.g. another exponent).
Sublattice rebase(const Sublattice& c, const Space& space);
StepFunction rebase(const StepFunction& f, const Space& space);

}  // namespace lpi
