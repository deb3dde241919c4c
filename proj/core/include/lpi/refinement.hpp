#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lpi/space.hpp"
#include "lpi/step_function.hpp"

namespace lpi {

/// A map from a parent space onto a finer (and possibly larger) child space.
///
/// Every parent cell owns a nonempty run of child cells whose weights sum to
/// the parent weight. Child cells owned by no parent are fresh cells; lifted
/// functions vanish on them.
class Refinement {
 public:
  Refinement(Space parent, Space child, std::vector<CellSet> children, CellSet fresh);

  static Refinement identity(const Space& space);

  const Space& parent() const noexcept { return parent_; }
  const Space& child() const noexcept { return child_; }
  const CellSet& children(std::size_t parent_cell) const { return children_.at(parent_cell); }
  const CellSet& fresh() const noexcept { return fresh_; }
  std::optional<std::size_t> parent_of(std::size_t child_cell) const { return parent_of_.at(child_cell); }
  bool is_identity() const noexcept;

  /// This refinement followed by `next` (whose parent must be this child).
  Refinement then(const Refinement& next) const;

 private:
  Space parent_;
  Space child_;
  std::vector<CellSet> children_;
  CellSet fresh_;
  std::vector<std::optional<std::size_t>> parent_of_;
};

/// Splits one cell into sub-cells of weight `weight * fraction`. Child ids are
/// `parentId#k`. Throws UnknownCell or BadFractions.
Refinement split_cell(const Space& space, std::string_view cell, std::span<const double> fractions,
                      double tol = kDefaultTol);

/// Splits many cells at once: `fractions[i]` for cell i (empty or {1} leaves
/// the cell untouched and keeps its id).
Refinement split_cells(const Space& space, const std::vector<std::vector<double>>& fractions,
                       double tol = kDefaultTol);

/// Appends new cells. Throws DuplicateId or NonPositiveWeight.
Refinement add_fresh_cells(const Space& space, std::vector<Cell> cells);

/// An id not yet used in `space`, derived from `stem`.
std::string unused_id(const Space& space, std::string_view stem);

struct CommonRefinement {
  Refinement from_first;   ///< first child space -> common space
  Refinement from_second;  ///< second child space -> common space
};

/// A space refining both children of two refinements of the same parent: each
/// parent cell is split into the products of its two child runs, and the fresh
/// cells of both sides are kept side by side.
CommonRefinement common_refinement(const Refinement& first, const Refinement& second);

/// Copies values to every child; zero on fresh cells. Throws SpaceMismatch.
StepFunction lift(const StepFunction& f, const Refinement& r);
CellSet lift(const CellSet& cells, const Refinement& r);

/// Isometric re-presentation by a strictly positive density d:
/// weights w_i -> w_i d_i^p and functions f -> f/d.
class DensityChange {
 public:
  /// Throws NonPositiveDensity.
  explicit DensityChange(const StepFunction& density);

  const Space& old_space() const noexcept { return density_.space(); }
  const Space& new_space() const noexcept { return space_; }
  const StepFunction& density() const noexcept { return density_; }

  StepFunction to_new(const StepFunction& f) const;
  StepFunction to_old(const StepFunction& g) const;

 private:
  StepFunction density_;
  Space space_;
};

}  // namespace lpi
