#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lpi {

struct Cell {
  std::string id;
  double weight;
};

/// A finite weighted measure algebra together with the exponent p.
///
/// Cells are ordered; a cell's position is its index everywhere else in the
/// library (StepFunction values, Sublattice blocks). Spaces are immutable and
/// cheap to copy.
class Space {
 public:
  /// Validates and builds a space. Throws DuplicateId, NonPositiveWeight,
  /// BadExponent or NonFiniteValue.
  static Space make(std::vector<Cell> cells, double p);

  std::size_t size() const noexcept { return data_->cells.size(); }
  double p() const noexcept { return data_->p; }
  std::span<const Cell> cells() const noexcept { return data_->cells; }
  const Cell& cell(std::size_t i) const { return data_->cells.at(i); }
  const std::string& id(std::size_t i) const { return cell(i).id; }
  double weight(std::size_t i) const { return cell(i).weight; }
  double total_weight() const noexcept;

  std::optional<std::size_t> find(std::string_view id) const;
  /// Throws UnknownCell.
  std::size_t index_of(std::string_view id) const;

  /// Identity or structural equality (same ids, weights and p).
  bool same_as(const Space& other) const noexcept;

  /// The same cells with a different exponent.
  Space with_exponent(double p) const;

 private:
  struct Data {
    std::vector<Cell> cells;
    double p;
    std::unordered_map<std::string, std::size_t> index;
  };
  explicit Space(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

  std::shared_ptr<const Data> data_;
};

/// Throws SpaceMismatch unless `a.same_as(b)`.
void require_same_space(const Space& a, const Space& b, std::string_view context);

/// Sorted, duplicate-free list of cell indices.
using CellSet = std::vector<std::size_t>;

CellSet cell_set_from_ids(const Space& space, std::span<const std::string> ids);

}  // namespace lpi
