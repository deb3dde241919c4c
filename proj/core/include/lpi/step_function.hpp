#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "lpi/space.hpp"
#include "lpi/tolerance.hpp"

namespace lpi {

/// An element of L_p(space): one finite real value per cell.
class StepFunction {
 public:
  /// The zero function.
  explicit StepFunction(Space space);
  /// Dense values in cell order. Throws NonFiniteValue or ValidationError on size mismatch.
  StepFunction(Space space, std::vector<double> values);

  /// Sparse construction keyed by cell id; absent cells are 0. Throws UnknownCell.
  static StepFunction from_map(Space space, const std::map<std::string, double>& values);
  static StepFunction indicator(Space space, const CellSet& cells);
  static StepFunction constant(Space space, double c);

  const Space& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  bool is_zero(double tol = kDefaultTol) const;
  CellSet support(double tol = 0.0) const;

 private:
  Space space_;
  std::vector<double> values_;
};

StepFunction operator+(const StepFunction& f, const StepFunction& g);
StepFunction operator-(const StepFunction& f, const StepFunction& g);
StepFunction operator-(const StepFunction& f);
StepFunction operator*(double s, const StepFunction& f);

StepFunction meet(const StepFunction& f, const StepFunction& g);
StepFunction join(const StepFunction& f, const StepFunction& g);
StepFunction positive_part(const StepFunction& f);
StepFunction negative_part(const StepFunction& f);
StepFunction abs(const StepFunction& f);
/// Cellwise product; used where a fixed presentation is assumed.
StepFunction product(const StepFunction& f, const StepFunction& g);
/// f restricted to `cells` (zero elsewhere).
StepFunction restrict_to(const StepFunction& f, const CellSet& cells);

/// sum_i weight_i |f_i|^p
double norm_pow(const StepFunction& f);
double norm(const StepFunction& f);

/// Cellwise `near`.
bool approx_equal(const StepFunction& f, const StepFunction& g, double tol = kDefaultTol);

std::map<std::string, double> to_map(const StepFunction& f);

}  // namespace lpi
