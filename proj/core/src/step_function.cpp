#include "lpi/step_function.hpp"

#include <algorithm>
#include <cmath>

#include "lpi/error.hpp"

namespace lpi {

namespace {

template <class Op>
StepFunction zip(const StepFunction& f, const StepFunction& g, const char* what, Op op) {
  require_same_space(f.space(), g.space(), what);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(f[i], g[i]);
  return StepFunction(f.space(), std::move(out));
}

template <class Op>
StepFunction map(const StepFunction& f, Op op) {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(f[i]);
  return StepFunction(f.space(), std::move(out));
}

}  // namespace

StepFunction::StepFunction(Space space) : space_(std::move(space)), values_(space_.size(), 0.0) {}

StepFunction::StepFunction(Space space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (values_.size() != space_.size())
    throw Error(Errc::ValidationError, "function has " + std::to_string(values_.size()) +
                                           " values for " + std::to_string(space_.size()) + " cells");
  for (double v : values_)
    if (!std::isfinite(v)) throw Error(Errc::NonFiniteValue, "function value");
}

StepFunction StepFunction::from_map(Space space, const std::map<std::string, double>& values) {
  std::vector<double> dense(space.size(), 0.0);
  for (const auto& [id, v] : values) dense[space.index_of(id)] = v;
  return StepFunction(std::move(space), std::move(dense));
}

StepFunction StepFunction::indicator(Space space, const CellSet& cells) {
  std::vector<double> dense(space.size(), 0.0);
  for (std::size_t i : cells) dense.at(i) = 1.0;
  return StepFunction(std::move(space), std::move(dense));
}

StepFunction StepFunction::constant(Space space, double c) {
  std::vector<double> dense(space.size(), c);
  return StepFunction(std::move(space), std::move(dense));
}

bool StepFunction::is_zero(double tol) const {
  return std::all_of(values_.begin(), values_.end(), [tol](double v) { return std::abs(v) <= tol; });
}

CellSet StepFunction::support(double tol) const {
  CellSet out;
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (std::abs(values_[i]) > tol) out.push_back(i);
  return out;
}

StepFunction operator+(const StepFunction& f, const StepFunction& g) {
  return zip(f, g, "add", [](double a, double b) { return a + b; });
}
StepFunction operator-(const StepFunction& f, const StepFunction& g) {
  return zip(f, g, "subtract", [](double a, double b) { return a - b; });
}
StepFunction operator-(const StepFunction& f) {
  return map(f, [](double a) { return -a; });
}
StepFunction operator*(double s, const StepFunction& f) {
  return map(f, [s](double a) { return s * a; });
}
StepFunction meet(const StepFunction& f, const StepFunction& g) {
  return zip(f, g, "meet", [](double a, double b) { return std::min(a, b); });
}
StepFunction join(const StepFunction& f, const StepFunction& g) {
  return zip(f, g, "join", [](double a, double b) { return std::max(a, b); });
}
StepFunction positive_part(const StepFunction& f) {
  return map(f, [](double a) { return std::max(a, 0.0); });
}
StepFunction negative_part(const StepFunction& f) {
  return map(f, [](double a) { return std::max(-a, 0.0); });
}
StepFunction abs(const StepFunction& f) {
  return map(f, [](double a) { return std::abs(a); });
}
StepFunction product(const StepFunction& f, const StepFunction& g) {
  return zip(f, g, "product", [](double a, double b) { return a * b; });
}

StepFunction restrict_to(const StepFunction& f, const CellSet& cells) {
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t i : cells) out.at(i) = f[i];
  return StepFunction(f.space(), std::move(out));
}

double norm_pow(const StepFunction& f) {
  const Space& s = f.space();
  const double p = s.p();
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = std::abs(f[i]);
    if (a == 0.0) continue;
    acc += s.weight(i) * (p == 1.0 ? a : p == 2.0 ? a * a : std::pow(a, p));
  }
  return acc;
}

double norm(const StepFunction& f) {
  const double p = f.space().p();
  const double np = norm_pow(f);
  if (p == 1.0) return np;
  if (p == 2.0) return std::sqrt(np);
  return std::pow(np, 1.0 / p);
}

bool approx_equal(const StepFunction& f, const StepFunction& g, double tol) {
  if (!f.space().same_as(g.space())) return false;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!near(f[i], g[i], tol)) return false;
  return true;
}

std::map<std::string, double> to_map(const StepFunction& f) {
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] != 0.0) out.emplace(f.space().id(i), f[i]);
  return out;
}

}  // namespace lpi
