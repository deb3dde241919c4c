#include "lpi/refinement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lpi/error.hpp"

namespace lpi {

Refinement::Refinement(Space parent, Space child, std::vector<CellSet> children, CellSet fresh)
    : parent_(std::move(parent)),
      child_(std::move(child)),
      children_(std::move(children)),
      fresh_(std::move(fresh)),
      parent_of_(child_.size()) {
  if (children_.size() != parent_.size())
    throw Error(Errc::ValidationError, "refinement must list children for every parent cell");
  for (std::size_t i = 0; i < children_.size(); ++i) {
    if (children_[i].empty()) throw Error(Errc::ValidationError, "parent cell without children");
    double sum = 0.0;
    for (std::size_t c : children_[i]) {
      if (c >= child_.size() || parent_of_[c])
        throw Error(Errc::ValidationError, "child cell listed twice or out of range");
      parent_of_[c] = i;
      sum += child_.weight(c);
    }
    if (!near(sum, parent_.weight(i), 1e-9))
      throw Error(Errc::ValidationError, "child weights of '" + parent_.id(i) + "' do not sum to its weight");
  }
  for (std::size_t c : fresh_)
    if (c >= child_.size() || parent_of_[c]) throw Error(Errc::ValidationError, "bad fresh cell");
  if (std::count_if(parent_of_.begin(), parent_of_.end(), [](const auto& o) { return o.has_value(); }) +
          static_cast<std::ptrdiff_t>(fresh_.size()) != static_cast<std::ptrdiff_t>(child_.size()))
    throw Error(Errc::ValidationError, "child cell neither owned nor fresh");
  if (parent_.p() != child_.p()) throw Error(Errc::ValidationError, "refinement changes the exponent");
}

Refinement Refinement::identity(const Space& space) {
  std::vector<CellSet> children(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) children[i] = {i};
  return Refinement(space, space, std::move(children), {});
}

bool Refinement::is_identity() const noexcept {
  if (!fresh_.empty() || child_.size() != parent_.size()) return false;
  for (const auto& c : children_)
    if (c.size() != 1) return false;
  return true;
}

Refinement Refinement::then(const Refinement& next) const {
  require_same_space(child_, next.parent(), "refinement composition");
  std::vector<CellSet> children(parent_.size());
  for (std::size_t i = 0; i < parent_.size(); ++i) {
    for (std::size_t c : children_[i]) {
      const auto& grand = next.children(c);
      children[i].insert(children[i].end(), grand.begin(), grand.end());
    }
    std::sort(children[i].begin(), children[i].end());
  }
  CellSet fresh = next.fresh();
  for (std::size_t c : fresh_) {
    const auto& grand = next.children(c);
    fresh.insert(fresh.end(), grand.begin(), grand.end());
  }
  std::sort(fresh.begin(), fresh.end());
  return Refinement(parent_, next.child(), std::move(children), std::move(fresh));
}

Refinement split_cells(const Space& space, const std::vector<std::vector<double>>& fractions, double tol) {
  if (fractions.size() != space.size())
    throw Error(Errc::BadFractions, "need one fraction list per cell");
  std::vector<Cell> cells;
  std::vector<CellSet> children(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto& fr = fractions[i];
    const Cell& parent = space.cell(i);
    if (fr.size() <= 1) {
      if (fr.size() == 1 && !near(fr[0], 1.0, tol))
        throw Error(Errc::BadFractions, "single fraction must be 1 for '" + parent.id + "'");
      children[i].push_back(cells.size());
      cells.push_back(parent);
      continue;
    }
    double sum = 0.0;
    for (double f : fr) {
      if (!(f > 0.0) || !std::isfinite(f))
        throw Error(Errc::BadFractions, "non-positive fraction for '" + parent.id + "'");
      sum += f;
    }
    if (!near(sum, 1.0, tol))
      throw Error(Errc::BadFractions, "fractions for '" + parent.id + "' sum to " + std::to_string(sum));
    for (std::size_t k = 0; k < fr.size(); ++k) {
      children[i].push_back(cells.size());
      cells.push_back({parent.id + "#" + std::to_string(k), parent.weight * fr[k] / sum});
    }
  }
  Space child = Space::make(std::move(cells), space.p());
  return Refinement(space, std::move(child), std::move(children), {});
}

Refinement split_cell(const Space& space, std::string_view cell, std::span<const double> fractions, double tol) {
  const std::size_t target = space.index_of(cell);
  if (fractions.empty()) throw Error(Errc::BadFractions, "no fractions");
  std::vector<std::vector<double>> all(space.size());
  all[target].assign(fractions.begin(), fractions.end());
  if (all[target].size() == 1 && !near(all[target][0], 1.0, tol))
    throw Error(Errc::BadFractions, "single fraction must be 1");
  return split_cells(space, all, tol);
}

Refinement add_fresh_cells(const Space& space, std::vector<Cell> extra) {
  std::vector<Cell> cells(space.cells().begin(), space.cells().end());
  std::vector<CellSet> children(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) children[i] = {i};
  CellSet fresh;
  for (auto& c : extra) {
    fresh.push_back(cells.size());
    cells.push_back(std::move(c));
  }
  Space child = Space::make(std::move(cells), space.p());
  return Refinement(space, std::move(child), std::move(children), std::move(fresh));
}

std::string unused_id(const Space& space, std::string_view stem) {
  std::string candidate(stem);
  for (int k = 0; space.find(candidate); ++k) candidate = std::string(stem) + std::to_string(k);
  return candidate;
}

CommonRefinement common_refinement(const Refinement& first, const Refinement& second) {
  require_same_space(first.parent(), second.parent(), "common_refinement");
  const Space& parent = first.parent();
  const Space& s1 = first.child();
  const Space& s2 = second.child();
  std::vector<Cell> cells;
  std::vector<CellSet> ch1(s1.size()), ch2(s2.size());
  for (std::size_t i = 0; i < parent.size(); ++i) {
    const auto& a = first.children(i);
    const auto& b = second.children(i);
    std::size_t k = 0;
    for (std::size_t x : a)
      for (std::size_t y : b) {
        ch1[x].push_back(cells.size());
        ch2[y].push_back(cells.size());
        const std::string id = a.size() * b.size() == 1 ? parent.id(i) : parent.id(i) + "#" + std::to_string(k);
        cells.push_back({id, s1.weight(x) * s2.weight(y) / parent.weight(i)});
        ++k;
      }
  }
  std::vector<std::string> taken;
  for (const auto& c : cells) taken.push_back(c.id);
  auto fresh_id = [&](const std::string& stem) {
    std::string id = stem;
    for (int k = 0; std::find(taken.begin(), taken.end(), id) != taken.end(); ++k) id = stem + "~" + std::to_string(k);
    taken.push_back(id);
    return id;
  };
  CellSet fresh1, fresh2;
  for (std::size_t x : first.fresh()) {
    ch1[x].push_back(cells.size());
    fresh2.push_back(cells.size());
    cells.push_back({fresh_id(s1.id(x)), s1.weight(x)});
  }
  for (std::size_t y : second.fresh()) {
    ch2[y].push_back(cells.size());
    fresh1.push_back(cells.size());
    cells.push_back({fresh_id(s2.id(y)), s2.weight(y)});
  }
  Space common = Space::make(std::move(cells), parent.p());
  return CommonRefinement{Refinement(s1, common, std::move(ch1), std::move(fresh1)),
                          Refinement(s2, common, std::move(ch2), std::move(fresh2))};
}

StepFunction lift(const StepFunction& f, const Refinement& r) {
  require_same_space(f.space(), r.parent(), "lift");
  std::vector<double> out(r.child().size(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t c : r.children(i)) out[c] = f[i];
  return StepFunction(r.child(), std::move(out));
}

CellSet lift(const CellSet& cells, const Refinement& r) {
  CellSet out;
  for (std::size_t i : cells) {
    const auto& ch = r.children(i);
    out.insert(out.end(), ch.begin(), ch.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

Space reweighted(const StepFunction& d) {
  const Space& s = d.space();
  std::vector<Cell> cells(s.cells().begin(), s.cells().end());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!(d[i] > 0.0)) throw Error(Errc::NonPositiveDensity, "at cell '" + cells[i].id + "'");
    cells[i].weight *= std::pow(d[i], s.p());
  }
  return Space::make(std::move(cells), s.p());
}

}  // namespace

DensityChange::DensityChange(const StepFunction& density) : density_(density), space_(reweighted(density)) {}

StepFunction DensityChange::to_new(const StepFunction& f) const {
  require_same_space(f.space(), old_space(), "density change");
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f[i] / density_[i];
  return StepFunction(space_, std::move(out));
}

StepFunction DensityChange::to_old(const StepFunction& g) const {
  require_same_space(g.space(), new_space(), "density change");
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = g[i] * density_[i];
  return StepFunction(old_space(), std::move(out));
}

}  // namespace lpi
