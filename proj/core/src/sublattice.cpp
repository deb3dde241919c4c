#include "lpi/sublattice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "lpi/error.hpp"

namespace lpi {

namespace {

double pow_p(double x, double p) {
  if (p == 1.0) return x;
  if (p == 2.0) return x * x;
  return std::pow(x, p);
}

}  // namespace

Sublattice::Sublattice(Space space, std::vector<CellSet> blocks, std::vector<double> profile)
    : space_(std::move(space)), blocks_(std::move(blocks)), profile_(std::move(profile)), block_of_(space_.size(), -1) {
  for (auto& b : blocks_) std::sort(b.begin(), b.end());
  std::sort(blocks_.begin(), blocks_.end(), [](const CellSet& x, const CellSet& y) { return x.front() < y.front(); });
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    double top = 0.0;
    for (std::size_t i : blocks_[k]) top = std::max(top, profile_[i]);
    for (std::size_t i : blocks_[k]) {
      profile_[i] /= top;
      block_of_[i] = static_cast<long>(k);
    }
  }
  for (std::size_t i = 0; i < profile_.size(); ++i)
    if (block_of_[i] < 0) profile_[i] = 0.0;
}

Sublattice Sublattice::trivial(const Space& space) { return Sublattice(space, {}, std::vector<double>(space.size(), 0.0)); }

Sublattice Sublattice::from_blocks(const Space& space, std::vector<CellSet> blocks, std::span<const double> profile) {
  if (profile.size() != space.size()) throw Error(Errc::ValidationError, "profile size differs from the space");
  std::vector<bool> seen(space.size(), false);
  for (const auto& b : blocks) {
    if (b.empty()) throw Error(Errc::ValidationError, "empty block");
    for (std::size_t i : b) {
      if (i >= space.size()) throw Error(Errc::UnknownCell, "block cell index out of range");
      if (seen[i]) throw Error(Errc::ValidationError, "blocks overlap at '" + space.id(i) + "'");
      if (!(profile[i] > 0.0) || !std::isfinite(profile[i]))
        throw Error(Errc::ValidationError, "profile not positive at '" + space.id(i) + "'");
      seen[i] = true;
    }
  }
  return Sublattice(space, std::move(blocks), std::vector<double>(profile.begin(), profile.end()));
}

Sublattice Sublattice::from_partition(const Space& space, std::vector<CellSet> blocks) {
  std::vector<double> ones(space.size(), 1.0);
  return from_blocks(space, std::move(blocks), ones);
}

std::optional<std::size_t> Sublattice::block_of(std::size_t cell) const {
  const long k = block_of_.at(cell);
  if (k < 0) return std::nullopt;
  return static_cast<std::size_t>(k);
}

CellSet Sublattice::support() const {
  CellSet out;
  for (std::size_t i = 0; i < block_of_.size(); ++i)
    if (block_of_[i] >= 0) out.push_back(i);
  return out;
}

StepFunction Sublattice::generator(std::size_t k) const {
  std::vector<double> v(space_.size(), 0.0);
  for (std::size_t i : block(k)) v[i] = profile_[i];
  return StepFunction(space_, std::move(v));
}

std::vector<StepFunction> Sublattice::generators() const {
  std::vector<StepFunction> out;
  out.reserve(blocks_.size());
  for (std::size_t k = 0; k < blocks_.size(); ++k) out.push_back(generator(k));
  return out;
}

double Sublattice::nu(std::size_t cell) const { return space_.weight(cell) * pow_p(profile_.at(cell), space_.p()); }

double Sublattice::block_mass(std::size_t k) const {
  double m = 0.0;
  for (std::size_t i : block(k)) m += nu(i);
  return m;
}

bool Sublattice::has_indicator_profile(double tol) const {
  for (const auto& b : blocks_)
    for (std::size_t i : b)
      if (!near(profile_[i], 1.0, tol)) return false;
  return true;
}

bool Sublattice::approx_equal(const Sublattice& other, double tol) const {
  if (!space_.same_as(other.space_) || blocks_ != other.blocks_) return false;
  for (std::size_t i = 0; i < profile_.size(); ++i)
    if (!near(profile_[i], other.profile_[i], tol)) return false;
  return true;
}

Sublattice dcl(const Space& space, std::span<const StepFunction> generators, double tol) {
  for (const auto& g : generators) require_same_space(g.space(), space, "dcl");
  const std::size_t n = space.size();
  const std::size_t k = generators.size();
  // Scale each generator so the support test is relative to its magnitude.
  std::vector<double> scale(k, 1.0);
  for (std::size_t g = 0; g < k; ++g)
    for (double v : generators[g].values()) scale[g] = std::max(scale[g], std::abs(v));

  std::vector<std::vector<double>> reps;  // unit direction per block
  std::vector<CellSet> blocks;
  std::vector<double> profile(n, 0.0);
  std::vector<double> vec(k);
  for (std::size_t i = 0; i < n; ++i) {
    double len2 = 0.0;
    bool nonzero = false;
    for (std::size_t g = 0; g < k; ++g) {
      vec[g] = generators[g][i];
      if (std::abs(vec[g]) > tol * scale[g]) nonzero = true;
      len2 += vec[g] * vec[g];
    }
    if (!nonzero) continue;
    const double len = std::sqrt(len2);
    std::size_t found = blocks.size();
    for (std::size_t b = 0; b < reps.size() && found == blocks.size(); ++b) {
      bool same = true;
      for (std::size_t g = 0; g < k && same; ++g) same = std::abs(vec[g] / len - reps[b][g]) <= tol;
      if (same) found = b;
    }
    if (found == blocks.size()) {
      std::vector<double> unit(k);
      for (std::size_t g = 0; g < k; ++g) unit[g] = vec[g] / len;
      reps.push_back(std::move(unit));
      blocks.emplace_back();
    }
    blocks[found].push_back(i);
    double dot = 0.0;
    for (std::size_t g = 0; g < k; ++g) dot += vec[g] * reps[found][g];
    profile[i] = dot;
  }
  return Sublattice::from_blocks(space, std::move(blocks), profile);
}

std::optional<std::vector<double>> contains(const Sublattice& c, const StepFunction& f, double tol) {
  require_same_space(c.space(), f.space(), "contains");
  double scale = 1.0;
  for (double v : f.values()) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!c.in_support(i) && std::abs(f[i]) > tol * scale) return std::nullopt;
  std::vector<double> coef(c.block_count(), 0.0);
  for (std::size_t k = 0; k < c.block_count(); ++k) {
    double num = 0.0, den = 0.0;
    for (std::size_t i : c.block(k)) {
      num += f[i] * c.profile(i);
      den += c.profile(i) * c.profile(i);
    }
    coef[k] = num / den;
    for (std::size_t i : c.block(k))
      if (std::abs(f[i] - coef[k] * c.profile(i)) > tol * scale) return std::nullopt;
  }
  return coef;
}

StepFunction member(const Sublattice& c, std::span<const double> coefficients) {
  if (coefficients.size() != c.block_count()) throw Error(Errc::ValidationError, "one coefficient per block required");
  std::vector<double> v(c.space().size(), 0.0);
  for (std::size_t k = 0; k < c.block_count(); ++k)
    for (std::size_t i : c.block(k)) v[i] = coefficients[k] * c.profile(i);
  return StepFunction(c.space(), std::move(v));
}

bool is_sublattice_of(const Sublattice& c, const Sublattice& b, double tol) {
  require_same_space(c.space(), b.space(), "is_sublattice_of");
  for (std::size_t k = 0; k < c.block_count(); ++k)
    if (!contains(b, c.generator(k), tol)) return false;
  return true;
}

BandParts band_decompose(const StepFunction& f, const Sublattice& c) {
  require_same_space(f.space(), c.space(), "band_decompose");
  std::vector<double> band(f.size(), 0.0), orth(f.size(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) (c.in_support(i) ? band : orth)[i] = f[i];
  return {StepFunction(f.space(), std::move(band)), StepFunction(f.space(), std::move(orth))};
}

std::vector<double> cond_exp_coefficients(const StepFunction& f, const Sublattice& c) {
  require_same_space(f.space(), c.space(), "cond_exp");
  const Space& s = c.space();
  const double p = s.p();
  std::vector<double> coef(c.block_count(), 0.0);
  for (std::size_t k = 0; k < c.block_count(); ++k) {
    double num = 0.0, den = 0.0;
    for (std::size_t i : c.block(k)) {
      const double w = c.profile(i);
      const double wp1 = p == 1.0 ? 1.0 : p == 2.0 ? w : std::pow(w, p - 1.0);
      num += s.weight(i) * wp1 * f[i];
      den += s.weight(i) * wp1 * w;
    }
    coef[k] = num / den;
  }
  return coef;
}

StepFunction cond_exp(const StepFunction& f, const Sublattice& c) { return member(c, cond_exp_coefficients(f, c)); }

Sublattice lattice_intersection(const Sublattice& a, const Sublattice& c, double tol) {
  require_same_space(a.space(), c.space(), "lattice_intersection");
  const std::size_t n = a.space().size();
  auto in_both = [&](std::size_t i) { return a.in_support(i) && c.in_support(i); };

  // A block leaking outside the other support must carry coefficient 0.
  std::vector<bool> a_dead(a.block_count(), false), c_dead(c.block_count(), false);
  for (std::size_t k = 0; k < a.block_count(); ++k)
    for (std::size_t i : a.block(k))
      if (!c.in_support(i)) a_dead[k] = true;
  for (std::size_t k = 0; k < c.block_count(); ++k)
    for (std::size_t i : c.block(k))
      if (!a.in_support(i)) c_dead[k] = true;

  std::vector<double> ratio(n, 0.0);
  std::vector<bool> visited(n, false);
  std::vector<CellSet> blocks;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (!in_both(seed) || visited[seed]) continue;
    CellSet comp;
    std::deque<std::size_t> queue{seed};
    visited[seed] = true;
    ratio[seed] = 1.0;
    bool alive = true;
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      comp.push_back(i);
      const std::size_t ka = *a.block_of(i), kc = *c.block_of(i);
      alive = alive && !a_dead[ka] && !c_dead[kc];
      auto visit = [&](const CellSet& blk, const Sublattice& owner) {
        for (std::size_t j : blk) {
          if (visited[j] || !in_both(j)) continue;
          visited[j] = true;
          ratio[j] = ratio[i] * owner.profile(j) / owner.profile(i);
          queue.push_back(j);
        }
      };
      visit(a.block(ka), a);
      visit(c.block(kc), c);
    }
    if (!alive) continue;
    // Cycle consistency: ratio / profile must be constant on every touched block.
    auto consistent = [&](const Sublattice& owner) {
      for (std::size_t i : comp) {
        const std::size_t k = *owner.block_of(i);
        const std::size_t first = owner.block(k).front();
        if (!near(ratio[i] / owner.profile(i), ratio[first] / owner.profile(first), tol)) return false;
      }
      return true;
    };
    if (consistent(a) && consistent(c)) blocks.push_back(std::move(comp));
  }
  return Sublattice::from_blocks(a.space(), std::move(blocks), ratio);
}

Sublattice lattice_join(const Sublattice& a, const Sublattice& c, double tol) {
  require_same_space(a.space(), c.space(), "lattice_join");
  std::vector<StepFunction> gens = a.generators();
  auto more = c.generators();
  gens.insert(gens.end(), more.begin(), more.end());
  return dcl(a.space(), gens, tol);
}

bool intersects_well(const Sublattice& a, const Sublattice& c, double tol) {
  const Sublattice meet = lattice_intersection(a, c, tol);
  for (std::size_t i = 0; i < a.space().size(); ++i)
    if ((a.in_support(i) && c.in_support(i)) != meet.in_support(i)) return false;
  return true;
}

Sublattice lift(const Sublattice& c, const Refinement& r) {
  require_same_space(c.space(), r.parent(), "lift");
  std::vector<CellSet> blocks;
  std::vector<double> profile(r.child().size(), 0.0);
  for (const auto& b : c.blocks()) {
    CellSet image;
    for (std::size_t i : b)
      for (std::size_t ch : r.children(i)) {
        image.push_back(ch);
        profile[ch] = c.profile(i);
      }
    blocks.push_back(std::move(image));
  }
  return Sublattice::from_blocks(r.child(), std::move(blocks), profile);
}

Sublattice transport(const Sublattice& c, const DensityChange& change) {
  require_same_space(c.space(), change.old_space(), "transport");
  std::vector<double> profile(c.space().size(), 0.0);
  for (std::size_t i = 0; i < profile.size(); ++i)
    if (c.in_support(i)) profile[i] = c.profile(i) / change.density()[i];
  std::vector<CellSet> blocks(c.blocks().begin(), c.blocks().end());
  return Sublattice::from_blocks(change.new_space(), std::move(blocks), profile);
}

Sublattice rebase(const Sublattice& c, const Space& space) {
  if (space.size() != c.space().size()) throw Error(Errc::SpaceMismatch, "rebase onto a different cell count");
  std::vector<CellSet> blocks(c.blocks().begin(), c.blocks().end());
  return Sublattice::from_blocks(space, std::move(blocks), c.profile());
}

StepFunction rebase(const StepFunction& f, const Space& space) {
  if (space.size() != f.space().size()) throw Error(Errc::SpaceMismatch, "rebase onto a different cell count");
  return StepFunction(space, std::vector<double>(f.values().begin(), f.values().end()));
}

}  // namespace lpi
