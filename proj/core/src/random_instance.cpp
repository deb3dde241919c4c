#include "lpi/random_instance.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace lpi {

namespace {

// Groups the kept blocks of `fine` into coarser blocks, rescaling each fine block.
Sublattice coarsen(Rng& rng, const Sublattice& fine, bool indicator) {
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < fine.block_count(); ++k)
    if (rng.chance(0.8)) kept.push_back(k);
  std::map<std::size_t, CellSet> groups;
  std::vector<double> profile(fine.space().size(), 0.0);
  for (std::size_t k : kept) {
    const std::size_t g = rng.uniform_int(kept.size());
    const double scale = indicator ? 1.0 : 0.5 + 1.5 * rng.uniform01();
    for (std::size_t i : fine.block(k)) {
      groups[g].push_back(i);
      profile[i] = scale * fine.profile(i);
    }
  }
  std::vector<CellSet> blocks;
  for (auto& [g, cells] : groups) blocks.push_back(std::move(cells));
  return Sublattice::from_blocks(fine.space(), std::move(blocks), profile);
}

}  // namespace

double random_value(Rng& rng, bool dyadic) {
  if (dyadic) return (static_cast<double>(rng.uniform_int(9)) - 4.0) / 2.0;
  return -2.0 + 4.0 * rng.uniform01();
}

Instance random_instance(std::uint64_t seed, std::size_t size) {
  Rng rng(seed);
  const std::size_t n = 2 + rng.uniform_int(std::max<std::size_t>(size, 2) - 1);
  const bool dyadic = rng.chance(0.5);
  static constexpr double kDyadicWeights[] = {0.25, 0.5, 1.0, 2.0};
  static constexpr double kExponents[] = {1.0, 1.5, 2.0, 3.0};
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = dyadic ? kDyadicWeights[rng.uniform_int(4)] : 0.1 + 1.9 * rng.uniform01();
    cells.push_back({"c" + std::to_string(i), w});
  }
  const double p = kExponents[rng.uniform_int(4)];
  Space space = Space::make(std::move(cells), p);

  CellSet support;
  for (std::size_t i = 0; i < n; ++i)
    if (rng.chance(0.85)) support.push_back(i);
  if (support.empty()) support.push_back(0);
  const std::size_t labels = 1 + rng.uniform_int(support.size());
  std::map<std::size_t, CellSet> groups;
  for (std::size_t i : support) groups[rng.uniform_int(labels)].push_back(i);
  const bool indicator = rng.chance(0.5);
  std::vector<double> profile(n, 0.0);
  for (std::size_t i : support) profile[i] = indicator ? 1.0 : 0.25 + 1.75 * rng.uniform01();
  std::vector<CellSet> blocks;
  for (auto& [g, cs] : groups) blocks.push_back(std::move(cs));
  Sublattice d = Sublattice::from_blocks(space, std::move(blocks), profile);
  Sublattice b = coarsen(rng, d, indicator);
  Sublattice c = coarsen(rng, b, indicator);

  std::vector<StepFunction> functions;
  for (int t = 0; t < 3; ++t) {
    const std::size_t kind = rng.uniform_int(4);
    std::vector<double> v(n, 0.0);
    auto draw = [&] { return rng.chance(0.2) ? 0.0 : random_value(rng, dyadic); };
    if (kind == 1) {
      std::vector<double> coef(c.block_count());
      for (double& x : coef) x = draw();
      functions.push_back(member(c, coef));
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const bool allowed = kind == 0 || (kind == 2 && !c.in_support(i)) || (kind == 3 && d.in_support(i));
      const double x = draw();
      if (allowed) v[i] = x;
    }
    functions.emplace_back(space, std::move(v));
  }
  return Instance{std::move(space), std::move(d), std::move(b), std::move(c), std::move(functions)};
}

}  // namespace lpi
