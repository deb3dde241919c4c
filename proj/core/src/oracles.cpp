#include "lpi/oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lpi/error.hpp"
#include "lpi/random_instance.hpp"
#include "lpi/refinement.hpp"

namespace lpi::oracles {

namespace {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Reduced row echelon form; returns the nonzero rows.
Matrix rref(Matrix m, double tol) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  Eigen::Index lead = 0;
  for (Eigen::Index c = 0; c < cols && lead < rows; ++c) {
    Eigen::Index best = lead;
    for (Eigen::Index r = lead; r < rows; ++r)
      if (std::abs(m(r, c)) > std::abs(m(best, c))) best = r;
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (std::abs(m(best, c)) <= tol * scale) {
      m.col(c).segment(lead, rows - lead).setZero();
      continue;
    }
    m.row(lead).swap(m.row(best));
    m.row(lead) /= m(lead, c);
    for (Eigen::Index r = 0; r < rows; ++r)
      if (r != lead) m.row(r) -= m(r, c) * m.row(lead);
    ++lead;
  }
  return m.topRows(lead);
}

// Block form of a lattice-closed subspace given by its RREF rows: in a
// sublattice the echelon rows are the block generators, so they must have
// disjoint supports and same-sign entries.
Sublattice from_rref(const Space& space, const Matrix& rows, double tol) {
  std::vector<CellSet> blocks;
  std::vector<double> profile(space.size(), 0.0);
  std::vector<bool> used(space.size(), false);
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    CellSet block;
    for (Eigen::Index c = 0; c < rows.cols(); ++c) {
      const double v = rows(r, c);
      if (std::abs(v) <= tol) continue;
      const auto i = static_cast<std::size_t>(c);
      if (used[i] || v < 0.0) throw Error(Errc::ValidationError, "closure oracle: span is not lattice-closed");
      used[i] = true;
      block.push_back(i);
      profile[i] = v;
    }
    blocks.push_back(std::move(block));
  }
  return Sublattice::from_blocks(space, std::move(blocks), profile);
}

Matrix stack(std::span<const StepFunction> fs, std::size_t n) {
  Matrix m(static_cast<Eigen::Index>(fs.size()), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < fs.size(); ++r)
    for (std::size_t c = 0; c < n; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = fs[r][c];
  return m;
}

double pow_abs(double x, double p) { return std::pow(std::abs(x), p); }

}  // namespace

Sublattice brute_dcl_closure(const Space& space, std::span<const StepFunction> generators, double tol) {
  if (space.size() > kMaxCells || generators.size() > kMaxGenerators)
    throw Error(Errc::GuardExceeded, "closure oracle is limited to 8 cells and 4 generators");
  for (const auto& g : generators) require_same_space(g.space(), space, "brute_dcl_closure");
  const auto n = static_cast<Eigen::Index>(space.size());
  Matrix basis = generators.empty() ? Matrix(0, n) : rref(stack(generators, space.size()), tol);
  for (std::size_t round = 0; round <= space.size() + 1; ++round) {
    std::vector<Vector> grown;
    for (Eigen::Index a = 0; a < basis.rows(); ++a) {
      const Vector u = basis.row(a).transpose();
      grown.push_back(u);
      grown.push_back(u.cwiseMax(0.0));
      for (Eigen::Index b = 0; b < basis.rows(); ++b) {
        if (a == b) continue;
        const Vector v = basis.row(b).transpose();
        for (Eigen::Index i = 0; i < n; ++i) {
          if (std::abs(v(i)) <= tol) continue;
          grown.push_back((u - (u(i) / v(i)) * v).cwiseMax(0.0));
        }
      }
    }
    Matrix all(static_cast<Eigen::Index>(grown.size()), n);
    for (std::size_t r = 0; r < grown.size(); ++r) all.row(static_cast<Eigen::Index>(r)) = grown[r].transpose();
    Matrix next = grown.empty() ? Matrix(0, n) : rref(all, tol);
    const bool stable = next.rows() == basis.rows();
    basis = std::move(next);
    if (stable) break;
  }
  return from_rref(space, basis, tol);
}

Sublattice brute_intersection(const Sublattice& a, const Sublattice& c, double tol) {
  require_same_space(a.space(), c.space(), "brute_intersection");
  const Space& s = a.space();
  const auto n = static_cast<Eigen::Index>(s.size());
  const auto ga = a.generators(), gc = c.generators();
  if (ga.empty() || gc.empty()) return Sublattice::trivial(s);
  const Matrix ma = stack(ga, s.size()).transpose();  // columns are generators
  const Matrix mc = stack(gc, s.size()).transpose();
  Matrix system(n, ma.cols() + mc.cols());
  system << ma, -mc;
  Eigen::FullPivLU<Matrix> lu(system);
  lu.setThreshold(tol);
  const Matrix kernel = lu.kernel();
  if (lu.dimensionOfKernel() == 0) return Sublattice::trivial(s);
  const Matrix common = (ma * kernel.topRows(ma.cols())).transpose();
  return from_rref(s, rref(common, tol), tol);
}

StepFunction slice_by_definition(const StepFunction& f, const Sublattice& c, double r) {
  if (!(r > 0.0 && r < 1.0)) throw Error(Errc::BadR, "r must lie in (0,1)");
  if (c.space().size() > kMaxCells) throw Error(Errc::GuardExceeded, "slice oracle is limited to 8 cells");
  require_same_space(f.space(), c.space(), "slice_by_definition");
  // Largest c >= 0 with nu_B(h >= c) / nu_B > level, h = g / w on the block.
  auto best = [&](const StepFunction& g, std::size_t k, double level) {
    double top = 0.0;
    const double mass = c.block_mass(k);
    std::vector<double> candidates{0.0};
    for (std::size_t i : c.block(k)) candidates.push_back(g[i] / c.profile(i));
    for (double cand : candidates) {
      double above = 0.0;
      for (std::size_t i : c.block(k))
        if (g[i] / c.profile(i) >= cand) above += c.nu(i);
      if (above / mass > level) top = std::max(top, cand);
    }
    return top;
  };
  const StepFunction pos = positive_part(f), neg = negative_part(f);
  std::vector<double> coef(c.block_count());
  for (std::size_t k = 0; k < c.block_count(); ++k) coef[k] = best(pos, k, r) - best(neg, k, 1.0 - r);
  return member(c, coef);
}

double wasserstein_block(std::span<const WeightedPoint> d1, std::span<const WeightedPoint> d2, double p,
                         double tol) {
  auto total = [](std::span<const WeightedPoint> d) {
    return std::accumulate(d.begin(), d.end(), 0.0, [](double s, const WeightedPoint& w) { return s + w.mass; });
  };
  if (!near(total(d1), total(d2), tol)) throw Error(Errc::MassMismatch, "distributions carry different mass");
  std::vector<WeightedPoint> a(d1.begin(), d1.end()), b(d2.begin(), d2.end());
  auto by_value = [](const WeightedPoint& x, const WeightedPoint& y) { return x.value < y.value; };
  std::sort(a.begin(), a.end(), by_value);
  std::sort(b.begin(), b.end(), by_value);
  double cost = 0.0;
  std::size_t i = 0, j = 0;
  double ra = a.empty() ? 0.0 : a[0].mass, rb = b.empty() ? 0.0 : b[0].mass;
  while (i < a.size() && j < b.size()) {
    const double m = std::min(ra, rb);
    cost += m * pow_abs(a[i].value - b[j].value, p);
    ra -= m;
    rb -= m;
    if (ra <= 0.0 && ++i < a.size()) ra = a[i].mass;
    if (rb <= 0.0 && ++j < b.size()) rb = b[j].mass;
  }
  return std::pow(cost, 1.0 / p);
}

double coupling_upper_bounds(const TypeDatum& t1, const TypeDatum& t2, int trials, std::uint64_t seed,
                             double tol) {
  const Sublattice& c = t1.sublattice();
  if (!c.approx_equal(t2.sublattice(), tol))
    throw Error(Errc::SublatticeMismatch, "types live over different sublattices");
  const Space& s = c.space();
  Rng rng(seed);

  auto shuffle_and_cut = [&](std::vector<Segment> segs) {
    std::vector<Segment> out;
    for (const auto& seg : segs) {
      if (rng.chance(0.5)) {
        const double cut = 0.1 + 0.8 * rng.uniform01();
        out.push_back({seg.length * cut, seg.value});
        out.push_back({seg.length * (1.0 - cut), seg.value});
      } else {
        out.push_back(seg);
      }
    }
    for (std::size_t i = out.size(); i > 1; --i) std::swap(out[i - 1], out[rng.uniform_int(i)]);
    return out;
  };

  double best = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < std::max(trials, 1); ++trial) {
    // Per support cell: the pieces of the two (possibly reordered) profiles.
    std::vector<std::vector<double>> fractions(s.size());
    std::vector<std::vector<SegmentPair>> pieces(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto k = c.block_of(i);
      if (!k) continue;
      auto a = t1.profile.blocks[*k].segments;
      auto b = t2.profile.blocks[*k].segments;
      if (trial > 0) {
        a = shuffle_and_cut(std::move(a));
        b = shuffle_and_cut(std::move(b));
      }
      pieces[i] = overlay(a, b);
      for (const auto& pc : pieces[i]) fractions[i].push_back(pc.length);
      if (fractions[i].size() == 1) fractions[i].clear();
    }
    Refinement r = split_cells(s, fractions, 1e-6);
    // Orthogonal parts: aligned (trial 0), crossed, or on separate cells.
    const std::size_t mode = trial == 0 ? 0 : rng.uniform_int(3);
    std::vector<std::pair<double, double>> orth;
    if (mode == 0) {
      orth = {{t1.orth_pos, t2.orth_pos}, {-t1.orth_neg, -t2.orth_neg}};
    } else if (mode == 1) {
      orth = {{t1.orth_pos, -t2.orth_neg}, {-t1.orth_neg, t2.orth_pos}};
    } else {
      orth = {{t1.orth_pos, 0.0}, {-t1.orth_neg, 0.0}, {0.0, t2.orth_pos}, {0.0, -t2.orth_neg}};
    }
    std::vector<Cell> extra;
    for (std::size_t o = 0; o < orth.size(); ++o) extra.push_back({"fresh#" + std::to_string(o), 1.0});
    for (auto& cell : extra) cell.id = unused_id(r.child(), cell.id);
    r = r.then(add_fresh_cells(r.child(), extra));
    std::vector<double> f(r.child().size(), 0.0), g(r.child().size(), 0.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (pieces[i].empty()) continue;
      const auto& ch = r.children(i);
      for (std::size_t m = 0; m < ch.size(); ++m) {
        f[ch[m]] = pieces[i][m].v1 * c.profile(i);
        g[ch[m]] = pieces[i][m].v2 * c.profile(i);
      }
    }
    for (std::size_t o = 0; o < orth.size(); ++o) {
      f[r.fresh()[o]] = orth[o].first;
      g[r.fresh()[o]] = orth[o].second;
    }
    const double d = norm(StepFunction(r.child(), f) - StepFunction(r.child(), g));
    best = std::min(best, d);
  }
  return best;
}

}  // namespace lpi::oracles
