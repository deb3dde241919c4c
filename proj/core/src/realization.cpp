#include "lpi/realization.hpp"

#include <algorithm>
#include <cmath>

#include "lpi/error.hpp"

namespace lpi {

namespace {

struct OrthCell {
  std::vector<double> values;  // one per realized function
  double weight;
};

// Splits support cells by per-block fractions, then appends fresh cells.
// values[k][m][t]: value of function t on child m of any cell of block k, before
// scaling by the profile.
Realization build(const Sublattice& c, const std::vector<std::vector<double>>& block_fractions,
                  const std::vector<std::vector<std::vector<double>>>& values, std::size_t arity,
                  const std::vector<OrthCell>& orth, const std::string& stem) {
  const Space& s = c.space();
  std::vector<std::vector<double>> fractions(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    if (auto k = c.block_of(i); k && block_fractions[*k].size() > 1) fractions[i] = block_fractions[*k];
  Refinement r = split_cells(s, fractions, 1e-6);

  std::vector<Cell> extra;
  for (const auto& o : orth) {
    Space probe = extra.empty() ? r.child() : add_fresh_cells(r.child(), extra).child();
    extra.push_back({unused_id(probe, stem), o.weight});
  }
  if (!extra.empty()) r = r.then(add_fresh_cells(r.child(), extra));

  const Space& out_space = r.child();
  std::vector<std::vector<double>> out(arity, std::vector<double>(out_space.size(), 0.0));
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto k = c.block_of(i);
    if (!k) continue;
    const auto& ch = r.children(i);
    for (std::size_t m = 0; m < ch.size(); ++m)
      for (std::size_t t = 0; t < arity; ++t) out[t][ch[m]] = values[*k][m][t] * c.profile(i);
  }
  for (std::size_t o = 0; o < orth.size(); ++o)
    for (std::size_t t = 0; t < arity; ++t) out[t][r.fresh()[o]] = orth[o].values[t];

  std::vector<StepFunction> fs;
  for (auto& v : out) fs.emplace_back(out_space, std::move(v));
  return Realization{std::move(r), std::move(fs)};
}

std::vector<OrthCell> orth_cells(std::span<const std::pair<double, double>> pos_neg) {
  std::vector<OrthCell> out;
  // pos_neg[t] = (orth_pos, orth_neg) of function t
  for (int sign : {1, -1}) {
    OrthCell cell{std::vector<double>(pos_neg.size(), 0.0), 1.0};
    bool any = false;
    for (std::size_t t = 0; t < pos_neg.size(); ++t) {
      const double v = sign > 0 ? pos_neg[t].first : -pos_neg[t].second;
      cell.values[t] = v;
      any = any || v != 0.0;
    }
    if (any) out.push_back(std::move(cell));
  }
  return out;
}

}  // namespace

Realization canonical_realization(const TypeDatum& t) {
  const Sublattice& c = t.sublattice();
  std::vector<std::vector<double>> fractions(c.block_count());
  std::vector<std::vector<std::vector<double>>> values(c.block_count());
  for (std::size_t k = 0; k < c.block_count(); ++k)
    for (const auto& seg : t.profile.blocks[k].segments) {
      fractions[k].push_back(seg.length);
      values[k].push_back({seg.value});
    }
  const std::pair<double, double> pn{t.orth_pos, t.orth_neg};
  return build(c, fractions, values, 1, orth_cells({&pn, 1}), "orth");
}

Realization canonical_realization_pair(const TypeDatum& t1, const TypeDatum& t2, double tol) {
  const Sublattice& c = t1.sublattice();
  if (!c.approx_equal(t2.sublattice(), tol))
    throw Error(Errc::SublatticeMismatch, "types live over different sublattices");
  std::vector<std::vector<double>> fractions(c.block_count());
  std::vector<std::vector<std::vector<double>>> values(c.block_count());
  for (std::size_t k = 0; k < c.block_count(); ++k)
    for (const auto& piece : overlay(t1.profile.blocks[k].segments, t2.profile.blocks[k].segments)) {
      fractions[k].push_back(piece.length);
      values[k].push_back({piece.v1, piece.v2});
    }
  const std::pair<double, double> pn[2] = {{t1.orth_pos, t1.orth_neg}, {t2.orth_pos, t2.orth_neg}};
  return build(c, fractions, values, 2, orth_cells(pn), "orth");
}

CellSelection maharam_select(const CellSet& a, const Sublattice& c, const StepFunction& target, double tol) {
  require_same_space(target.space(), c.space(), "maharam_select");
  const Space& s = c.space();
  const auto tau = contains(c, target, tol);
  if (!tau) throw Error(Errc::TargetOutOfRange, "target is not a member of the sublattice");
  const auto e = cond_exp_coefficients(StepFunction::indicator(s, a), c);

  std::vector<double> theta(c.block_count(), 0.0);
  for (std::size_t k = 0; k < c.block_count(); ++k) {
    const double t = (*tau)[k];
    if (t < -tol || t > e[k] + tol * std::max(1.0, e[k]))
      throw Error(Errc::TargetOutOfRange, "target outside [0, E(chi_A | C)] on a block");
    theta[k] = e[k] > 0.0 ? std::clamp(t / e[k], 0.0, 1.0) : 0.0;
  }

  std::vector<std::vector<double>> fractions(s.size());
  std::vector<int> keep(s.size(), 0);  // 0 none, 1 whole cell, 2 first child
  for (std::size_t i : a) {
    if (i >= s.size()) throw Error(Errc::UnknownCell, "cell index out of range");
    const auto k = c.block_of(i);
    if (!k) continue;
    const double th = theta[*k];
    if (th >= 1.0 - 1e-15) {
      keep[i] = 1;
    } else if (th > 1e-15) {
      fractions[i] = {th, 1.0 - th};
      keep[i] = 2;
    }
  }
  Refinement r = split_cells(s, fractions, tol);
  CellSet chosen;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (keep[i] == 1) {
      const auto& ch = r.children(i);
      chosen.insert(chosen.end(), ch.begin(), ch.end());
    } else if (keep[i] == 2) {
      chosen.push_back(r.children(i).front());
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return CellSelection{std::move(r), std::move(chosen)};
}

Realization realize_cond_distribution(const ConditionalDistribution& d, double tol) {
  const Sublattice& c = d.sublattice;
  if (d.blocks.size() != c.block_count())
    throw Error(Errc::InvalidDistribution, "one atom list per block required");
  std::vector<std::vector<double>> fractions(c.block_count());
  std::vector<std::vector<std::vector<double>>> values(c.block_count());
  for (std::size_t k = 0; k < c.block_count(); ++k) {
    const double mass = c.block_mass(k);
    double sum = 0.0;
    for (const auto& atom : d.blocks[k]) {
      if (atom.value.size() != d.arity) throw Error(Errc::InvalidDistribution, "atom arity mismatch");
      if (!(atom.mass >= 0.0) || !std::isfinite(atom.mass))
        throw Error(Errc::InvalidDistribution, "negative atom mass");
      sum += atom.mass;
      if (atom.mass == 0.0) continue;
      fractions[k].push_back(atom.mass / mass);
      values[k].push_back(atom.value);
    }
    if (!near(sum, mass, tol))
      throw Error(Errc::InvalidDistribution,
                  "block masses sum to " + std::to_string(sum) + ", expected " + std::to_string(mass));
  }
  std::vector<OrthCell> orth;
  for (const auto& atom : d.orth) {
    if (atom.value.size() != d.arity) throw Error(Errc::InvalidDistribution, "atom arity mismatch");
    if (!(atom.mass >= 0.0) || !std::isfinite(atom.mass))
      throw Error(Errc::InvalidDistribution, "negative atom mass");
    if (std::all_of(atom.value.begin(), atom.value.end(), [&](double v) { return std::abs(v) <= tol; }))
      throw Error(Errc::InvalidDistribution, "orthogonal part carries mass at the origin");
    if (atom.mass > 0.0) orth.push_back({atom.value, atom.mass});
  }
  return build(c, fractions, values, d.arity, orth, "orth");
}

}  // namespace lpi
