#include "lpi/typespace.hpp"

#include <algorithm>
#include <cmath>

#include "lpi/error.hpp"

namespace lpi {

namespace {

// Cumulative positions closer than this to a breakpoint count as past it.
constexpr double kBreakEps = 1e-12;

double pow_abs(double x, double p) {
  x = std::abs(x);
  if (p == 1.0) return x;
  if (p == 2.0) return x * x;
  return std::pow(x, p);
}

bool near_vec(std::span<const double> a, std::span<const double> b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!near(a[i], b[i], tol)) return false;
  return true;
}

void add_atom(std::vector<Atom>& atoms, std::vector<double> value, double mass, double tol) {
  for (auto& a : atoms)
    if (near_vec(a.value, value, tol)) {
      a.mass += mass;
      return;
    }
  atoms.push_back({std::move(value), mass});
}

void sort_atoms(std::vector<Atom>& atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) { return x.value > y.value; });
}

double mass_near(const std::vector<Atom>& atoms, std::span<const double> v, double tol) {
  double m = 0.0;
  for (const auto& a : atoms)
    if (near_vec(a.value, v, tol)) m += a.mass;
  return m;
}

bool same_law(const std::vector<Atom>& a, const std::vector<Atom>& b, double tol) {
  for (const auto* side : {&a, &b})
    for (const auto& atom : *side)
      if (!near(mass_near(a, atom.value, tol), mass_near(b, atom.value, tol), tol)) return false;
  return true;
}

void require_same_sublattice(const Sublattice& a, const Sublattice& b, double tol) {
  if (!a.approx_equal(b, tol)) throw Error(Errc::SublatticeMismatch, "types live over different sublattices");
}

}  // namespace

std::vector<SegmentPair> overlay(const std::vector<Segment>& a, const std::vector<Segment>& b) {
  std::vector<SegmentPair> out;
  if (a.empty() || b.empty()) return out;
  auto end_of = [](const std::vector<Segment>& segs, std::size_t k, double cum) {
    return k + 1 == segs.size() ? 1.0 : cum + segs[k].length;
  };
  std::size_t i = 0, j = 0;
  double ea = end_of(a, 0, 0.0), eb = end_of(b, 0, 0.0), pos = 0.0;
  while (true) {
    const double next = std::min(ea, eb);
    if (next > pos) out.push_back({next - pos, a[i].value, b[j].value});
    pos = next;
    if (pos >= 1.0) break;
    if (ea <= next + kBreakEps && i + 1 < a.size()) {
      ++i;
      ea = end_of(a, i, ea);
    }
    if (eb <= next + kBreakEps && j + 1 < b.size()) {
      ++j;
      eb = end_of(b, j, eb);
    }
  }
  return out;
}

double BlockProfile::value_at(double r) const {
  double cum = 0.0;
  for (const auto& s : segments) {
    cum += s.length;
    if (cum > r + kBreakEps) return s.value;
  }
  return segments.empty() ? 0.0 : segments.back().value;
}

std::vector<double> BlockProfile::breakpoints() const {
  std::vector<double> out;
  double cum = 0.0;
  for (const auto& s : segments) out.push_back(cum += s.length);
  return out;
}

StepFunction SliceProfile::slice(double r) const {
  std::vector<double> coef(blocks.size());
  for (std::size_t k = 0; k < blocks.size(); ++k) coef[k] = blocks[k].value_at(r);
  return member(sublattice, coef);
}

std::vector<double> SliceProfile::breakpoints(double tol) const {
  std::vector<double> all;
  for (const auto& b : blocks)
    for (double x : b.breakpoints())
      if (x < 1.0 - tol) all.push_back(x);
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  for (double x : all)
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  return out;
}

bool SliceProfile::approx_equal(const SliceProfile& other, double tol) const {
  if (blocks.size() != other.blocks.size()) return false;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    if (!near(blocks[k].mass, other.blocks[k].mass, tol)) return false;
    for (const auto& piece : overlay(blocks[k].segments, other.blocks[k].segments))
      if (piece.length > tol && !near(piece.v1, piece.v2, tol)) return false;
  }
  return true;
}

bool TypeDatum::approx_equal(const TypeDatum& other, double tol) const {
  return profile.approx_equal(other.profile, tol) && near(orth_pos, other.orth_pos, tol) &&
         near(orth_neg, other.orth_neg, tol);
}

bool ConditionalDistribution::approx_equal(const ConditionalDistribution& other, double tol) const {
  if (arity != other.arity || blocks.size() != other.blocks.size()) return false;
  for (std::size_t k = 0; k < blocks.size(); ++k)
    if (!same_law(blocks[k], other.blocks[k], tol)) return false;
  return same_law(orth, other.orth, tol);
}

StepFunction cond_probability(const CellSet& event, const Sublattice& c) {
  std::vector<bool> in(c.space().size(), false);
  for (std::size_t i : event) {
    if (i >= in.size()) throw Error(Errc::UnknownCell, "event cell index out of range");
    in[i] = true;
  }
  std::vector<double> coef(c.block_count(), 0.0);
  for (std::size_t k = 0; k < c.block_count(); ++k) {
    double hit = 0.0;
    for (std::size_t i : c.block(k))
      if (in[i]) hit += c.nu(i);
    coef[k] = hit / c.block_mass(k);
  }
  return member(c, coef);
}

SliceProfile slice_profile(const StepFunction& f, const Sublattice& c, double tol) {
  require_same_space(f.space(), c.space(), "slice_profile");
  SliceProfile out{c, {}};
  out.blocks.reserve(c.block_count());
  for (std::size_t k = 0; k < c.block_count(); ++k) {
    const double mass = c.block_mass(k);
    std::vector<Segment> raw;
    for (std::size_t i : c.block(k)) raw.push_back({c.nu(i) / mass, f[i] / c.profile(i)});
    std::sort(raw.begin(), raw.end(), [](const Segment& a, const Segment& b) { return a.value > b.value; });
    BlockProfile bp{mass, {}};
    double lead = 0.0;  // first value of the current run; merging compares against it
    for (const auto& s : raw) {
      if (!bp.segments.empty() && near(s.value, lead, tol)) {
        Segment& last = bp.segments.back();
        last.value = (last.value * last.length + s.value * s.length) / (last.length + s.length);
        last.length += s.length;
      } else {
        bp.segments.push_back(s);
        lead = s.value;
      }
    }
    out.blocks.push_back(std::move(bp));
  }
  return out;
}

StepFunction slice(const StepFunction& f, const Sublattice& c, double r, double tol) {
  if (!(r > 0.0 && r < 1.0)) throw Error(Errc::BadR, "r must lie in (0,1)");
  return slice_profile(f, c, tol).slice(r);
}

TypeDatum type_datum(const StepFunction& f, const Sublattice& c, double tol) {
  const BandParts parts = band_decompose(f, c);
  return TypeDatum{slice_profile(parts.band, c, tol), norm(positive_part(parts.orth)),
                   norm(negative_part(parts.orth))};
}

ConditionalDistribution cond_distribution(std::span<const StepFunction> fs, const Sublattice& c, double tol) {
  for (const auto& f : fs) require_same_space(f.space(), c.space(), "cond_distribution");
  ConditionalDistribution d{c, fs.size(), std::vector<std::vector<Atom>>(c.block_count()), {}};
  const Space& s = c.space();
  std::vector<double> v(fs.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t t = 0; t < fs.size(); ++t) v[t] = fs[t][i];
    if (auto k = c.block_of(i)) {
      for (double& x : v) x /= c.profile(i);
      add_atom(d.blocks[*k], v, c.nu(i), tol);
    } else if (std::any_of(v.begin(), v.end(), [&](double x) { return std::abs(x) > tol; })) {
      double len = 0.0;
      for (double x : v) len += pow_abs(x, s.p());
      const double scale = std::pow(len, 1.0 / s.p());
      for (double& x : v) x /= scale;
      add_atom(d.orth, v, s.weight(i) * len, tol);
    }
  }
  for (auto& b : d.blocks) sort_atoms(b);
  sort_atoms(d.orth);
  return d;
}

bool tuple_type_equal(std::span<const StepFunction> fs, std::span<const StepFunction> gs, const Sublattice& c,
                      double tol) {
  if (fs.size() != gs.size()) throw Error(Errc::ArityMismatch, "tuples have different lengths");
  return cond_distribution(fs, c, tol).approx_equal(cond_distribution(gs, c, tol), tol);
}

double distance(const TypeDatum& t1, const TypeDatum& t2, double tol) {
  require_same_sublattice(t1.sublattice(), t2.sublattice(), tol);
  const double p = t1.sublattice().space().p();
  double total = 0.0;
  for (std::size_t k = 0; k < t1.profile.blocks.size(); ++k) {
    double block = 0.0;
    for (const auto& piece : overlay(t1.profile.blocks[k].segments, t2.profile.blocks[k].segments))
      block += piece.length * pow_abs(piece.v1 - piece.v2, p);
    total += t1.profile.blocks[k].mass * block;
  }
  total += pow_abs(t1.orth_pos - t2.orth_pos, p) + pow_abs(t1.orth_neg - t2.orth_neg, p);
  return std::pow(total, 1.0 / p);
}

StepFunction integrate_slices(const SliceProfile& profile) {
  std::vector<double> coef(profile.blocks.size(), 0.0);
  for (std::size_t k = 0; k < coef.size(); ++k)
    for (const auto& s : profile.blocks[k].segments) coef[k] += s.length * s.value;
  return member(profile.sublattice, coef);
}

double integrate_slice_norm_pow(const SliceProfile& profile) {
  const double p = profile.sublattice.space().p();
  double total = 0.0;
  for (const auto& b : profile.blocks) {
    double block = 0.0;
    for (const auto& s : b.segments) block += s.length * pow_abs(s.value, p);
    total += b.mass * block;
  }
  return total;
}

}  // namespace lpi
