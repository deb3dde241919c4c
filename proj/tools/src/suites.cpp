#include "lpi/tools/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <type_traits>
#include <variant>

#include "lpi/error.hpp"
#include "lpi/independence.hpp"
#include "lpi/oracles.hpp"
#include "lpi/random_instance.hpp"
#include "lpi/realization.hpp"
#include "lpi/tools/fixtures.hpp"

namespace lpi::suites {

namespace {

using io::Json;

class Recorder {
 public:
  explicit Recorder(std::string name) { result_.name = std::move(name); }

  void begin() {
    failed_ = false;
    first_.clear();
    ++result_.instances;
  }

  bool check(bool ok, const std::string& what) {
    if (!ok && !failed_) {
      failed_ = true;
      first_ = what;
    }
    return ok;
  }

  void error(const std::exception& e) { check(false, std::string("exception: ") + e.what()); }

  void end(const std::function<Json()>& replay) {
    if (!failed_) return;
    ++result_.failures;
    if (result_.replay) return;
    result_.message = first_;
    try {
      Json doc = replay();
      doc["note"] = first_;
      result_.replay = std::move(doc);
    } catch (const std::exception& e) {
      result_.message += " (replay unavailable: " + std::string(e.what()) + ")";
    }
  }

  Result finish() { return std::move(result_); }

 private:
  Result result_;
  bool failed_ = false;
  std::string first_;
};

std::string label(std::uint64_t seed, const std::string& what) { return "seed " + std::to_string(seed) + ": " + what; }

Json instance_scenario(const Instance& in, Json commands, const Json& extra = Json::object()) {
  Json functions = Json::object();
  for (std::size_t i = 0; i < in.functions.size(); ++i) functions["f" + std::to_string(i)] = io::to_json(in.functions[i]);
  for (const auto& [name, f] : extra.items()) functions[name] = f;
  return {{"space", io::to_json(in.space)},
          {"functions", std::move(functions)},
          {"sublattices", {{"C", io::to_json(in.c)}, {"B", io::to_json(in.b)}, {"D", io::to_json(in.d)}}},
          {"commands", std::move(commands)}};
}

struct Named {
  const char* name;
  const Sublattice* lattice;
};

std::vector<Named> chain(const Instance& in) { return {{"C", &in.c}, {"B", &in.b}, {"D", &in.d}}; }

bool within(const StepFunction& f, const StepFunction& g, double tol) { return approx_equal(f, g, tol); }

template <class Body>
Result random_suite(const std::string& name, const Config& cfg, Body body) {
  Recorder rec(name);
  for (std::size_t i = 0; i < cfg.trials; ++i) {
    const std::uint64_t seed = instance_seed(cfg.seed, i);
    const Instance in = random_instance(seed, cfg.size);
    Json commands = Json::array(), extra = Json::object();
    rec.begin();
    try {
      if constexpr (std::is_invocable_v<Body, Recorder&, const Instance&, std::uint64_t, Json&, Json&>)
        body(rec, in, seed, commands, extra);
      else
        body(rec, in, seed, commands);
    } catch (const std::exception& e) {
      rec.error(e);
    }
    rec.end([&] { return instance_scenario(in, commands, extra); });
  }
  return rec.finish();
}

std::vector<StepFunction> lift_all(std::span<const StepFunction> fs, const Refinement& r) {
  std::vector<StepFunction> out;
  for (const auto& f : fs) out.push_back(lift(f, r));
  return out;
}

// Transport cost of the sorted coupling computed directly from the functions.
double sorted_coupling_distance(const StepFunction& f, const StepFunction& g, const Sublattice& c) {
  const double p = c.space().p();
  double total = 0.0;
  for (std::size_t k = 0; k < c.block_count(); ++k) {
    std::vector<oracles::WeightedPoint> a, b;
    for (std::size_t i : c.block(k)) {
      a.push_back({f[i] / c.profile(i), c.nu(i)});
      b.push_back({g[i] / c.profile(i), c.nu(i)});
    }
    total += std::pow(oracles::wasserstein_block(a, b, p), p);
  }
  const BandParts fp = band_decompose(f, c), gp = band_decompose(g, c);
  total += std::pow(std::abs(norm(positive_part(fp.orth)) - norm(positive_part(gp.orth))), p);
  total += std::pow(std::abs(norm(negative_part(fp.orth)) - norm(negative_part(gp.orth))), p);
  return std::pow(total, 1.0 / p);
}

std::vector<double> midpoints(const SliceProfile& profile) {
  std::vector<double> cuts = profile.breakpoints();
  cuts.insert(cuts.begin(), 0.0);
  cuts.push_back(1.0);
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] - cuts[i] > 1e-9) out.push_back(0.5 * (cuts[i] + cuts[i + 1]));
  return out;
}

Json fn_ref(const std::string& op, const std::string& f, const std::string& c) {
  return {{"op", op}, {"f", f}, {"C", c}};
}

}  // namespace

std::uint64_t instance_seed(std::uint64_t base, std::size_t i) { return base * 1000003ULL + i; }

Json three_intervals_scenario(double p) {
  const auto t = fixtures::three_intervals(p);
  Json commands = Json::array();
  commands.push_back({{"op", "condexp"}, {"f", "f"}, {"C", "B"}, {"expect", io::to_json(StepFunction::constant(t.space, 1.0))}});
  commands.push_back({{"op", "condexp"}, {"f", "f"}, {"C", "C"}, {"expect", io::to_json(StepFunction::constant(t.space, 1.0))}});
  commands.push_back({{"op", "condexp"}, {"f", "tail"}, {"C", "B"}, {"expect", io::to_json(t.tail)}});
  commands.push_back(
      {{"op", "condexp"}, {"f", "tail"}, {"C", "C"}, {"expect", io::to_json(StepFunction::constant(t.space, 1.0 / 3.0))}});
  commands.push_back({{"op", "indep"}, {"A", "A"}, {"B", "B"}, {"C", "C"}, {"expect", false}});
  return {{"space", io::to_json(t.space)},
          {"functions", {{"f", io::to_json(t.f)}, {"tail", io::to_json(t.tail)}}},
          {"sublattices", {{"A", {{"generators", {"f"}}}}, {"B", io::to_json(t.b)}, {"C", io::to_json(t.c)}}},
          {"commands", std::move(commands)}};
}

Json quarters_scenario(double p) {
  const auto q = fixtures::quarters(p);
  Json commands = Json::array();
  commands.push_back({{"op", "indep"}, {"A", "a1"}, {"B", "a3"}, {"C", "C"}, {"expect", true}});
  commands.push_back({{"op", "indep"}, {"A", "a2"}, {"B", "a3"}, {"C", "C"}, {"expect", true}});
  commands.push_back({{"op", "indep"}, {"A", {"a1", "a2"}}, {"B", "a3"}, {"C", "C"}, {"expect", false}});
  return {{"space", io::to_json(q.space)},
          {"functions", {{"a1", io::to_json(q.a1)}, {"a2", io::to_json(q.a2)}, {"a3", io::to_json(q.a3)}}},
          {"sublattices", {{"C", io::to_json(q.c)}}},
          {"commands", std::move(commands)}};
}

Result three_intervals(const Config& cfg) {
  Recorder rec("three-intervals fixture");
  constexpr double kExact = 1e-12;
  for (double p : {1.0, 2.0}) {
    rec.begin();
    try {
      const auto t = fixtures::three_intervals(p);
      const std::string at = "p=" + std::to_string(p) + ": ";
      for (double alpha : {1.0, -2.0, 0.5}) {
        const StepFunction g = alpha * t.f, want = StepFunction::constant(t.space, alpha);
        rec.check(within(cond_exp(g, t.b), want, kExact), at + "E_B(alpha f) != alpha");
        rec.check(within(cond_exp(g, t.c), want, kExact), at + "E_C(alpha f) != alpha");
      }
      rec.check(within(cond_exp(t.tail, t.b), t.tail, kExact), at + "E_B(tail) != tail");
      rec.check(within(cond_exp(t.tail, t.c), StepFunction::constant(t.space, 1.0 / 3.0), kExact),
                at + "E_C(tail) != 1/3");
      const IndependenceVerdict v = star_independent(dcl(t.space, std::vector{t.f}, cfg.tol), t.b, t.c, cfg.tol);
      rec.check(!v.independent, at + "A reported independent from B over C");
      const auto* w = v.witness ? std::get_if<ExpectationWitness>(&*v.witness) : nullptr;
      rec.check(w && within(w->element, t.tail, kExact), at + "witness is not chi(2,3]");
    } catch (const std::exception& e) {
      rec.error(e);
    }
    rec.end([&] { return three_intervals_scenario(p); });
  }
  return rec.finish();
}

Result quarters(const Config& cfg) {
  Recorder rec("quarters fixture");
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    rec.begin();
    try {
      const auto q = fixtures::quarters(p);
      const std::string at = "p=" + std::to_string(p) + ": ";
      const std::vector<StepFunction> a1{q.a1}, a2{q.a2}, a3{q.a3}, both{q.a1, q.a2};
      const Sublattice b = dcl(q.space, a3, cfg.tol);
      rec.check(star_independent(a1, b, q.c, cfg.tol).independent, at + "a1 not independent from a3");
      rec.check(star_independent(a2, b, q.c, cfg.tol).independent, at + "a2 not independent from a3");
      const IndependenceVerdict v = star_independent(both, b, q.c, cfg.tol);
      rec.check(!v.independent, at + "(a1, a2) reported independent from a3");
      const auto* w = v.witness ? std::get_if<ExpectationWitness>(&*v.witness) : nullptr;
      rec.check(w && within(w->element, q.q1, 1e-12), at + "witness is not chi(q1)");
    } catch (const std::exception& e) {
      rec.error(e);
    }
    rec.end([&] { return quarters_scenario(p); });
  }
  return rec.finish();
}

Result slice_integrals(const Config& cfg) {
  return random_suite("slice integrals", cfg, [&](Recorder& rec, const Instance& in, std::uint64_t seed, Json& cmds) {
    const double p = in.space.p();
    for (const auto& [cname, c] : chain(in))
      for (std::size_t k = 0; k < in.functions.size(); ++k) {
        const StepFunction& f = in.functions[k];
        const std::string fname = "f" + std::to_string(k);
        const SliceProfile prof = slice_profile(f, *c, cfg.tol);
        const StepFunction integral = integrate_slices(prof);
        if (!rec.check(norm(cond_exp(f, *c) - integral) <= 1e-9,
                       label(seed, "E_" + std::string(cname) + "(" + fname + ") != integral of slices"))) {
          Json cmd = fn_ref("condexp", fname, cname);
          cmd["expect"] = io::to_json(integral);
          cmds.push_back(cmd);
        }
        const double band = norm_pow(band_decompose(f, *c).band);
        if (!rec.check(std::abs(band - integrate_slice_norm_pow(prof)) <= 1e-9 * (1.0 + std::pow(norm(f), p)),
                       label(seed, "band norm of " + fname + " over " + cname + " != integral of slice norms")))
          cmds.push_back(fn_ref("profile", fname, cname));
      }
  });
}

Result type_distance(const Config& cfg) {
  return random_suite("type distance", cfg, [&](Recorder& rec, const Instance& in, std::uint64_t seed, Json& cmds) {
    for (const auto& [cname, c] : chain(in)) {
      if (std::string(cname) == "D") continue;
      std::vector<TypeDatum> t;
      for (const auto& f : in.functions) t.push_back(type_datum(f, *c, cfg.tol));
      auto d = [&](std::size_t i, std::size_t j) { return distance(t[i], t[j], cfg.tol); };
      const std::string at = std::string(" over ") + cname;
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
          const double dij = d(i, j);
          const std::string pair = "f" + std::to_string(i) + ", f" + std::to_string(j);
          const double oracle = sorted_coupling_distance(in.functions[i], in.functions[j], *c);
          if (!rec.check(std::abs(dij - oracle) <= 1e-9 * std::max(1.0, oracle),
                         label(seed, "distance(" + pair + ")" + at + " differs from the sorted coupling")))
            cmds.push_back({{"op", "dist"}, {"f", "f" + std::to_string(i)}, {"g", "f" + std::to_string(j)}, {"C", cname},
                            {"expect", oracle}});
          rec.check(std::abs(dij - d(j, i)) <= 1e-9, label(seed, "distance not symmetric for " + pair + at));
          if (i == j) rec.check(dij <= 1e-9, label(seed, "distance(f, f) != 0" + at));
          for (std::size_t k = 0; k < 3; ++k)
            rec.check(dij <= d(i, k) + d(k, j) + 1e-9, label(seed, "triangle inequality fails" + at));
          if (i < j) {
            const double bound = oracles::coupling_upper_bounds(t[i], t[j], 8, seed + i * 3 + j, cfg.tol);
            rec.check(dij <= bound + 1e-9, label(seed, "sampled coupling beats the distance for " + pair + at));
            const Realization both = canonical_realization_pair(t[i], t[j], cfg.tol);
            const double iso = norm(both.functions[0] - both.functions[1]);
            rec.check(std::abs(dij - iso) <= 1e-9 * std::max(1.0, iso),
                      label(seed, "canonical realizations are not at the type distance for " + pair + at));
          }
        }
    }
  });
}

Result slice_definition(const Config& cfg) {
  return random_suite("slice definition", cfg, [&](Recorder& rec, const Instance& in, std::uint64_t seed, Json& cmds) {
    Rng rng(seed ^ 0x5bd1e995ULL);
    for (const auto& [cname, c] : chain(in))
      for (std::size_t k = 0; k < in.functions.size(); ++k) {
        const StepFunction& f = in.functions[k];
        const std::string fname = "f" + std::to_string(k), at = " for " + fname + " over " + cname;
        const SliceProfile prof = slice_profile(f, *c, cfg.tol);
        const auto cuts = prof.breakpoints(cfg.tol);
        const int samples = in.space.size() <= oracles::kMaxCells ? 5 : 0;
        for (int s = 0; s < samples; ++s) {
          double r;
          do {
            r = 1e-3 + (1.0 - 2e-3) * rng.uniform01();
          } while (std::any_of(cuts.begin(), cuts.end(), [&](double b) { return std::abs(b - r) < 1e-6; }));
          const StepFunction want = oracles::slice_by_definition(f, *c, r);
          if (!rec.check(within(prof.slice(r), want, 1e-9), label(seed, "slice differs from the definition" + at))) {
            Json cmd = fn_ref("slice", fname, cname);
            cmd["r"] = r;
            cmd["expect"] = io::to_json(want);
            cmds.push_back(cmd);
          }
        }
        const SliceProfile pos = slice_profile(positive_part(f), *c, cfg.tol);
        const SliceProfile neg = slice_profile(negative_part(f), *c, cfg.tol);
        std::vector<double> coef_prev;
        for (double r : midpoints(prof)) {
          const StepFunction s = prof.slice(r);
          const StepFunction sp = pos.slice(r), sn = neg.slice(1.0 - r);
          rec.check(within(positive_part(s), sp, 1e-12), label(seed, "S_r(f)+ != S_r(f+)" + at));
          rec.check(within(negative_part(s), sn, 1e-12), label(seed, "S_r(f)- != S_(1-r)(f-)" + at));
          rec.check(meet(sp, sn).is_zero(1e-12), label(seed, "S_r(f+) and S_(1-r)(f-) not disjoint" + at));
          std::vector<double> coef(c->block_count());
          for (std::size_t b = 0; b < coef.size(); ++b) coef[b] = prof.blocks[b].value_at(r);
          for (std::size_t b = 0; b < coef_prev.size(); ++b)
            rec.check(coef[b] <= coef_prev[b], label(seed, "slices increase in r" + at));
          coef_prev = coef;
        }
      }
  });
}

Result expectation(const Config& cfg) {
  return random_suite("conditional expectation", cfg, [&](Recorder& rec, const Instance& in, std::uint64_t seed,
                                                          Json& cmds) {
    Rng rng(seed ^ 0x2545f491ULL);
    const Space two = in.space.with_exponent(2.0);
    for (const auto& [cname, c] : chain(in)) {
      for (std::size_t k = 0; k < in.functions.size(); ++k) {
        const StepFunction& f = in.functions[k];
        const std::string fname = "f" + std::to_string(k), at = " for " + fname + " over " + cname;
        const StepFunction e = cond_exp(f, *c);
        bool ok = rec.check(contains(*c, e, 1e-9).has_value(), label(seed, "E(f) not in C" + at));
        ok &= rec.check(within(cond_exp(e, *c), e, 1e-9), label(seed, "E is not a projection" + at));
        ok &= rec.check(norm(e) <= norm(f) + 1e-9, label(seed, "E is not contractive" + at));
        const StepFunction ea = cond_exp(abs(f), *c);
        ok &= rec.check(std::all_of(ea.values().begin(), ea.values().end(), [](double v) { return v >= -1e-12; }),
                        label(seed, "E is not positive" + at));
        ok &= rec.check(cond_exp(band_decompose(f, *c).orth, *c).is_zero(1e-12),
                        label(seed, "E does not vanish on the orthogonal band" + at));
        const StepFunction& g = in.functions[(k + 1) % in.functions.size()];
        const double a = random_value(rng, false), b = random_value(rng, false);
        ok &= rec.check(within(cond_exp(a * f + b * g, *c), a * e + b * cond_exp(g, *c), 1e-9),
                        label(seed, "E is not linear" + at));
        if (!ok) cmds.push_back(fn_ref("condexp", fname, cname));

        // Residual orthogonality in the p = 2 presentation.
        const Sublattice c2 = rebase(*c, two);
        const StepFunction f2 = rebase(f, two);
        const StepFunction residual = f2 - cond_exp(f2, c2);
        for (std::size_t blk = 0; blk < c2.block_count(); ++blk) {
          const StepFunction gen = c2.generator(blk);
          double inner = 0.0;
          for (std::size_t i = 0; i < two.size(); ++i) inner += two.weight(i) * residual[i] * gen[i];
          rec.check(std::abs(inner) <= 1e-9 * std::max(1.0, norm(f2) * norm(gen)),
                    label(seed, "p=2 residual not orthogonal to C" + at));
        }
      }
    }
  });
}

Result independence_axioms(const Config& cfg) {
  return random_suite("independence axioms", cfg, [&](Recorder& rec, const Instance& in, std::uint64_t seed,
                                                      Json& cmds) {
    const double tol = cfg.tol;
    auto indep = [&](const Sublattice& a, const Sublattice& b, const Sublattice& c) {
      return star_independent(a, b, c, tol).independent;
    };
    const std::vector<StepFunction> pair{in.functions[0], in.functions[1]};

    // Independent tuples from non-forking extensions, over B and over D.
    const Realization ext_b = nonforking_extension(pair, in.c, in.b, tol);
    const Realization ext_d = nonforking_extension(pair, in.c, in.d, tol);

    struct Setting {
      std::string name;
      Space space;
      std::vector<StepFunction> fs;
      Sublattice c, b, d;
    };
    std::vector<Setting> settings;
    settings.push_back({"original", in.space, in.functions, in.c, in.b, in.d});
    for (const auto* ext : {&ext_b, &ext_d}) {
      const Refinement& r = ext->refinement;
      std::vector<StepFunction> fs = ext->functions;
      fs.push_back(lift(in.functions[2], r));
      settings.push_back({ext == &ext_b ? "extension over B" : "extension over D", r.child(), std::move(fs),
                          lift(in.c, r), lift(in.b, r), lift(in.d, r)});
    }

    // Extension postconditions.
    for (const auto* ext : {&ext_b, &ext_d}) {
      const Refinement& r = ext->refinement;
      const Sublattice& target = ext == &ext_b ? in.b : in.d;
      if (!rec.check(tuple_type_equal(ext->functions, lift_all(pair, r), lift(in.c, r), tol),
                     label(seed, "extension changed the type over C")) ||
          !rec.check(star_independent(ext->functions, lift(target, r), lift(in.c, r), tol).independent,
                     label(seed, "extension is not independent")))
        cmds.push_back({{"op", "extend"}, {"f", {"f0", "f1"}}, {"C", "C"}, {"B", ext == &ext_b ? "B" : "D"}});
    }

    for (const auto& st : settings) {
      const std::string at = " (" + st.name + ")";
      const Sublattice a1 = dcl(st.space, std::vector{st.fs[0]}, tol);
      const Sublattice a2 = dcl(st.space, std::vector{st.fs[0], st.fs[1]}, tol);
      for (const Sublattice* a : {&a1, &a2}) {
        const bool ab = indep(*a, st.b, st.c);
        if (!rec.check(ab == indep(st.b, *a, st.c), label(seed, "symmetry fails" + at)) && st.name == "original") {
          cmds.push_back({{"op", "indep"}, {"A", a == &a1 ? Json("f0") : Json({"f0", "f1"})}, {"B", "B"}, {"C", "C"},
                          {"expect", !ab}});
          cmds.push_back({{"op", "indep"}, {"A", "B"}, {"B", a == &a1 ? Json("f0") : Json({"f0", "f1"})}, {"C", "C"}});
        }
        const bool ad = indep(*a, st.d, st.c), bd = indep(*a, st.d, st.b);
        if (!rec.check(ad == (ab && bd), label(seed, "transitivity over C <= B <= D fails" + at)) &&
            st.name == "original")
          cmds.push_back({{"op", "indep"}, {"A", "f0"}, {"B", "D"}, {"C", "C"}, {"expect", ab && bd}});
      }
      // Finite character over generator subsets.
      const bool all = star_independent(st.fs, st.b, st.c, tol).independent;
      bool each = true;
      for (std::size_t mask = 1; mask < (1u << st.fs.size()); ++mask) {
        std::vector<StepFunction> sub;
        for (std::size_t i = 0; i < st.fs.size(); ++i)
          if (mask & (1u << i)) sub.push_back(st.fs[i]);
        each = each && star_independent(sub, st.b, st.c, tol).independent;
      }
      rec.check(all == each, label(seed, "finite character fails" + at));
      // Slice criterion against the expectation criterion.
      for (std::size_t i = 0; i < st.fs.size(); ++i) {
        const std::vector<StepFunction> one{st.fs[i]};
        for (const auto& [big, small] : {std::pair{&st.b, &st.c}, std::pair{&st.d, &st.b}, std::pair{&st.d, &st.c}}) {
          const bool by_slices = slice_independent(st.fs[i], *big, *small, tol).independent;
          if (!rec.check(by_slices == star_independent(one, *big, *small, tol).independent,
                         label(seed, "slice and expectation criteria disagree" + at)) &&
              st.name == "original")
            cmds.push_back({{"op", "indep"}, {"method", "slice"}, {"A", "f" + std::to_string(i)},
                            {"B", big == &st.b ? "B" : "D"}, {"C", small == &st.c ? "C" : "B"}});
        }
      }
    }

    // p-invariance of the verdicts.
    const Sublattice a2 = dcl(in.space, pair, tol);
    const bool base_verdict = indep(a2, in.b, in.c);
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      const Space sp = in.space.with_exponent(p);
      rec.check(indep(rebase(a2, sp), rebase(in.b, sp), rebase(in.c, sp)) == base_verdict,
                label(seed, "verdict depends on p"));
    }

    // Stationarity: two independent realizations on unrelated refinements.
    std::vector<std::vector<double>> fr(in.space.size());
    for (auto& v : fr) v = {0.5, 0.3, 0.2};
    const Refinement pre = split_cells(in.space, fr);
    const Realization other = nonforking_extension(lift_all(pair, pre), lift(in.c, pre), lift(in.b, pre), tol);
    const CommonRefinement common = common_refinement(ext_b.refinement, pre.then(other.refinement));
    const Refinement to_common = ext_b.refinement.then(common.from_first);
    const StationarityResult st = stationarity_check(lift_all(ext_b.functions, common.from_first),
                                                     lift_all(other.functions, common.from_second),
                                                     lift(in.c, to_common), lift(in.b, to_common), tol);
    rec.check(st.hypotheses_met, label(seed, "stationarity hypotheses unexpectedly unmet"));
    rec.check(st.holds, label(seed, "stationarity fails"));
    const StationarityResult raw = stationarity_check(pair, pair, in.c, in.b, tol);
    rec.check(raw.holds, label(seed, "stationarity fails on the input tuple"));
  });
}

Result canonical_bases(const Config& cfg) {
  return random_suite("canonical bases", cfg, [&](Recorder& rec, const Instance& in, std::uint64_t seed, Json& cmds) {
    for (const auto& [aname, a] : {Named{"D", &in.d}, Named{"B", &in.b}}) {
      for (std::size_t n : {1, 2}) {
        const std::vector<StepFunction> fs(in.functions.begin(), in.functions.begin() + static_cast<long>(n));
        const std::string at = " (n=" + std::to_string(n) + " over " + aname + ")";
        const CanonicalBase cb = canonical_base(fs, *a, cfg.tol);
        bool ok = rec.check(is_sublattice_of(cb.base, *a, 1e-9), label(seed, "Cb not inside dcl(A)" + at));
        ok &= rec.check(cb.certified && star_independent(fs, *a, cb.base, cfg.tol).independent,
                        label(seed, "fs not independent from A over Cb" + at));
        if (n == 1 && in.space.size() <= oracles::kMaxCells) {
          std::vector<StepFunction> slices;
          for (double r : midpoints(slice_profile(fs[0], *a, cfg.tol)))
            slices.push_back(oracles::slice_by_definition(fs[0], *a, r));
          ok &= rec.check(cb.base.approx_equal(dcl(in.space, slices, 1e-9), 1e-9),
                          label(seed, "Cb differs from dcl of the slices" + at));
        }
        if (!ok) {
          Json f = n == 1 ? Json("f0") : Json({"f0", "f1"});
          cmds.push_back({{"op", "cb"}, {"f", f}, {"A", aname}, {"expect", true}});
        }
      }
    }
  });
}

Result canonical_base_minimality(const Config& cfg) {
  Recorder rec("canonical base minimality");
  for (const auto& cs : fixtures::curated_base_cases()) {
    rec.begin();
    try {
      const CanonicalBase cb = canonical_base(cs.fs, cs.a, cfg.tol);
      rec.check(cb.certified, cs.name + ": not certified");
      rec.check(cb.base.block_count() > 0, cs.name + ": trivial base");
      for (std::size_t drop = 0; drop < cb.base.block_count(); ++drop) {
        std::vector<StepFunction> keep;
        for (std::size_t k = 0; k < cb.base.block_count(); ++k)
          if (k != drop) keep.push_back(cb.base.generator(k));
        rec.check(!star_independent(cs.fs, cs.a, dcl(cs.a.space(), keep, cfg.tol), cfg.tol).independent,
                  cs.name + ": dropping block " + std::to_string(drop) + " keeps independence");
      }
    } catch (const std::exception& e) {
      rec.error(e);
    }
    rec.end([&] {
      Json functions = Json::object(), names = Json::array();
      for (std::size_t i = 0; i < cs.fs.size(); ++i) {
        functions["f" + std::to_string(i)] = io::to_json(cs.fs[i]);
        names.push_back("f" + std::to_string(i));
      }
      return Json{{"space", io::to_json(cs.a.space())},
                  {"functions", std::move(functions)},
                  {"sublattices", {{"A", io::to_json(cs.a)}}},
                  {"commands", {{{"op", "cb"}, {"f", names}, {"A", "A"}, {"expect", true}}}}};
    });
  }
  return rec.finish();
}

Result maharam(const Config& cfg) {
  return random_suite("maharam selection", cfg, [&](Recorder& rec, const Instance& in, std::uint64_t seed, Json& cmds,
                                                   Json& extra) {
    Rng rng(seed ^ 0x7f4a7c15ULL);
    const auto lattices = chain(in);
    const auto& [cname, c] = lattices[seed % 3];
    CellSet a;
    for (std::size_t i = 0; i < in.space.size(); ++i)
      if (rng.chance(0.6)) a.push_back(i);
    const auto e = cond_exp_coefficients(StepFunction::indicator(in.space, a), *c);
    std::vector<double> tau(e.size());
    for (std::size_t k = 0; k < e.size(); ++k) {
      const std::size_t den = 1 + rng.uniform_int(8);
      tau[k] = e[k] * static_cast<double>(rng.uniform_int(den + 1)) / static_cast<double>(den);
    }
    const StepFunction target = member(*c, tau);
    const CellSelection sel = maharam_select(a, *c, target, cfg.tol);
    const StepFunction got = cond_exp(StepFunction::indicator(sel.space(), sel.cells), lift(*c, sel.refinement));
    const CellSet lifted_a = lift(a, sel.refinement);
    const bool inside = std::includes(lifted_a.begin(), lifted_a.end(), sel.cells.begin(), sel.cells.end());
    const bool hit = within(got, lift(target, sel.refinement), 1e-12);
    rec.check(inside, label(seed, "selection leaves A"));
    if (!rec.check(hit, label(seed, "E(chi_B | C) misses the target"))) {
      Json ids = Json::array();
      for (std::size_t i : a) ids.push_back(in.space.id(i));
      extra["target"] = io::to_json(target);
      cmds.push_back({{"op", "maharam"}, {"cells", ids}, {"C", cname}, {"target", "target"}});
    }
  });
}

Result representation(const Config& cfg) {
  return random_suite("re-presentation invariance", cfg, [&](Recorder& rec, const Instance& in, std::uint64_t seed,
                                                             Json&) {
    Rng rng(seed ^ 0x3c6ef372ULL);
    std::vector<double> dv(in.space.size());
    for (double& x : dv) x = rng.chance(0.5) ? std::ldexp(1.0, static_cast<int>(rng.uniform_int(3)) - 1) : 0.5 + 1.5 * rng.uniform01();
    const DensityChange dc(StepFunction(in.space, dv));
    const double tol = cfg.tol;
    std::vector<StepFunction> nf;
    for (const auto& f : in.functions) nf.push_back(dc.to_new(f));
    const Sublattice nc = transport(in.c, dc), nb = transport(in.b, dc), nd = transport(in.d, dc);
    const std::pair<const Sublattice*, const Sublattice*> lattices[] = {{&in.c, &nc}, {&in.b, &nb}, {&in.d, &nd}};

    for (const auto& [old_l, new_l] : lattices) {
      for (std::size_t k = 0; k < in.functions.size(); ++k) {
        const StepFunction& f = in.functions[k];
        rec.check(within(dc.to_old(cond_exp(nf[k], *new_l)), cond_exp(f, *old_l), 1e-9),
                  label(seed, "conditional expectation does not transport"));
        const SliceProfile prof = slice_profile(f, *old_l, tol);
        const SliceProfile nprof = slice_profile(nf[k], *new_l, tol);
        for (double r : midpoints(prof))
          rec.check(within(dc.to_old(nprof.slice(r)), prof.slice(r), 1e-9), label(seed, "slices do not transport"));
        for (std::size_t j = 0; j < in.functions.size(); ++j) {
          const double d_old = distance(type_datum(f, *old_l, tol), type_datum(in.functions[j], *old_l, tol), tol);
          const double d_new = distance(type_datum(nf[k], *new_l, tol), type_datum(nf[j], *new_l, tol), tol);
          rec.check(std::abs(d_old - d_new) <= 1e-9 * std::max(1.0, d_old), label(seed, "type distance changes"));
          const std::vector<StepFunction> fo{f}, go{in.functions[j]}, fn{nf[k]}, gn{nf[j]};
          rec.check(tuple_type_equal(fo, go, *old_l, tol) == tuple_type_equal(fn, gn, *new_l, tol),
                    label(seed, "type equality verdict changes"));
        }
      }
    }
    const std::vector<StepFunction> pair_old{in.functions[0], in.functions[1]}, pair_new{nf[0], nf[1]};
    const Sublattice a_old = dcl(in.space, pair_old, tol), a_new = dcl(dc.new_space(), pair_new, tol);
    rec.check(transport(a_old, dc).approx_equal(a_new, 1e-9), label(seed, "dcl does not transport"));
    rec.check(star_independent(a_old, in.b, in.c, tol).independent == star_independent(a_new, nb, nc, tol).independent,
              label(seed, "independence verdict changes"));
    rec.check(star_independent(a_old, in.d, in.b, tol).independent == star_independent(a_new, nd, nb, tol).independent,
              label(seed, "independence verdict over B changes"));
    rec.check(slice_independent(in.functions[0], in.b, in.c, tol).independent ==
                  slice_independent(nf[0], nb, nc, tol).independent,
              label(seed, "slice verdict changes"));
    rec.check(intersects_well(a_old, in.c, tol) == intersects_well(a_new, nc, tol),
              label(seed, "good-intersection verdict changes"));
    rec.check(is_sublattice_of(a_old, in.b, tol) == is_sublattice_of(a_new, nb, tol),
              label(seed, "inclusion verdict changes"));
    rec.check(transport(lattice_intersection(a_old, in.b, tol), dc).approx_equal(lattice_intersection(a_new, nb, tol), 1e-9),
              label(seed, "intersection does not transport"));
    const CanonicalBase cb_old = canonical_base(pair_old, in.d, tol), cb_new = canonical_base(pair_new, nd, tol);
    rec.check(transport(cb_old.base, dc).approx_equal(cb_new.base, 1e-9), label(seed, "canonical base does not transport"));
  });
}

Result oracle_agreement(const Config& cfg) {
  return random_suite("oracle agreement", cfg, [&](Recorder& rec, const Instance& in, std::uint64_t seed, Json&) {
    if (in.space.size() > oracles::kMaxCells) return;
    const Sublattice fast = dcl(in.space, in.functions, cfg.tol);
    rec.check(fast.approx_equal(oracles::brute_dcl_closure(in.space, in.functions, 1e-9), 1e-9),
              label(seed, "dcl differs from the closure oracle"));
    const Sublattice a = dcl(in.space, std::vector{in.functions[0], in.functions[1]}, cfg.tol);
    for (const auto& [cname, c] : chain(in))
      rec.check(lattice_intersection(a, *c, cfg.tol).approx_equal(oracles::brute_intersection(a, *c, 1e-9), 1e-8),
                label(seed, std::string("intersection with ") + cname + " differs from the constraint solve"));
  });
}

std::vector<Result> run_all(const Config& cfg) {
  return {three_intervals(cfg),  quarters(cfg),         slice_integrals(cfg),
          type_distance(cfg),    slice_definition(cfg), expectation(cfg),
          independence_axioms(cfg), canonical_bases(cfg), canonical_base_minimality(cfg),
          maharam(cfg),          representation(cfg),   oracle_agreement(cfg)};
}

Json summary(const Config& cfg, const std::vector<Result>& results) {
  Json suites = Json::array();
  bool ok = true;
  for (const auto& r : results) {
    Json entry = {{"name", r.name}, {"instances", r.instances}, {"failures", r.failures},
                  {"status", r.passed() ? "pass" : "fail"}};
    if (!r.message.empty()) entry["message"] = r.message;
    if (r.replay) entry["scenario"] = *r.replay;
    ok = ok && r.passed();
    suites.push_back(std::move(entry));
  }
  return {{"seed", cfg.seed}, {"size", cfg.size}, {"trials", cfg.trials}, {"tol", cfg.tol},
          {"status", ok ? "pass" : "fail"}, {"suites", std::move(suites)}};
}

}  // namespace lpi::suites
