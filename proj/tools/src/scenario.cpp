#include "lpi/tools/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "lpi/error.hpp"
#include "lpi/independence.hpp"
#include "lpi/realization.hpp"

namespace lpi::scenario {

namespace {

using io::Json;

[[noreturn]] void invalid(const std::string& what) { throw Error(Errc::ValidationError, what); }

class Runner {
 public:
  Runner(const Json& doc, double tol) : tol_(tol), space_(io::space_from_json(require(doc, "space", "scenario"))) {
    if (doc.contains("functions")) {
      const Json& fs = doc.at("functions");
      if (!fs.is_object()) invalid("scenario.functions must be an object");
      for (const auto& [name, f] : fs.items()) functions_.emplace(name, io::function_from_json(f, space_));
    }
    if (doc.contains("sublattices")) {
      const Json& ss = doc.at("sublattices");
      if (!ss.is_object()) invalid("scenario.sublattices must be an object");
      for (const auto& [name, s] : ss.items())
        sublattices_.emplace(name, io::sublattice_from_json(s, space_, functions_, tol_));
    }
  }

  Outcome run(const Json& commands) {
    if (!commands.is_array()) invalid("scenario.commands must be an array");
    // Resolve every reference before running anything.
    check_references(commands);
    Json results = Json::array();
    bool ok = true;
    for (std::size_t idx = 0; idx < commands.size() && ok; ++idx) {
      const Json& cmd = commands[idx];
      Json entry = {{"index", idx}, {"op", cmd.at("op")}};
      try {
        Json out = dispatch(cmd, idx);
        for (auto& [k, v] : out.items()) entry[k] = v;
        if (entry.contains("check") && entry["check"] == "fail") ok = false;
      } catch (const Error& e) {
        if (e.code() == Errc::ValidationError || e.code() == Errc::UnknownReference) throw;
        entry["error"] = {{"kind", to_string(e.code())}, {"message", e.what()}};
        ok = false;
      }
      results.push_back(std::move(entry));
    }
    Json report = {{"status", ok ? "ok" : "failed"}, {"results", std::move(results)}, {"refinements", log_}};
    if (!log_.empty()) report["space"] = io::to_json(space_);
    return {std::move(report), ok};
  }

 private:
  static const Json& require(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) invalid(where + " is missing \"" + key + "\"");
    return j.at(key);
  }

  const std::string& name_arg(const Json& cmd, const char* key) {
    const Json& v = require(cmd, key, "command '" + cmd.value("op", std::string("?")) + "'");
    if (!v.is_string()) invalid(std::string("command argument \"") + key + "\" must be a name");
    return v.get_ref<const std::string&>();
  }

  const StepFunction& function(const std::string& name) {
    auto it = functions_.find(name);
    if (it == functions_.end()) throw Error(Errc::UnknownReference, "function '" + name + "'");
    return it->second;
  }

  const Sublattice& sublattice(const std::string& name) {
    auto it = sublattices_.find(name);
    if (it == sublattices_.end()) throw Error(Errc::UnknownReference, "sublattice '" + name + "'");
    return it->second;
  }

  std::vector<StepFunction> tuple_arg(const Json& cmd, const char* key) {
    const Json& v = require(cmd, key, "command");
    std::vector<StepFunction> out;
    if (v.is_string()) {
      out.push_back(function(v.get<std::string>()));
    } else if (v.is_array()) {
      for (const auto& n : v) {
        if (!n.is_string()) invalid(std::string("\"") + key + "\" must list function names");
        out.push_back(function(n.get<std::string>()));
      }
    } else {
      invalid(std::string("\"") + key + "\" must be a name or a list of names");
    }
    return out;
  }

  // A sublattice name, a function name (its dcl) or a list of function names.
  Sublattice lattice_arg(const Json& cmd, const char* key) {
    const Json& v = require(cmd, key, "command");
    if (v.is_string()) {
      const std::string& n = v.get_ref<const std::string&>();
      if (sublattices_.count(n)) return sublattices_.at(n);
      return dcl(space_, std::vector{function(n)}, tol_);
    }
    return dcl(space_, tuple_arg(cmd, key), tol_);
  }

  double r_arg(const Json& cmd) {
    const Json& v = require(cmd, "r", "command 'slice'");
    if (!v.is_number()) invalid("\"r\" must be a number");
    return v.get<double>();
  }

  void check_references(const Json& commands) {
    std::set<std::string> fnames, snames;
    for (const auto& [n, f] : functions_) fnames.insert(n);
    for (const auto& [n, s] : sublattices_) snames.insert(n);
    auto known = [&](const Json& v) {
      auto one = [&](const Json& n) {
        if (!n.is_string()) invalid("command arguments must be names");
        const auto& s = n.get_ref<const std::string&>();
        if (!fnames.count(s) && !snames.count(s)) throw Error(Errc::UnknownReference, "'" + s + "'");
      };
      if (v.is_array())
        for (const auto& n : v) one(n);
      else
        one(v);
    };
    static const std::set<std::string> kOps = {"condexp", "slice",   "profile", "dist",    "typeeq", "indep",
                                               "productcheck", "cb", "realize", "extend", "maharam"};
    for (std::size_t idx = 0; idx < commands.size(); ++idx) {
      const Json& cmd = commands[idx];
      if (!cmd.is_object() || !cmd.contains("op") || !cmd.at("op").is_string())
        invalid("commands[" + std::to_string(idx) + "] needs a string \"op\"");
      const std::string op = cmd.at("op").get<std::string>();
      if (!kOps.count(op)) invalid("commands[" + std::to_string(idx) + "]: unknown op '" + op + "'");
      for (const char* key : {"f", "g", "fs", "A", "B", "C", "target"})
        if (cmd.contains(key)) known(cmd.at(key));
      if (cmd.contains("as")) {
        const Json& as = cmd.at("as");
        const bool lattice_out = op == "cb";
        auto bind = [&](const Json& n) {
          if (!n.is_string()) invalid("\"as\" must be a name or list of names");
          (lattice_out ? snames : fnames).insert(n.get<std::string>());
        };
        if (as.is_array())
          for (const auto& n : as) bind(n);
        else
          bind(as);
      }
    }
  }

  void bind_function(const Json& cmd, const StepFunction& f) {
    if (cmd.contains("as")) functions_.insert_or_assign(cmd.at("as").get<std::string>(), f);
  }

  void bind_functions(const Json& cmd, const std::vector<StepFunction>& fs) {
    if (!cmd.contains("as")) return;
    const Json& as = cmd.at("as");
    if (as.is_string()) {
      if (fs.size() == 1) {
        functions_.insert_or_assign(as.get<std::string>(), fs[0]);
      } else {
        for (std::size_t i = 0; i < fs.size(); ++i)
          functions_.insert_or_assign(as.get<std::string>() + "[" + std::to_string(i) + "]", fs[i]);
      }
      return;
    }
    if (as.size() != fs.size()) invalid("\"as\" lists " + std::to_string(as.size()) + " names for " +
                                        std::to_string(fs.size()) + " outputs");
    for (std::size_t i = 0; i < fs.size(); ++i) functions_.insert_or_assign(as[i].get<std::string>(), fs[i]);
  }

  // Moves every named object onto the refined space.
  void apply(const Refinement& r, std::size_t idx, const std::string& op) {
    if (r.is_identity() && r.child().same_as(space_)) return;
    for (auto& [n, f] : functions_) f = lift(f, r);
    for (auto& [n, s] : sublattices_) s = lift(s, r);
    for (std::size_t i = 0; i < space_.size(); ++i) {
      const CellSet& kids = r.children(i);
      if (kids.size() == 1 && r.child().id(kids[0]) == space_.id(i)) continue;
      auto& alias = aliases_[space_.id(i)];
      for (std::size_t k : kids) alias.push_back(r.child().id(k));
    }
    Json entry = {{"command", idx}, {"op", op}};
    const Json splits = io::to_json(r);
    for (auto& [k, v] : splits.items()) entry[k] = v;
    log_.push_back(std::move(entry));
    space_ = r.child();
  }

  Json expect_function(const Json& cmd, const StepFunction& value) {
    if (!cmd.contains("expect")) return {};
    const StepFunction want = io::function_from_json(cmd.at("expect"), value.space());
    return approx_equal(value, want, tol_) ? "pass" : "fail";
  }

  Json expect_bool(const Json& cmd, bool value) {
    if (!cmd.contains("expect")) return {};
    if (!cmd.at("expect").is_boolean()) invalid("\"expect\" must be a boolean here");
    return cmd.at("expect").get<bool>() == value ? "pass" : "fail";
  }

  static void add_check(Json& out, Json check) {
    if (!check.is_null()) out["check"] = std::move(check);
  }

  Json dispatch(const Json& cmd, std::size_t idx) {
    const std::string op = cmd.at("op").get<std::string>();
    Json out = Json::object();
    if (op == "condexp" || op == "slice") {
      const StepFunction& f = function(name_arg(cmd, "f"));
      const Sublattice& c = sublattice(name_arg(cmd, "C"));
      const StepFunction value = op == "condexp" ? cond_exp(f, c) : slice(f, c, r_arg(cmd), tol_);
      out["value"] = io::to_json(value);
      add_check(out, expect_function(cmd, value));
      bind_function(cmd, value);
    } else if (op == "profile") {
      const TypeDatum t = type_datum(function(name_arg(cmd, "f")), sublattice(name_arg(cmd, "C")), tol_);
      out["type"] = io::to_json(t);
    } else if (op == "dist") {
      const Sublattice& c = sublattice(name_arg(cmd, "C"));
      const double d = distance(type_datum(function(name_arg(cmd, "f")), c, tol_),
                                type_datum(function(name_arg(cmd, "g")), c, tol_), tol_);
      out["distance"] = d;
      if (cmd.contains("expect")) {
        if (!cmd.at("expect").is_number()) invalid("\"expect\" must be a number here");
        add_check(out, near(d, cmd.at("expect").get<double>(), tol_) ? "pass" : "fail");
      }
    } else if (op == "typeeq") {
      const bool eq = tuple_type_equal(tuple_arg(cmd, "f"), tuple_arg(cmd, "g"), sublattice(name_arg(cmd, "C")), tol_);
      out["equal"] = eq;
      add_check(out, expect_bool(cmd, eq));
    } else if (op == "indep") {
      const std::string method = cmd.value("method", std::string("star"));
      IndependenceVerdict v;
      if (method == "star") {
        v = star_independent(lattice_arg(cmd, "A"), lattice_arg(cmd, "B"), lattice_arg(cmd, "C"), tol_);
      } else if (method == "slice") {
        v = slice_independent(function(name_arg(cmd, "A")), lattice_arg(cmd, "B"), lattice_arg(cmd, "C"), tol_);
      } else if (method == "restricted") {
        v.independent =
            restricted_star_check(lattice_arg(cmd, "A"), lattice_arg(cmd, "B"), lattice_arg(cmd, "C"), tol_);
      } else {
        invalid("unknown indep method '" + method + "'");
      }
      out["verdict"] = io::to_json(v);
      add_check(out, expect_bool(cmd, v.independent));
    } else if (op == "productcheck") {
      const bool ok = product_check(lattice_arg(cmd, "A"), lattice_arg(cmd, "B"), lattice_arg(cmd, "C"), tol_);
      out["holds"] = ok;
      add_check(out, expect_bool(cmd, ok));
    } else if (op == "cb") {
      const CanonicalBase cb = canonical_base(tuple_arg(cmd, "f"), lattice_arg(cmd, "A"), tol_);
      out["base"] = io::to_json(cb.base);
      out["certified"] = cb.certified;
      out["iterations"] = cb.iterations;
      add_check(out, expect_bool(cmd, cb.certified));
      if (cmd.contains("as")) sublattices_.insert_or_assign(cmd.at("as").get<std::string>(), cb.base);
    } else if (op == "realize") {
      const Sublattice& c = sublattice(name_arg(cmd, "C"));
      const auto fs = tuple_arg(cmd, "f");
      Realization r = fs.size() == 1 ? canonical_realization(type_datum(fs[0], c, tol_))
                                     : realize_cond_distribution(cond_distribution(fs, c, tol_), tol_);
      apply(r.refinement, idx, op);
      out["values"] = Json::array();
      for (const auto& f : r.functions) out["values"].push_back(io::to_json(f));
      bind_functions(cmd, r.functions);
    } else if (op == "extend") {
      const auto fs = tuple_arg(cmd, "f");
      Realization r = nonforking_extension(fs, sublattice(name_arg(cmd, "C")), sublattice(name_arg(cmd, "B")), tol_);
      apply(r.refinement, idx, op);
      out["values"] = Json::array();
      for (const auto& f : r.functions) out["values"].push_back(io::to_json(f));
      bind_functions(cmd, r.functions);
    } else if (op == "maharam") {
      const Json& ids = require(cmd, "cells", "command 'maharam'");
      if (!ids.is_array()) invalid("\"cells\" must be a list of cell ids");
      std::vector<std::string> names;
      for (const auto& id : ids) {
        if (!id.is_string()) invalid("\"cells\" must be a list of cell ids");
        resolve_cell(id.get<std::string>(), names);
      }
      const CellSet a = cell_set_from_ids(space_, names);
      CellSelection sel = maharam_select(a, sublattice(name_arg(cmd, "C")), function(name_arg(cmd, "target")), tol_);
      apply(sel.refinement, idx, op);
      out["cells"] = io::cells_to_json(space_, sel.cells);
      const StepFunction e = cond_exp(StepFunction::indicator(space_, sel.cells), sublattice(name_arg(cmd, "C")));
      const bool hit = approx_equal(e, function(name_arg(cmd, "target")), tol_);
      out["check"] = hit ? "pass" : "fail";
      if (cmd.contains("as")) functions_.insert_or_assign(cmd.at("as").get<std::string>(),
                                                          StepFunction::indicator(space_, sel.cells));
    }
    return out;
  }

  // Ids of cells split by earlier commands stand for their current descendants.
  void resolve_cell(const std::string& id, std::vector<std::string>& out) const {
    const auto it = aliases_.find(id);
    if (it == aliases_.end()) {
      out.push_back(id);
      return;
    }
    for (const auto& kid : it->second) resolve_cell(kid, out);
  }

  double tol_;
  Space space_;
  std::map<std::string, std::vector<std::string>> aliases_;
  std::map<std::string, StepFunction> functions_;
  std::map<std::string, Sublattice> sublattices_;
  Json log_ = Json::array();
};

}  // namespace

Outcome execute(const io::Json& doc, double tol) {
  const io::Json& body = doc.is_object() && doc.contains("scenario") ? doc.at("scenario") : doc;
  if (!body.is_object()) invalid("scenario must be a JSON object");
  Runner runner(body, tol);
  return runner.run(body.contains("commands") ? body.at("commands") : io::Json::array());
}

Outcome execute_file(const std::string& path, double tol) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ValidationError, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return execute(io::parse(ss.str()), tol);
}

}  // namespace lpi::scenario
