#include "lpi/tools/json_io.hpp"

#include <cstdio>
#include <variant>

#include "lpi/error.hpp"

namespace lpi::io {

namespace {

void write(const Json& j, std::string& out, int depth) {
  const std::string pad(2 * static_cast<std::size_t>(depth + 1), ' ');
  const std::string close(2 * static_cast<std::size_t>(depth), ' ');
  switch (j.type()) {
    case Json::value_t::number_float: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
      out += buf;
      break;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(key).dump() + ": ";
        write(value, out, depth + 1);
      }
      out += "\n" + close + "}";
      break;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write(j[i], out, depth + 1);
      }
      out += "\n" + close + "]";
      break;
    }
    default:
      out += j.dump();
  }
}

[[noreturn]] void invalid(const std::string& what) { throw Error(Errc::ValidationError, what); }

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) invalid(where + " is missing \"" + key + "\"");
  return j.at(key);
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) invalid(where + " must be a number");
  return j.get<double>();
}

const std::string& string_of(const Json& j, const std::string& where) {
  if (!j.is_string()) invalid(where + " must be a string");
  return j.get_ref<const std::string&>();
}

}  // namespace

Json parse(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(Errc::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                                      std::string(e.what()));
  }
}

std::string dump(const Json& j) {
  std::string out;
  write(j, out, 0);
  out += "\n";
  return out;
}

Json to_json(const Space& space) {
  Json cells = Json::array();
  for (const auto& c : space.cells()) cells.push_back({{"id", c.id}, {"weight", c.weight}});
  return {{"p", space.p()}, {"cells", std::move(cells)}};
}

Space space_from_json(const Json& j) {
  const double p = number(field(j, "p", "space"), "space.p");
  const Json& cells = field(j, "cells", "space");
  if (!cells.is_array()) invalid("space.cells must be an array");
  std::vector<Cell> out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string where = "space.cells[" + std::to_string(i) + "]";
    out.push_back({string_of(field(cells[i], "id", where), where + ".id"),
                   number(field(cells[i], "weight", where), where + ".weight")});
  }
  return Space::make(std::move(out), p);
}

Json to_json(const StepFunction& f) {
  Json values = Json::object();
  for (std::size_t i = 0; i < f.size(); ++i) values[f.space().id(i)] = f[i];
  return {{"values", std::move(values)}};
}

StepFunction function_from_json(const Json& j, const Space& space) {
  const Json& values = field(j, "values", "function");
  if (!values.is_object()) invalid("function.values must be an object");
  std::map<std::string, double> m;
  for (const auto& [id, v] : values.items()) m[id] = number(v, "function.values." + id);
  return StepFunction::from_map(space, m);
}

Json to_json(const Sublattice& c) {
  Json blocks = Json::array();
  for (const auto& b : c.blocks()) {
    Json ids = Json::array(), profile = Json::object();
    for (std::size_t i : b) {
      ids.push_back(c.space().id(i));
      profile[c.space().id(i)] = c.profile(i);
    }
    blocks.push_back({{"cells", std::move(ids)}, {"profile", std::move(profile)}});
  }
  return {{"blocks", std::move(blocks)}};
}

Sublattice sublattice_from_json(const Json& j, const Space& space, const std::map<std::string, StepFunction>& functions,
                                double tol) {
  if (j.is_object() && j.contains("generators")) {
    const Json& names = j.at("generators");
    if (!names.is_array()) invalid("sublattice.generators must be an array of function names");
    std::vector<StepFunction> gens;
    for (const auto& n : names) {
      const std::string& name = string_of(n, "sublattice.generators[]");
      auto it = functions.find(name);
      if (it == functions.end()) throw Error(Errc::UnknownReference, "function '" + name + "'");
      gens.push_back(it->second);
    }
    return dcl(space, gens, tol);
  }
  const Json& blocks = field(j, "blocks", "sublattice");
  if (!blocks.is_array()) invalid("sublattice.blocks must be an array");
  std::vector<CellSet> cells;
  std::vector<double> profile(space.size(), 0.0);
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const std::string where = "sublattice.blocks[" + std::to_string(k) + "]";
    const Json& ids = field(blocks[k], "cells", where);
    if (!ids.is_array()) invalid(where + ".cells must be an array");
    CellSet block;
    for (const auto& id : ids) {
      const std::size_t i = space.index_of(string_of(id, where + ".cells[]"));
      block.push_back(i);
      profile[i] = 1.0;
    }
    if (blocks[k].contains("profile")) {
      const Json& prof = blocks[k].at("profile");
      if (!prof.is_object()) invalid(where + ".profile must be an object");
      for (const auto& [id, v] : prof.items()) {
        const std::size_t i = space.index_of(id);
        if (std::find(block.begin(), block.end(), i) == block.end())
          invalid(where + ".profile names '" + id + "' outside the block");
        profile[i] = number(v, where + ".profile." + id);
      }
    }
    cells.push_back(std::move(block));
  }
  return Sublattice::from_blocks(space, std::move(cells), profile);
}

Json to_json(const SliceProfile& profile) {
  Json blocks = Json::array();
  for (std::size_t k = 0; k < profile.blocks.size(); ++k) {
    Json ids = Json::array(), segs = Json::array();
    for (std::size_t i : profile.sublattice.block(k)) ids.push_back(profile.sublattice.space().id(i));
    for (const auto& s : profile.blocks[k].segments) segs.push_back({{"length", s.length}, {"value", s.value}});
    blocks.push_back({{"cells", std::move(ids)}, {"mass", profile.blocks[k].mass}, {"segments", std::move(segs)}});
  }
  return {{"blocks", std::move(blocks)}};
}

Json to_json(const TypeDatum& t) {
  return {{"profile", to_json(t.profile)}, {"orthPosNorm", t.orth_pos}, {"orthNegNorm", t.orth_neg}};
}

Json to_json(const ConditionalDistribution& d) {
  auto atoms = [](const std::vector<Atom>& list) {
    Json out = Json::array();
    for (const auto& a : list) out.push_back({{"value", a.value}, {"mass", a.mass}});
    return out;
  };
  Json blocks = Json::array();
  for (std::size_t k = 0; k < d.blocks.size(); ++k) {
    Json ids = Json::array();
    for (std::size_t i : d.sublattice.block(k)) ids.push_back(d.sublattice.space().id(i));
    blocks.push_back({{"cells", std::move(ids)}, {"atoms", atoms(d.blocks[k])}});
  }
  return {{"arity", d.arity}, {"blocks", std::move(blocks)}, {"orth", atoms(d.orth)}};
}

Json to_json(const IndependenceVerdict& v) {
  Json out = {{"independent", v.independent}};
  if (!v.witness) return out;
  if (const auto* w = std::get_if<ExpectationWitness>(&*v.witness)) {
    out["witness"] = {{"element", to_json(w->element)},
                      {"expectationOverB", to_json(w->over_b)},
                      {"expectationOverC", to_json(w->over_c)}};
  } else {
    const auto& s = std::get<SliceWitness>(*v.witness);
    out["witness"] = {{"term", s.term}, {"r", s.r}, {"sliceOverB", to_json(s.over_b)}, {"sliceOverC", to_json(s.over_c)}};
  }
  return out;
}

Json to_json(const Refinement& r) {
  Json splits = Json::object();
  for (std::size_t i = 0; i < r.parent().size(); ++i) {
    const auto& ch = r.children(i);
    if (ch.size() == 1 && r.child().id(ch[0]) == r.parent().id(i)) continue;
    Json kids = Json::array();
    for (std::size_t c : ch) kids.push_back({{"id", r.child().id(c)}, {"weight", r.child().weight(c)}});
    splits[r.parent().id(i)] = std::move(kids);
  }
  Json fresh = Json::array();
  for (std::size_t c : r.fresh()) fresh.push_back({{"id", r.child().id(c)}, {"weight", r.child().weight(c)}});
  return {{"splits", std::move(splits)}, {"fresh", std::move(fresh)}, {"cellCount", r.child().size()}};
}

Json cells_to_json(const Space& space, const CellSet& cells) {
  Json out = Json::array();
  for (std::size_t i : cells) out.push_back(space.id(i));
  return out;
}

}  // namespace lpi::io
