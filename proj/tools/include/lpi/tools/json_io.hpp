#pragma once

#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

#include "lpi/independence.hpp"
#include "lpi/refinement.hpp"
#include "lpi/space.hpp"
#include "lpi/step_function.hpp"
#include "lpi/sublattice.hpp"
#include "lpi/typespace.hpp"

namespace lpi::io {

using Json = nlohmann::ordered_json;

/// Throws ParseError with the line and column of the offending byte.
Json parse(std::string_view text);
/// Pretty-printed, two-space indent, floating point numbers with 17 significant digits.
std::string dump(const Json& j);

Json to_json(const Space& space);
Space space_from_json(const Json& j);

/// Dense: every cell of the space appears.
Json to_json(const StepFunction& f);
StepFunction function_from_json(const Json& j, const Space& space);

Json to_json(const Sublattice& c);
/// Explicit blocks, or {"generators": [names]} resolved against `functions`.
Sublattice sublattice_from_json(const Json& j, const Space& space, const std::map<std::string, StepFunction>& functions,
                                double tol);

Json to_json(const SliceProfile& profile);
Json to_json(const TypeDatum& t);
Json to_json(const ConditionalDistribution& d);
Json to_json(const IndependenceVerdict& v);
Json to_json(const Refinement& r);
Json cells_to_json(const Space& space, const CellSet& cells);

}  // namespace lpi::io
