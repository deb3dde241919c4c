#pragma once

#include <string>

#include "lpi/tools/json_io.hpp"

namespace lpi::scenario {

struct Outcome {
  io::Json report;
  bool ok;  ///< every command ran and every "expect" matched
};

/// Runs the commands of a scenario document (or of a report embedding one under
/// "scenario"). Input problems throw ValidationError or UnknownReference; a
/// command that fails or misses its expectation stops the run with ok = false.
Outcome execute(const io::Json& doc, double tol);

/// Reads and parses the file first. Throws ParseError.
Outcome execute_file(const std::string& path, double tol);

}  // namespace lpi::scenario
