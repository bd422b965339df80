#ifndef CDALG_CLI_HPP
#define CDALG_CLI_HPP

#include <string>

#include "cdalg/json_io.hpp"

namespace cdalg {

struct RunOutcome {
  int exit_code = 0;  ///< 0 ok, 1 usage or parse error, 2 domain error
  Json report;        ///< result, or {"error": {"kind", "detail"}}
};

/**
 * Runs one job object: {"command": ..., "level": r, "expression": text or
 * tree, "path": {...}, "tol": x, ...}. Unknown keys and missing required
 * fields are usage errors. Never throws.
 */
RunOutcome run_job(const Json& job);

/// Serialized report; identical jobs give identical bytes.
std::string dump_report(const Json& report);

/// Entry point of the cdcalc binary.
int cli_main(int argc, char** argv);

}  // namespace cdalg

#endif
