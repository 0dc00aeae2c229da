#pragma once

#include <iosfwd>

namespace cst::cli {

/// Runs the command line. Returns 0 on success (including "infeasible" and
/// "inf" results), 1 on domain errors, 2 on usage or parse errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cst::cli
