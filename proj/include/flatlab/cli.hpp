#pragma once

namespace flatlab {

/// Command-line entry point (separated from main for in-process testing).
/// Exit codes: 0 success, 2 validation error, 3 construction error,
/// 4 invariant violation.
int run_cli(int argc, const char* const* argv);

}  // namespace flatlab
