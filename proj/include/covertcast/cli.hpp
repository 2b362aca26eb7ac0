#pragma once

namespace covertcast {

/// Entry point behind the covertcast binary; exposed so tests can drive the
/// CLI in-process. Exit codes: 0 success (possibly with per-n failures
/// flagged in the output), 1 configuration error, 2 schedule infeasible
/// across the entire grid.
int cli_main(int argc, const char* const* argv);

}  // namespace covertcast
