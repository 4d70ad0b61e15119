#pragma once

#include "periwave/config.hpp"

namespace periwave {

// Executes one configured run, writing all artifacts into cfg.out_dir.
// Returns a process exit status; library errors are caught, reported on
// stderr with their diagnostic context, and mapped to a nonzero status.
int run_mode(const RunConfig& cfg);

}  // namespace periwave
