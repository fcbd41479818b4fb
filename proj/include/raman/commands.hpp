#ifndef RAMAN_COMMANDS_HPP
#define RAMAN_COMMANDS_HPP

#include <string>

#include "raman/config.hpp"

namespace raman {

// Batch entry points behind the CLI subcommands. Each writes its CSV files
// (and optional SVG plots) into config.out_dir, finishing with an index.txt
// that lists every file written. Return value is the process exit code:
// 0 on success, 1 on runtime failure (hysteresis returns 1 only when every
// frequency fails). Configuration problems throw ConfigurationError, which
// the CLI maps to exit code 2.

int run_simulate(const RunConfig& config);
int run_hysteresis(const RunConfig& config);
int run_spectrum(const RunConfig& config);
int run_switch(const RunConfig& config);
int run_fit(const RunConfig& config);

}  // namespace raman

#endif  // RAMAN_COMMANDS_HPP
