#pragma once

#include <string>
#include <vector>

namespace gridcast::cli {

/**
 * Entry point for the command-line surface. Subcommands: synth,
 * diagnose, fit, forecast, evaluate, compare.
 *
 * Exit status: 0 on success, 1 on usage errors, 2 on runtime errors.
 * Relative output paths resolve against $GRIDCAST_OUT_DIR when set.
 */
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

} // namespace gridcast::cli
