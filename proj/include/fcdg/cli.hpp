#pragma once

#include <string>
#include <vector>

namespace fcdg {

/// Entry point of the `fcdg` tool. Returns 0 on success, 2 for usage and
/// configuration errors, 1 for runtime failures.
int cli_main(int argc, char** argv);
int cli_main(const std::vector<std::string>& args);

}  // namespace fcdg
