#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace chemotax {

// Dispatches the mesh-gen / classify / simulate / sweep subcommands.
// Returns the process exit code: 0 success, 1 simulation-level failure,
// 2 usage or configuration error.
int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace chemotax
