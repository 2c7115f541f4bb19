#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rcrt {

/// Runs one CLI invocation. `args` excludes the program name. Writes a
/// single JSON (or CSV) document to `out` and diagnostics to `err`.
/// Returns 0 on success, 1 on domain errors, 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rcrt
