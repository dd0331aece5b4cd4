#pragma once

#include <ostream>

namespace okra {

// Entry point shared by the binary and the tests. Returns the process exit
// code: 0 for success (and true query results), 1 for a negative query
// result, 2 for usage or parse trouble, 3 for violated model or evaluation
// invariants. Diagnostics go to err, payload to out.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace okra
