#pragma once

#include <ostream>

namespace asianspec::cli {

/// Parses argv, prices, writes the report to out and diagnostics to err.
/// Returns 0 on success, 2 on invalid input, 3 on numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace asianspec::cli
