#pragma once

#include <ostream>

namespace fermi::cli {

/// Runs the fermi command line. Returns 0 on success, 1 when a check fails, 2 on usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace fermi::cli
