#pragma once

#include <iosfwd>

namespace icd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1; // at least one file failed at run time
inline constexpr int kExitUsage = 2;   // bad flags or configuration

// Entry point shared by the icd executable and the in-process tests.
// Reports go to `out` unless --report names a file; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace icd::cli
