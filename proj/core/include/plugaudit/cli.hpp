#pragma once

namespace plugaudit {

/// Full command-line surface. Exit codes: 0 success with no findings at or
/// above the fail threshold, 1 findings at/above it (or failed scenario
/// assertions), 2 usage or operational error.
int cli_main(int argc, const char* const* argv);

}  // namespace plugaudit
