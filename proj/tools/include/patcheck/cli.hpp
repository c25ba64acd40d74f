#pragma once

#include <iosfwd>

namespace patcheck {

/// Exit codes: 0 clean, 1 warnings, 2 parse/semantic error or unreadable
/// input, 3 internal error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace patcheck
