#pragma once

#include <ostream>

namespace bbibp::cli {

/// Full command-line run; returns the process exit status.
int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bbibp::cli
