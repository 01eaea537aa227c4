#pragma once

#include <iosfwd>

namespace fimsim {

// Exit status: 0 success, 1 simulation or input failure, 2 usage error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fimsim
