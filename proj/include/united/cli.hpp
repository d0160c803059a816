#ifndef UNITED_CLI_HPP
#define UNITED_CLI_HPP

#include <iosfwd>

namespace united {

/// Command-line entry point. Exit codes: 0 proved/checked/fit OK,
/// 1 refuted or replay failed, 2 gave up, 3 usage or input error.
int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

}  // namespace united

#endif
