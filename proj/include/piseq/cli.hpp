#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "piseq/common.hpp"

namespace piseq::cli {

/// Exact-integer limit parser.  Accepts plain decimals and scientific
/// notation ("1e8", "2.5e3"); rejects anything that is not a positive
/// integer representable in 64 bits.
u64 parse_limit(const std::string& text);

/// The whole command surface, callable in process for tests: args is argv
/// without the program name, data goes to out, diagnostics to err.
/// Returns the exit code: 0 success, 1 runtime or invariant failure,
/// 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace piseq::cli
