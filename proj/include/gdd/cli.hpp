#pragma once

#include <iosfwd>

namespace gdd::cli {

/// Parse argv and run one subcommand (pdf, cdf, stats, mode, bench, sweep,
/// grid). Returns 0 on success, 1 on invalid input, 2 when a computation
/// fails (accuracy not met, reference disagreement, ...).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gdd::cli
