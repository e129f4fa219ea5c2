#pragma once

#include "halflap/basis.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace halflap::cli {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum ExitCode : int { kSuccess = 0, kFailure = 1, kConfigError = 2 };

/// `interval:L:N` or `rectangle:L1:L2:N1:N2`.
DomainPtr parse_domain(const std::string& spec);

/// Writes a header row and one row per node: (x, u) in 1D, (x1, x2, u) in 2D.
void emit_plot_data(const GridFn& u, const std::string& path);

/// Entry point. `args` excludes the program name. Reports go to `out`,
/// diagnostics to `err` (unless --output names a file).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace halflap::cli
