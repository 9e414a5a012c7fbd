#pragma once

#include <string>
#include <vector>

namespace nanodesign::cli {

/// Expands `--config <file>` into `--key value` tokens placed right after the
/// subcommand name. Keys already given on the command line are skipped, so
/// explicit flags win. A value of `true` becomes a bare flag and `false`
/// drops the key.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

}  // namespace nanodesign::cli
