#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace CLI {
class App;
}

namespace nanodesign::cli {

/// Bad invocation detected after parsing (exit code 2).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adds generate, train, compare, design and eval to `app`. `argv` is kept
/// for the provenance block of every artifact.
void register_commands(CLI::App& app, const std::vector<std::string>& argv);

}  // namespace nanodesign::cli
