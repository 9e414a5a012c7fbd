#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "config_args.hpp"
#include "nanodesign/errors.hpp"

int main(int argc, char** argv) {
    using namespace nanodesign;
    std::vector<std::string> args(argv, argv + argc);

    CLI::App app{"Layered nanosphere scattering: oracle, surrogate training and inverse design",
                 "nanodesign"};
    app.set_version_flag("--version", std::string("nanodesign ") + NANODESIGN_VERSION);
    app.require_subcommand(1);

    try {
        args = cli::expand_config(args);
        cli::register_commands(app, args);
        std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const cli::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
