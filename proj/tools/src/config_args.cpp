#include "config_args.hpp"

#include <fstream>
#include <set>

#include "commands.hpp"
#include "nanodesign/text_manifest.hpp"

namespace nanodesign::cli {

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::string config_path;
    std::set<std::string> given;
    for (std::size_t i = 1; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) != 0) continue;
        const auto eq = a.find('=');
        const std::string key = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
        given.insert(key);
        if (key == "config") {
            if (eq != std::string::npos) {
                config_path = a.substr(eq + 1);
            } else if (i + 1 < args.size()) {
                config_path = args[i + 1];
            }
        }
    }
    if (config_path.empty() || args.size() < 2) return args;

    std::ifstream in(config_path);
    if (!in) throw UsageError("cannot open config file " + config_path);
    const TextManifest manifest = TextManifest::read(in);

    std::vector<std::string> injected;
    for (const auto& [key, value] : manifest.entries()) {
        if (key == "config" || given.count(key)) continue;
        if (value == "false") continue;
        injected.push_back("--" + key);
        if (value != "true") injected.push_back(value);
    }
    std::vector<std::string> out(args.begin(), args.begin() + 2);
    out.insert(out.end(), injected.begin(), injected.end());
    out.insert(out.end(), args.begin() + 2, args.end());
    return out;
}

}  // namespace nanodesign::cli
