#pragma once

#include <string>
#include <utility>
#include <vector>

namespace nanodesign::cli {

struct Series {
    std::string name;
    std::vector<double> y;
};

using Provenance = std::vector<std::pair<std::string, std::string>>;

/// Standalone SVG line chart; provenance goes into a <desc> element.
std::string line_plot_svg(const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<double>& x,
                          const std::vector<Series>& series, const Provenance& provenance = {});

}  // namespace nanodesign::cli
