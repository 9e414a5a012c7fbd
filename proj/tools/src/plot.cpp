#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace nanodesign::cli {
namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 80, kRight = 160, kTop = 40, kBottom = 60;
constexpr const char* kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

}  // namespace

std::string line_plot_svg(const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<double>& x,
                          const std::vector<Series>& series, const Provenance& provenance) {
    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (double v : x) {
        x_lo = std::min(x_lo, v);
        x_hi = std::max(x_hi, v);
    }
    for (const auto& s : series) {
        for (double v : s.y) {
            if (!std::isfinite(v)) continue;
            y_lo = std::min(y_lo, v);
            y_hi = std::max(y_hi, v);
        }
    }
    if (!std::isfinite(x_lo)) x_lo = 0, x_hi = 1;
    if (!std::isfinite(y_lo)) y_lo = 0, y_hi = 1;
    y_lo = std::min(y_lo, 0.0);
    if (x_hi == x_lo) x_hi = x_lo + 1;
    if (y_hi == y_lo) y_hi = y_lo + 1;

    const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
    auto px = [&](double v) { return kLeft + (v - x_lo) / (x_hi - x_lo) * plot_w; };
    auto py = [&](double v) { return kTop + plot_h - (v - y_lo) / (y_hi - y_lo) * plot_h; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<title>" << escape(title) << "</title>\n<desc>";
    for (const auto& [k, v] : provenance) svg << escape(k) << ": " << escape(v) << '\n';
    svg << "</desc>\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        << escape(title) << "</text>\n";
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\""
        << plot_h << "\" fill=\"none\" stroke=\"#333\"/>\n";

    for (int i = 0; i <= 5; ++i) {
        const double xv = x_lo + (x_hi - x_lo) * i / 5.0;
        const double yv = y_lo + (y_hi - y_lo) * i / 5.0;
        svg << "<line x1=\"" << num(px(xv)) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\"" << num(px(xv))
            << "\" y2=\"" << num(kTop + plot_h + 5) << "\" stroke=\"#333\"/>\n";
        svg << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(kTop + plot_h + 18)
            << "\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
        svg << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(py(yv)) << "\" x2=\"" << num(kLeft)
            << "\" y2=\"" << num(py(yv)) << "\" stroke=\"#333\"/>\n";
        svg << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(yv) + 4)
            << "\" text-anchor=\"end\">" << tick_label(yv) << "</text>\n";
    }
    svg << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 15)
        << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
    svg << "<text transform=\"translate(18 " << num(kTop + plot_h / 2)
        << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* colour = kColours[s % std::size(kColours)];
        svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.8\" points=\"";
        const std::size_t n = std::min(x.size(), series[s].y.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(series[s].y[i])) continue;
            svg << num(px(x[i])) << ',' << num(py(series[s].y[i])) << ' ';
        }
        svg << "\"/>\n";
        if (n <= 20) {
            for (std::size_t i = 0; i < n; ++i) {
                if (!std::isfinite(series[s].y[i])) continue;
                svg << "<circle cx=\"" << num(px(x[i])) << "\" cy=\"" << num(py(series[s].y[i]))
                    << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
            }
        }
        const double ly = kTop + 14 + 18 * static_cast<double>(s);
        svg << "<line x1=\"" << num(kLeft + plot_w + 12) << "\" y1=\"" << num(ly) << "\" x2=\""
            << num(kLeft + plot_w + 32) << "\" y2=\"" << num(ly) << "\" stroke=\"" << colour
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << num(kLeft + plot_w + 38) << "\" y=\"" << num(ly + 4) << "\">"
            << escape(series[s].name) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace nanodesign::cli
