#include "modeswitch/svg.hpp"

#include "format.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace modeswitch {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 20, kTop = 20, kBottom = 50;

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

void header(std::ostringstream& svg) {
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
        << "<!DOCTYPE svg PUBLIC \"-//W3C//DTD SVG 1.1//EN\" "
           "\"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd\">\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
}

struct Ticks {
    double lo, hi, step;
    int decimals;
};

// Range widened to multiples of a 1/2/5 step; 0 is a tick whenever the
// range contains it.
Ticks nice_ticks(double lo, double hi) {
    if (hi - lo < 1e-9) {
        lo -= 0.05;
        hi += 0.05;
    }
    const double raw = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double f : {1.0, 2.0, 5.0, 10.0})
        if (f * mag >= raw) {
            step = f * mag;
            break;
        }
    const int decimals = std::max(0, static_cast<int>(-std::floor(std::log10(step) + 1e-9)));
    return {std::floor(lo / step + 1e-9) * step, std::ceil(hi / step - 1e-9) * step, step, decimals};
}

std::string num(double v) { return detail::fixed(v, 2); }

} // namespace

std::string render_svg(const CurveFamily& family, const CurveExportOptions& options) {
    const auto& x = family.grid.values;
    if (x.empty() || family.average.empty()) throw std::invalid_argument("render_svg: empty curve family");
    const auto rows = exported_curve_rows(family, options);

    double lo = *std::min_element(family.average.begin(), family.average.end());
    double hi = *std::max_element(family.average.begin(), family.average.end());
    for (auto k : rows)
        for (double v : family.curves[k]) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (family.centered) {
        lo = std::min(lo, 0.0);
        hi = std::max(hi, 0.0);
    }
    const Ticks yt = nice_ticks(lo, hi);
    const double x0 = x.front(), x1 = x.size() > 1 && x.back() > x.front() ? x.back() : x.front() + 1.0;
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double v) { return kLeft + (v - x0) / (x1 - x0) * pw; };
    auto py = [&](double v) { return kTop + (yt.hi - v) / (yt.hi - yt.lo) * ph; };

    std::ostringstream svg;
    header(svg);
    svg << "<g stroke=\"black\" stroke-width=\"1\">\n"
        << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\"" << kTop + ph
        << "\"/>\n"
        << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + ph << "\"/>\n"
        << "</g>\n";
    svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    const int n_ticks = static_cast<int>(std::lround((yt.hi - yt.lo) / yt.step));
    for (int i = 0; i <= n_ticks; ++i) {
        const double v = yt.lo + i * yt.step;
        svg << "<text class=\"ytick\" x=\"" << kLeft - 6 << "\" y=\"" << num(py(v) + 4)
            << "\" text-anchor=\"end\">" << detail::fixed(v, yt.decimals) << "</text>\n";
    }
    const Ticks xt = nice_ticks(x0, x1);
    for (double v = xt.lo; v <= xt.hi + 1e-9 * xt.step; v += xt.step) {
        if (v < x0 - 1e-9 || v > x1 + 1e-9) continue;
        svg << "<text class=\"xtick\" x=\"" << num(px(v)) << "\" y=\"" << kTop + ph + 16
            << "\" text-anchor=\"middle\">" << detail::fixed(v, xt.decimals) << "</text>\n";
    }
    svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">"
        << escape(family.grid.feature) << "</text>\n"
        << "<text x=\"16\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << kTop + ph / 2 << ")\">" << (family.centered ? "centered switching probability" : "switching probability")
        << "</text>\n</g>\n";

    auto polyline = [&](const std::vector<double>& values, const char* style) {
        svg << "<polyline fill=\"none\" " << style << " points=\"";
        for (std::size_t j = 0; j < x.size(); ++j) svg << (j ? " " : "") << num(px(x[j])) << ',' << num(py(values[j]));
        svg << "\"/>\n";
    };
    for (auto k : rows) polyline(family.curves[k], "stroke=\"#b0b0b0\" stroke-width=\"0.8\"");
    polyline(family.average, "stroke=\"#d62728\" stroke-width=\"2.5\"");
    svg << "</svg>\n";
    return svg.str();
}

std::string render_svg(const std::vector<EffectRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("render_svg: empty effects table");
    double lo = 0.0, hi = 0.0;
    for (const auto& r : rows)
        if (r.value) {
            lo = std::min(lo, *r.value);
            hi = std::max(hi, *r.value);
        }
    const Ticks xt = nice_ticks(lo, hi);
    const double label_w = 200;
    const double bar_h = 14;
    const double height = kTop + kBottom + bar_h * static_cast<double>(rows.size());
    const double pw = kWidth - label_w - kRight;
    auto px = [&](double v) { return label_w + (v - xt.lo) / (xt.hi - xt.lo) * pw; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
        << "<!DOCTYPE svg PUBLIC \"-//W3C//DTD SVG 1.1//EN\" "
           "\"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd\">\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth << "\" height=\""
        << height << "\" viewBox=\"0 0 " << kWidth << ' ' << height << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    svg << "<g font-family=\"sans-serif\" font-size=\"10\">\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const double y = kTop + bar_h * static_cast<double>(i);
        svg << "<text x=\"" << label_w - 6 << "\" y=\"" << num(y + bar_h - 4) << "\" text-anchor=\"end\">"
            << escape(r.feature + " " + format_double(r.delta) + " " + r.segment + " " +
                      std::string(to_string(r.kind)))
            << "</text>\n";
        if (!r.value) continue;
        const double a = px(std::min(0.0, *r.value)), b = px(std::max(0.0, *r.value));
        svg << "<rect x=\"" << num(a) << "\" y=\"" << num(y + 2) << "\" width=\"" << num(b - a) << "\" height=\""
            << bar_h - 4 << "\" fill=\"" << (*r.value < 0 ? "#1f77b4" : "#ff7f0e") << "\"/>\n";
    }
    const double axis_y = height - kBottom + 4;
    svg << "<line x1=\"" << num(px(0.0)) << "\" y1=\"" << kTop << "\" x2=\"" << num(px(0.0)) << "\" y2=\"" << axis_y
        << "\" stroke=\"black\"/>\n";
    const int n_ticks = static_cast<int>(std::lround((xt.hi - xt.lo) / xt.step));
    for (int i = 0; i <= n_ticks; ++i) {
        const double v = xt.lo + i * xt.step;
        svg << "<text x=\"" << num(px(v)) << "\" y=\"" << axis_y + 14 << "\" text-anchor=\"middle\">"
            << detail::fixed(v, xt.decimals) << "</text>\n";
    }
    svg << "<text x=\"" << label_w + pw / 2 << "\" y=\"" << height - 8
        << "\" text-anchor=\"middle\">effect on switching probability</text>\n</g>\n</svg>\n";
    return svg.str();
}

} // namespace modeswitch
