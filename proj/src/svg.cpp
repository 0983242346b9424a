#include "novfp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "novfp/error.hpp"

namespace novfp::svg {

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
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

struct Frame {
    double x0, x1, y0, y1;

    double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
    double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

void widen(double& lo, double& hi) {
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
}

void open(std::ostringstream& os, const std::string& title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
       << "</text>\n";
}

void axes(std::ostringstream& os, const Frame& f, const std::string& x_label, const std::string& y_label,
          bool x_ticks) {
    const double bx = kHeight - kBottom;
    os << "<line x1=\"" << kLeft << "\" y1=\"" << bx << "\" x2=\"" << kWidth - kRight << "\" y2=\"" << bx
       << "\" stroke=\"black\"/>\n"
       << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << bx
       << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double y = f.y0 + (f.y1 - f.y0) * i / 4.0;
        os << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(f.py(y) + 4) << "\" text-anchor=\"end\">" << num(y)
           << "</text>\n";
        if (x_ticks) {
            const double x = f.x0 + (f.x1 - f.x0) * i / 4.0;
            os << "<text x=\"" << num(f.px(x)) << "\" y=\"" << bx + 16 << "\" text-anchor=\"middle\">" << num(x)
               << "</text>\n";
        }
    }
    os << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 16
       << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n"
       << "<text x=\"16\" y=\"" << (kTop + bx) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << (kTop + bx) / 2 << ")\">" << escape(y_label) << "</text>\n";
}

}  // namespace

std::string histogram(const std::vector<double>& values, std::size_t bins, const std::string& title,
                      const std::string& x_label) {
    if (bins == 0) throw ConfigError("histogram needs at least one bin");
    std::vector<double> finite;
    for (double v : values)
        if (std::isfinite(v)) finite.push_back(v);
    double lo = 0.0, hi = 1.0;
    if (!finite.empty()) {
        lo = *std::min_element(finite.begin(), finite.end());
        hi = *std::max_element(finite.begin(), finite.end());
    }
    widen(lo, hi);
    std::vector<std::size_t> counts(bins, 0);
    for (double v : finite) {
        auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
        ++counts[std::min(b, bins - 1)];
    }
    const double top = static_cast<double>(std::max<std::size_t>(1, *std::max_element(counts.begin(), counts.end())));
    Frame f{lo, hi, 0.0, top};
    std::ostringstream os;
    open(os, title);
    const double bw = (hi - lo) / static_cast<double>(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        const double x = lo + bw * static_cast<double>(b);
        const double c = static_cast<double>(counts[b]);
        os << "<rect x=\"" << num(f.px(x)) << "\" y=\"" << num(f.py(c)) << "\" width=\""
           << num(f.px(x + bw) - f.px(x)) << "\" height=\"" << num(f.py(0) - f.py(c)) << "\" fill=\"" << kPalette[0]
           << "\" stroke=\"white\"/>\n";
    }
    axes(os, f, x_label, "count", true);
    os << "</svg>\n";
    return os.str();
}

std::string line_chart(const std::vector<Series>& series, const std::string& title, const std::string& x_label,
                       const std::string& y_label) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size()) throw InputError("series x and y differ in length");
        for (double v : s.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
        for (double v : s.y) y0 = std::min(y0, v), y1 = std::max(y1, v);
    }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    widen(x0, x1);
    y0 = std::min(y0, 0.0);
    widen(y0, y1);
    Frame f{x0, x1, y0, y1};
    std::ostringstream os;
    open(os, title);
    axes(os, f, x_label, y_label, true);
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* colour = kPalette[i % std::size(kPalette)];
        os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
        for (std::size_t j = 0; j < s.x.size(); ++j) os << num(f.px(s.x[j])) << ',' << num(f.py(s.y[j])) << ' ';
        os << "\"/>\n";
        for (std::size_t j = 0; j < s.x.size(); ++j)
            os << "<circle cx=\"" << num(f.px(s.x[j])) << "\" cy=\"" << num(f.py(s.y[j])) << "\" r=\"3\" fill=\""
               << colour << "\"/>\n";
        os << "<text x=\"" << kWidth - kRight - 120 << "\" y=\"" << kTop + 14 * static_cast<double>(i + 1)
           << "\" fill=\"" << colour << "\">" << escape(s.name) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string bar_chart(const std::vector<Bar>& bars, const std::string& title, const std::string& y_label) {
    double top = 0.0;
    for (const auto& b : bars)
        if (std::isfinite(b.value)) top = std::max(top, b.value);
    if (top <= 0.0) top = 1.0;
    const double n = static_cast<double>(std::max<std::size_t>(1, bars.size()));
    Frame f{0.0, n, 0.0, top};
    std::ostringstream os;
    open(os, title);
    axes(os, f, "", y_label, false);
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const double v = std::isfinite(bars[i].value) ? std::max(bars[i].value, 0.0) : 0.0;
        const double x = static_cast<double>(i) + 0.15;
        os << "<rect x=\"" << num(f.px(x)) << "\" y=\"" << num(f.py(v)) << "\" width=\"" << num(f.px(x + 0.7) - f.px(x))
           << "\" height=\"" << num(f.py(0) - f.py(v)) << "\" fill=\"" << kPalette[i % std::size(kPalette)]
           << "\"/>\n"
           << "<text x=\"" << num(f.px(x + 0.35)) << "\" y=\"" << kHeight - kBottom + 16
           << "\" text-anchor=\"middle\">" << escape(bars[i].label) << "</text>\n"
           << "<text x=\"" << num(f.px(x + 0.35)) << "\" y=\"" << num(f.py(v) - 4) << "\" text-anchor=\"middle\">"
           << num(bars[i].value) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace novfp::svg
