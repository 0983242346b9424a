#pragma once

#include <string>
#include <vector>

namespace novfp::svg {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct Bar {
    std::string label;
    double value = 0.0;
};

/// Standalone SVG documents; no external renderer involved.
std::string histogram(const std::vector<double>& values, std::size_t bins, const std::string& title,
                      const std::string& x_label);
std::string line_chart(const std::vector<Series>& series, const std::string& title, const std::string& x_label,
                       const std::string& y_label);
std::string bar_chart(const std::vector<Bar>& bars, const std::string& title, const std::string& y_label);

}  // namespace novfp::svg
