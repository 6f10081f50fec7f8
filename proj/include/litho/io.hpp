#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "litho/deposition.hpp"
#include "litho/pattern.hpp"

namespace litho::io {

using json = nlohmann::json;

/// 17 significant digits, enough to round-trip any double.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_curve_csv(std::ostream& out, std::span<const double> phi, std::span<const double> values) {
    out << "phi,value\n";
    for (std::size_t i = 0; i < phi.size(); ++i) {
        out << format_double(phi[i]) << ',' << format_double(values[i]) << '\n';
    }
}

inline void write_curve_csv(std::ostream& out, const DepositionCurve& curve) {
    write_curve_csv(out, curve.phi(), curve.values());
}

inline void write_complex_csv(std::ostream& out, std::span<const double> phi, std::span<const Complex> values) {
    out << "phi,re,im\n";
    for (std::size_t i = 0; i < phi.size(); ++i) {
        out << format_double(phi[i]) << ',' << format_double(values[i].real()) << ','
            << format_double(values[i].imag()) << '\n';
    }
}

inline json curve_json(std::span<const double> phi, std::span<const double> values) {
    return json{{"phi", std::vector<double>(phi.begin(), phi.end())},
                {"value", std::vector<double>(values.begin(), values.end())}};
}

inline json curve_json(const DepositionCurve& curve) { return curve_json(curve.phi(), curve.values()); }

inline json complex_json(std::span<const double> phi, std::span<const Complex> values) {
    std::vector<double> re, im;
    for (const auto& v : values) {
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    return json{{"phi", std::vector<double>(phi.begin(), phi.end())}, {"re", re}, {"im", im}};
}

// Recipe: {"m": int, "gamma": float, "t": float, "branches": [{"n", "weight", "theta"}]}

inline json recipe_to_json(const SuperpositionRecipe& recipe) {
    json branches = json::array();
    for (const auto& b : recipe.branches) {
        branches.push_back({{"n", b.photons}, {"weight", b.weight}, {"theta", b.phase}});
    }
    return json{{"m", recipe.split},
                {"gamma", recipe.entanglement_angle},
                {"t", recipe.exposure_time},
                {"branches", branches}};
}

inline SuperpositionRecipe recipe_from_json(const json& j) {
    try {
        SuperpositionRecipe recipe;
        recipe.split = j.at("m").get<unsigned>();
        recipe.entanglement_angle = j.at("gamma").get<double>();
        recipe.exposure_time = j.at("t").get<double>();
        for (const auto& b : j.at("branches")) {
            recipe.branches.push_back(
                {b.at("n").get<unsigned>(), b.at("weight").get<double>(), b.value("theta", 0.0)});
        }
        recipe.validate();
        return recipe;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("recipe JSON: ") + e.what());
    }
}

// Target: {"f0": float, "harmonics": [{"n": int, "cos": float, "sin": float}]}

inline json target_to_json(const TargetPattern& target) {
    json harmonics = json::array();
    for (const auto& h : target.harmonics) {
        harmonics.push_back({{"n", h.harmonic}, {"cos", h.cos_coeff}, {"sin", h.sin_coeff}});
    }
    return json{{"f0", target.mean}, {"harmonics", harmonics}};
}

inline TargetPattern target_from_json(const json& j) {
    try {
        TargetPattern target;
        target.mean = j.value("f0", 0.0);
        for (const auto& h : j.at("harmonics")) {
            target.harmonics.push_back(
                {h.at("n").get<unsigned>(), h.value("cos", 0.0), h.value("sin", 0.0)});
        }
        return target;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("target JSON: ") + e.what());
    }
}

// SVG ---------------------------------------------------------------------------

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Minimal self-contained line chart: one polyline per series plus a legend.
inline void write_svg(std::ostream& out, const std::vector<SvgSeries>& series, const std::string& title = {}) {
    constexpr double width = 640, height = 400, margin = 40;
    static constexpr const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#000000"};

    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto& s : series) {
        for (double v : s.x) x_lo = std::min(x_lo, v), x_hi = std::max(x_hi, v);
        for (double v : s.y) y_lo = std::min(y_lo, v), y_hi = std::max(y_hi, v);
    }
    if (!(x_hi > x_lo)) x_hi = x_lo + 1;
    if (!(y_hi > y_lo)) y_hi = y_lo + 1;
    auto px = [&](double v) { return margin + (v - x_lo) / (x_hi - x_lo) * (width - 2 * margin); };
    auto py = [&](double v) { return height - margin - (v - y_lo) / (y_hi - y_lo) * (height - 2 * margin); };

    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << width - 2 * margin
        << "\" height=\"" << height - 2 * margin << "\" fill=\"none\" stroke=\"#888\"/>\n";
    if (!title.empty()) {
        out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << title
            << "</text>\n";
    }
    out << "<text x=\"" << margin << "\" y=\"" << height - 12 << "\" font-size=\"11\">phi " << num(x_lo)
        << " .. " << num(x_hi) << "; value " << num(y_lo) << " .. " << num(y_hi) << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = colors[k % std::size(colors)];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            out << (i ? " " : "") << num(px(s.x[i])) << ',' << num(py(s.y[i]));
        }
        out << "\"/>\n";
        out << "<text x=\"" << width - margin - 4 << "\" y=\"" << margin + 14 + 14 * k
            << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << color << "\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace litho::io
