#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "pplab/errors.hpp"

namespace pplab {

// Deterministic number formatting for all emitted artifacts: shortest
// round-trip representation, locale-independent.
inline std::string fmt_num(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << v;
    // prefer the shortest representation that round-trips
    for (int prec = 1; prec < 17; ++prec) {
        std::ostringstream t;
        t.imbue(std::locale::classic());
        t << std::setprecision(prec) << v;
        // stod throws out_of_range on subnormal underflow; fall back to the
        // full-precision form for such values
        try {
            if (std::stod(t.str()) == v) return t.str();
        } catch (const std::out_of_range&) {
            break;
        }
    }
    return os.str();
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> r) {
        if (r.size() != header.size()) throw InvalidInput("CsvTable: row width mismatch");
        rows.push_back(std::move(r));
    }

    std::string to_string() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
        os << "\n";
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
            os << "\n";
        }
        return os.str();
    }
};

inline void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("write_text_file: cannot open " + path);
    os << body;
    if (!os) throw IoError("write_text_file: short write to " + path);
}

// Minimal SVG 1.1 polyline plot: one curve, linear axes, tick labels.
// Inspection aid only.
inline std::string svg_line_plot(const std::string& title, const std::string& xlabel,
                                 const std::string& ylabel, const std::vector<double>& xs,
                                 const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw InvalidInput("svg_line_plot: size mismatch");
    const double W = 640, H = 480, L = 70, R = 20, T = 40, B = 50;
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (!xs.empty()) {
        xmin = xmax = xs[0];
        ymin = ymax = ys[0];
        for (std::size_t i = 1; i < xs.size(); ++i) {
            xmin = std::min(xmin, xs[i]);
            xmax = std::max(xmax, xs[i]);
            ymin = std::min(ymin, ys[i]);
            ymax = std::max(ymax, ys[i]);
        }
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;
    auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W
       << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title
       << "</text>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12
       << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel << "</text>\n";
    os << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" font-size=\"12\" transform=\"rotate(-90 16 "
       << (T + H - B) / 2 << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = xmin + (xmax - xmin) * k / 4.0;
        const double yv = ymin + (ymax - ymin) * k / 4.0;
        os << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 16
           << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt_num(xv) << "</text>\n";
        os << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4
           << "\" text-anchor=\"end\" font-size=\"10\">" << fmt_num(yv) << "</text>\n";
    }
    if (!xs.empty()) {
        os << "<polyline fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < xs.size(); ++i)
            os << (i ? " " : "") << px(xs[i]) << "," << py(ys[i]);
        os << "\"/>\n";
        for (std::size_t i = 0; i < xs.size(); ++i)
            os << "<circle cx=\"" << px(xs[i]) << "\" cy=\"" << py(ys[i])
               << "\" r=\"2.5\" fill=\"#1f5fbf\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace pplab
