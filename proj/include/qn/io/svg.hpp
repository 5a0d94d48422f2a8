#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "qn/core/errors.hpp"

namespace qn {

struct PlotSeries {
    std::string label;
    std::vector<double> x, y;
};

struct PlotSpec {
    std::string title, xlabel, ylabel;
    bool logx = false, logy = false;
};

// Minimal standalone SVG line plot; no external plotting dependency so the
// verification loop stays hermetic.
inline void write_svg_plot(const std::string& path, const PlotSpec& spec,
                           const std::vector<PlotSeries>& series) {
    if (series.empty()) throw config_error("svg plot: no series");
    const double W = 720, H = 480, ml = 80, mr = 30, mt = 45, mb = 60;
    auto tx = [&](double v) { return spec.logx ? std::log10(v) : v; };
    auto ty = [&](double v) { return spec.logy ? std::log10(v) : v; };

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size() || s.x.empty())
            throw config_error("svg plot: malformed series '" + s.label + "'");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (spec.logx && !(s.x[i] > 0.0)) throw config_error("svg plot: log axis needs positive x");
            if (spec.logy && !(s.y[i] > 0.0)) continue; // skip nonpositive on log scale
            xmin = std::min(xmin, tx(s.x[i]));
            xmax = std::max(xmax, tx(s.x[i]));
            ymin = std::min(ymin, ty(s.y[i]));
            ymax = std::max(ymax, ty(s.y[i]));
        }
    }
    if (!(xmax >= xmin) || !(ymax >= ymin)) throw config_error("svg plot: empty data range");
    if (xmax == xmin) { xmax += 0.5; xmin -= 0.5; }
    if (ymax == ymin) { ymax += 0.5; ymin -= 0.5; }
    const double padx = 0.03 * (xmax - xmin), pady = 0.05 * (ymax - ymin);
    xmin -= padx; xmax += padx; ymin -= pady; ymax += pady;

    auto px = [&](double v) { return ml + (tx(v) - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double v) { return H - mb - (ty(v) - ymin) / (ymax - ymin) * (H - mt - mb); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b"};
    std::ofstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot open '" + path + "' for writing");
    char buf[256];
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    f << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // axes box
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" "
                  "fill=\"none\" stroke=\"black\"/>\n",
                  ml, mt, W - ml - mr, H - mt - mb);
    f << buf;
    // ticks: 5 per axis
    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 5.0;
        const double yv = ymin + (ymax - ymin) * i / 5.0;
        const double xp = ml + (W - ml - mr) * i / 5.0;
        const double yp = H - mb - (H - mt - mb) * i / 5.0;
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ccc\"/>\n",
                      xp, mt, xp, H - mb);
        f << buf;
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ccc\"/>\n",
                      ml, yp, W - mr, yp);
        f << buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" text-anchor=\"middle\">%.3g</text>\n",
                      xp, H - mb + 16.0, spec.logx ? std::pow(10.0, xv) : xv);
        f << buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" text-anchor=\"end\">%.3g</text>\n",
                      ml - 6.0, yp + 4.0, spec.logy ? std::pow(10.0, yv) : yv);
        f << buf;
    }
    int ci = 0;
    double ly = mt + 14;
    for (const auto& s : series) {
        const char* col = colors[ci % 6];
        f << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (spec.logy && !(s.y[i] > 0.0)) continue;
            std::snprintf(buf, sizeof buf, "%.1f,%.1f ", px(s.x[i]), py(s.y[i]));
            f << buf;
        }
        f << "\"/>\n";
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" fill=\"%s\">%s</text>\n",
                      W - mr - 150.0, ly, col, s.label.c_str());
        f << buf;
        ly += 16;
        ++ci;
    }
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"14\" text-anchor=\"middle\">%s</text>\n",
                  0.5 * W, mt - 15.0, spec.title.c_str());
    f << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" text-anchor=\"middle\">%s</text>\n",
                  0.5 * W, H - 18.0, spec.xlabel.c_str());
    f << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"18\" y=\"%.1f\" font-size=\"12\" text-anchor=\"middle\" "
                  "transform=\"rotate(-90 18 %.1f)\">%s</text>\n",
                  0.5 * H, 0.5 * H, spec.ylabel.c_str());
    f << buf;
    f << "</svg>\n";
}

} // namespace qn
