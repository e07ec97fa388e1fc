#include "rld/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "rld/csv.hpp"
#include "rld/errors.hpp"

namespace rld::io {

namespace {

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

Range data_range(const Plot& plot, bool y_axis) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& s : plot.series) {
        const auto& v = y_axis ? s.y : s.x;
        for (double p : v) {
            lo = std::min(lo, p);
            hi = std::max(hi, p);
        }
    }
    if (!(lo <= hi)) return Range{0.0, 1.0};
    if (lo == hi) return Range{lo - 0.5, hi + 0.5};
    const double pad = 0.04 * (hi - lo);
    return Range{lo - pad, hi + pad};
}

/// Tick spacing of the form {1, 2, 5} * 10^k giving 4-8 ticks.
std::vector<double> ticks(const Range& r) {
    const double span = r.hi - r.lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double mult : {1.0, 2.0, 5.0, 10.0}) {
        step = mult * mag;
        if (span / step <= 8.0) break;
    }
    std::vector<double> out;
    const double first = std::ceil(r.lo / step) * step;
    for (double t = first; t <= r.hi + 0.5 * step; t += step) {
        // snap near-zero ticks produced by cancellation
        out.push_back(std::abs(t) < 1e-9 * step ? 0.0 : t);
        if (out.size() > 16) break;
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

std::string render_svg(const Plot& plot) {
    for (const auto& s : plot.series)
        if (s.x.size() != s.y.size())
            throw ValidationError("svg: series x/y lengths differ");

    const double W = plot.width;
    const double H = plot.height;
    const double ml = 78, mr = 20, mt = plot.title.empty() ? 20 : 44, mb = 56;
    const Range rx = data_range(plot, false);
    const Range ry = data_range(plot, true);
    const double sx = (W - ml - mr) / (rx.hi - rx.lo);
    const double sy = (H - mt - mb) / (ry.hi - ry.lo);
    const auto X = [&](double x) { return ml + (x - rx.lo) * sx; };
    const auto Y = [&](double y) { return H - mb - (y - ry.lo) * sy; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) +
           "\" height=\"" + num(H) + "\" viewBox=\"0 0 " + num(W) + " " + num(H) +
           "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!plot.title.empty())
        out += "<text x=\"" + px(W / 2) + "\" y=\"26\" text-anchor=\"middle\" "
               "font-family=\"sans-serif\" font-size=\"16\">" +
               escape(plot.title) + "</text>\n";

    out += "<g stroke=\"#888\" stroke-width=\"1\" font-family=\"sans-serif\" "
           "font-size=\"11\" fill=\"#333\">\n";
    for (double t : ticks(rx)) {
        const double x = X(t);
        out += "<line x1=\"" + px(x) + "\" y1=\"" + px(H - mb) + "\" x2=\"" + px(x) +
               "\" y2=\"" + px(H - mb + 5) + "\"/>\n";
        out += "<text x=\"" + px(x) + "\" y=\"" + px(H - mb + 18) +
               "\" text-anchor=\"middle\" stroke=\"none\">" + num(t) + "</text>\n";
    }
    for (double t : ticks(ry)) {
        const double y = Y(t);
        out += "<line x1=\"" + px(ml - 5) + "\" y1=\"" + px(y) + "\" x2=\"" + px(ml) +
               "\" y2=\"" + px(y) + "\"/>\n";
        out += "<text x=\"" + px(ml - 8) + "\" y=\"" + px(y + 4) +
               "\" text-anchor=\"end\" stroke=\"none\">" + num(t) + "</text>\n";
    }
    out += "</g>\n";
    out += "<rect x=\"" + px(ml) + "\" y=\"" + px(mt) + "\" width=\"" +
           px(W - ml - mr) + "\" height=\"" + px(H - mt - mb) +
           "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";
    out += "<text x=\"" + px(ml + (W - ml - mr) / 2) + "\" y=\"" + px(H - 14) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
           escape(plot.x_label) + "</text>\n";
    out += "<text x=\"18\" y=\"" + px(mt + (H - mt - mb) / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 " + px(mt + (H - mt - mb) / 2) + ")\">" +
           escape(plot.y_label) + "</text>\n";

    for (const auto& s : plot.series) {
        if (s.x.empty()) continue;
        if (s.dots) {
            out += "<g fill=\"" + s.color + "\">\n";
            for (std::size_t k = 0; k < s.x.size(); ++k)
                out += "<circle cx=\"" + px(X(s.x[k])) + "\" cy=\"" + px(Y(s.y[k])) +
                       "\" r=\"" + num(s.dot_radius) + "\"/>\n";
            out += "</g>\n";
        } else {
            out += "<polyline fill=\"none\" stroke=\"" + s.color +
                   "\" stroke-width=\"1.2\" points=\"";
            for (std::size_t k = 0; k < s.x.size(); ++k) {
                if (k) out += ' ';
                out += px(X(s.x[k])) + "," + px(Y(s.y[k]));
            }
            out += "\"/>\n";
        }
    }
    out += "</svg>\n";
    return out;
}

void write_svg(const std::filesystem::path& path, const Plot& plot) {
    write_text_file(path, render_svg(plot));
}

} // namespace rld::io
