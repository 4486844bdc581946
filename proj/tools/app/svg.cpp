#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace hglass::app {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 160.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v, const char* fmt = "%.2f")
{
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

} // namespace

ChartRange chart_range(const std::vector<Series>& series)
{
    double x0 = std::numeric_limits<double>::infinity();
    double x1 = -x0;
    double y0 = x0;
    double y1 = -x0;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                continue;
            }
            const double e = i < s.err.size() && std::isfinite(s.err[i]) ? s.err[i] : 0.0;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i] - e);
            y1 = std::max(y1, s.y[i] + e);
        }
    }
    if (!std::isfinite(x0)) {
        return {};
    }
    auto pad = [](double& lo, double& hi) {
        if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        } else {
            const double d = 0.05 * (hi - lo);
            lo -= d;
            hi += d;
        }
    };
    pad(x0, x1);
    pad(y0, y1);
    return {x0, x1, y0, y1};
}

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<Series>& series)
{
    const ChartRange r = chart_range(series);
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - r.x_min) / (r.x_max - r.x_min) * pw; };
    auto sy = [&](double y) { return kTop + (r.y_max - y) / (r.y_max - r.y_min) * ph; };

    std::string o;
    o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth, "%.0f") +
         "\" height=\"" + num(kHeight, "%.0f") + "\" viewBox=\"0 0 " + num(kWidth, "%.0f") + " " +
         num(kHeight, "%.0f") + "\" data-xmin=\"" + num(r.x_min, "%.17g") + "\" data-xmax=\"" +
         num(r.x_max, "%.17g") + "\" data-ymin=\"" + num(r.y_min, "%.17g") + "\" data-ymax=\"" +
         num(r.y_max, "%.17g") + "\">\n";
    o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
         escape(title) + "</text>\n";
    o += "<rect class=\"frame\" x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) +
         "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"#333\"/>\n";

    for (int i = 0; i <= 5; ++i) {
        const double xv = r.x_min + (r.x_max - r.x_min) * i / 5.0;
        const double yv = r.y_min + (r.y_max - r.y_min) * i / 5.0;
        o += "<line x1=\"" + num(sx(xv)) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(sx(xv)) +
             "\" y2=\"" + num(kTop + ph + 5) + "\" stroke=\"#333\"/>\n";
        o += "<text x=\"" + num(sx(xv)) + "\" y=\"" + num(kTop + ph + 18) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
             num(xv, "%.3g") + "</text>\n";
        o += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(sy(yv)) + "\" x2=\"" + num(kLeft) +
             "\" y2=\"" + num(sy(yv)) + "\" stroke=\"#333\"/>\n";
        o += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(sy(yv) + 4) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + num(yv, "%.3g") +
             "</text>\n";
    }
    o += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 10) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + escape(x_label) +
         "</text>\n";
    o += "<text x=\"16\" y=\"" + num(kTop + ph / 2) + "\" transform=\"rotate(-90 16 " +
         num(kTop + ph / 2) + ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         escape(y_label) + "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const Series& s = series[k];
        const char* color = kColors[k % std::size(kColors)];
        std::string pts;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                continue;
            }
            if (!pts.empty()) {
                pts += ' ';
            }
            pts += num(sx(s.x[i])) + "," + num(sy(s.y[i]));
        }
        o += "<polyline class=\"curve\" data-label=\"" + escape(s.label) + "\" points=\"" + pts +
             "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.8\"/>\n";
        for (std::size_t i = 0; i < s.err.size() && i < s.x.size(); ++i) {
            if (!(s.err[i] > 0.0) || !std::isfinite(s.y[i])) {
                continue;
            }
            o += "<line class=\"errorbar\" x1=\"" + num(sx(s.x[i])) + "\" y1=\"" +
                 num(sy(s.y[i] - s.err[i])) + "\" x2=\"" + num(sx(s.x[i])) + "\" y2=\"" +
                 num(sy(s.y[i] + s.err[i])) + "\" stroke=\"" + color + "\"/>\n";
        }
        const double ly = kTop + 14.0 + 18.0 * static_cast<double>(k);
        o += "<line x1=\"" + num(kLeft + pw + 12) + "\" y1=\"" + num(ly) + "\" x2=\"" +
             num(kLeft + pw + 32) + "\" y2=\"" + num(ly) + "\" stroke=\"" + color +
             "\" stroke-width=\"2\"/>\n";
        o += "<text x=\"" + num(kLeft + pw + 38) + "\" y=\"" + num(ly + 4) +
             "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(s.label) + "</text>\n";
    }
    o += "</svg>\n";
    return o;
}

} // namespace hglass::app
