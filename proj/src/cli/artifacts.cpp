#include "ckdv/cli.hpp"

#include "ckdv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace ckdv {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string xml_escape(const std::string& s)
{
    std::string o;
    for (char c : s) {
        switch (c) {
        case '&': o += "&amp;"; break;
        case '<': o += "&lt;"; break;
        case '>': o += "&gt;"; break;
        case '"': o += "&quot;"; break;
        default: o += c;
        }
    }
    return o;
}

std::string num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string tick_label(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

// 1, 2 or 5 times a power of ten, giving about `target` intervals
double nice_step(double span, int target)
{
    const double raw = span / target;
    const double p = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0}) {
        if (m * p >= raw) return m * p;
    }
    return 10.0 * p;
}

} // namespace

void CsvTable::add(std::vector<std::string> row)
{
    if (row.size() != header.size()) throw std::invalid_argument("CSV row width differs from the header");
    rows.push_back(std::move(row));
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string o = "\"";
    for (char c : s) {
        if (c == '"') o += '"';
        o += c;
    }
    return o + "\"";
}

void write_csv(const std::filesystem::path& path, const CsvTable& table, const std::vector<std::string>& manifest)
{
    std::ostringstream o;
    for (const auto& line : manifest) o << "# " << line << "\r\n";
    auto row = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) o << (i ? "," : "") << csv_field(r[i]);
        o << "\r\n";
    };
    row(table.header);
    for (const auto& r : table.rows) row(r);
    write_text(path, o.str());
}

std::string render_svg(const SvgPlot& plot, const std::vector<std::string>& manifest)
{
    const double W = 720, H = 480, left = 80, right = 20, top = 40, bottom = 60;
    const double pw = W - left - right, ph = H - top - bottom;
    auto tx = [&](double x) { return plot.logx ? std::log10(x) : x; };
    auto ty = [&](double y) { return plot.logy ? std::log10(y) : y; };
    auto usable = [&](double x, double y) {
        return std::isfinite(x) && std::isfinite(y) && (!plot.logx || x > 0.0) && (!plot.logy || y > 0.0);
    };

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : plot.series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!usable(s.x[i], s.y[i])) continue;
            x0 = std::min(x0, tx(s.x[i]));
            x1 = std::max(x1, tx(s.x[i]));
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
        }
    }
    if (!std::isfinite(x0)) x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    if (x1 <= x0) x0 -= 0.5, x1 += 0.5;
    if (y1 <= y0) y0 -= 0.5, y1 += 0.5;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    for (const auto& line : manifest) o << "<!-- " << xml_escape(line) << " -->\n";
    o << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n"
      << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
      << xml_escape(plot.title) << "</text>\n"
      << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

    const char* font = "font-family=\"sans-serif\" font-size=\"11\"";
    const double sx = nice_step(x1 - x0, 6);
    for (double v = std::ceil(x0 / sx) * sx; v <= x1 + 1e-9 * sx; v += sx) {
        const double p = px(v);
        o << "<line x1=\"" << num(p) << "\" y1=\"" << top + ph << "\" x2=\"" << num(p) << "\" y2=\"" << top + ph + 5
          << "\" stroke=\"black\"/>\n"
          << "<text x=\"" << num(p) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\" " << font << ">"
          << tick_label(plot.logx ? std::pow(10.0, v) : v) << "</text>\n";
    }
    const double sy = nice_step(y1 - y0, 6);
    for (double v = std::ceil(y0 / sy) * sy; v <= y1 + 1e-9 * sy; v += sy) {
        const double p = py(v);
        o << "<line x1=\"" << left - 5 << "\" y1=\"" << num(p) << "\" x2=\"" << left << "\" y2=\"" << num(p)
          << "\" stroke=\"black\"/>\n"
          << "<text x=\"" << left - 8 << "\" y=\"" << num(p + 4) << "\" text-anchor=\"end\" " << font << ">"
          << tick_label(plot.logy ? std::pow(10.0, v) : v) << "</text>\n";
    }
    if (y0 < 0.0 && y1 > 0.0 && !plot.logy) {
        o << "<line x1=\"" << left << "\" y1=\"" << num(py(0.0)) << "\" x2=\"" << left + pw << "\" y2=\""
          << num(py(0.0)) << "\" stroke=\"#bbbbbb\" stroke-dasharray=\"4,3\"/>\n";
    }
    o << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"13\">" << xml_escape(plot.xlabel) << "</text>\n"
      << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"13\" transform=\"rotate(-90 18 " << top + ph / 2 << ")\">" << xml_escape(plot.ylabel)
      << "</text>\n";

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
    for (std::size_t k = 0; k < plot.series.size(); ++k) {
        const auto& s = plot.series[k];
        const char* color = colors[k % 6];
        o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!usable(s.x[i], s.y[i])) continue;
            o << num(px(tx(s.x[i]))) << "," << num(py(ty(s.y[i]))) << " ";
        }
        o << "\"/>\n";
        if (!s.label.empty()) {
            const double ly = top + 16 + 16 * static_cast<double>(k);
            o << "<line x1=\"" << left + pw - 150 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw - 130
              << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
              << "<text x=\"" << left + pw - 125 << "\" y=\"" << ly << "\" " << font << ">" << xml_escape(s.label)
              << "</text>\n";
        }
    }
    o << "</svg>\n";
    return o.str();
}

void write_svg(const std::filesystem::path& path, const SvgPlot& plot, const std::vector<std::string>& manifest)
{
    write_text(path, render_svg(plot, manifest));
}

} // namespace ckdv
