#include "levcool/output.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "levcool/error.hpp"

namespace levcool {
namespace {

const char* n_columns[4] = {"n_1x", "n_2x", "n_1z", "n_2z"};
const char* palette_lines[4] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

std::string num(double v)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

// Fixed-precision text for SVG coordinates and labels.
std::string fixed(double v, int digits = 2)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string label(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v)
    {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    bool empty() const { return !(lo <= hi); }
    // Avoid a zero-width span.
    Range padded() const
    {
        Range r = *this;
        if (r.hi - r.lo <= 0.0) {
            const double d = r.lo != 0.0 ? 0.5 * std::abs(r.lo) : 0.5;
            r.lo -= d;
            r.hi += d;
        }
        return r;
    }
    double frac(double v) const { return (v - lo) / (hi - lo); }
};

// Perceptually ordered ramp from dark blue through green to yellow.
std::string ramp(double t)
{
    static const std::array<std::array<double, 3>, 5> stops{{
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
    t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
    const double f = t - i;
    char buf[16];
    int c[3];
    for (int k = 0; k < 3; ++k)
        c[k] = static_cast<int>(std::lround(stops[i][k] + f * (stops[i + 1][k] - stops[i][k])));
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
    return buf;
}

class Svg {
public:
    Svg(double w, double h) : w_(w), h_(h)
    {
        out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(w, 0) << "\" height=\"" << fixed(h, 0)
             << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
             << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    }
    void text(double x, double y, const std::string& s, const char* anchor = "middle", double rotate = 0.0)
    {
        out_ << "<text x=\"" << fixed(x) << "\" y=\"" << fixed(y) << "\" text-anchor=\"" << anchor << "\"";
        if (rotate != 0.0)
            out_ << " transform=\"rotate(" << fixed(rotate, 0) << ' ' << fixed(x) << ' ' << fixed(y) << ")\"";
        out_ << '>' << escape(s) << "</text>\n";
    }
    void line(double x1, double y1, double x2, double y2, const char* stroke = "black")
    {
        out_ << "<line x1=\"" << fixed(x1) << "\" y1=\"" << fixed(y1) << "\" x2=\"" << fixed(x2) << "\" y2=\""
             << fixed(y2) << "\" stroke=\"" << stroke << "\"/>\n";
    }
    void rect(double x, double y, double w, double h, const std::string& fill, const char* stroke = "none")
    {
        out_ << "<rect x=\"" << fixed(x) << "\" y=\"" << fixed(y) << "\" width=\"" << fixed(w) << "\" height=\""
             << fixed(h) << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\"/>\n";
    }
    void polyline(const std::vector<std::pair<double, double>>& pts, const char* stroke)
    {
        if (pts.empty())
            return;
        out_ << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << stroke << "\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i)
            out_ << (i ? " " : "") << fixed(pts[i].first) << ',' << fixed(pts[i].second);
        out_ << "\"/>\n";
    }
    std::string finish()
    {
        out_ << "</svg>\n";
        return out_.str();
    }
    double width() const { return w_; }
    double height() const { return h_; }

private:
    double w_, h_;
    std::ostringstream out_;
};

struct Frame {
    double x0, y0, w, h;  // plot area, y0 at the top
    double px(const Range& r, double v) const { return x0 + r.frac(v) * w; }
    double py(const Range& r, double v) const { return y0 + h - r.frac(v) * h; }
};

void axes_box(Svg& svg, const Frame& f, const Range& xr, const Range& yr, const std::string& xlabel,
              const std::string& ylabel, bool log_y)
{
    svg.rect(f.x0, f.y0, f.w, f.h, "none", "black");
    for (int i = 0; i <= 4; ++i) {
        const double xv = xr.lo + (xr.hi - xr.lo) * i / 4.0;
        const double x = f.px(xr, xv);
        svg.line(x, f.y0 + f.h, x, f.y0 + f.h + 4);
        svg.text(x, f.y0 + f.h + 17, label(xv));
        const double yv = yr.lo + (yr.hi - yr.lo) * i / 4.0;
        const double y = f.py(yr, yv);
        svg.line(f.x0 - 4, y, f.x0, y);
        svg.text(f.x0 - 6, y + 4, label(log_y ? std::pow(10.0, yv) : yv), "end");
    }
    svg.text(f.x0 + f.w / 2, f.y0 + f.h + 34, xlabel);
    svg.text(f.x0 - 62, f.y0 + f.h / 2, ylabel, "middle", -90);
}

std::string empty_plot(const std::string& title)
{
    Svg svg(480, 320);
    svg.rect(60, 30, 380, 240, "none", "black");
    svg.text(250, 20, title);
    svg.text(250, 155, "no stable points to plot");
    return svg.finish();
}

std::vector<int> populated(const std::vector<RunRecord>& records)
{
    std::vector<int> cols;
    for (int l = 0; l < 4; ++l)
        if (std::any_of(records.begin(), records.end(), [&](const RunRecord& r) { return r.n_bar[l].has_value(); }))
            cols.push_back(l);
    return cols;
}

bool plottable(const RunRecord& r, int l) { return r.stable && r.n_bar[l] && *r.n_bar[l] > 0.0; }

std::string line_plot(const std::vector<RunRecord>& records, const SweepAxis& axis)
{
    const std::vector<int> cols = populated(records);
    Range xr, yr;
    for (const RunRecord& r : records) {
        xr.add(r.axes.at(0));
        for (int l : cols)
            if (plottable(r, l))
                yr.add(std::log10(*r.n_bar[l]));
    }
    if (yr.empty())
        return empty_plot("mean phonon number vs " + axis.key);
    xr = xr.padded();
    yr = yr.padded();
    Svg svg(660, 400);
    const Frame f{90, 30, 440, 310};
    axes_box(svg, f, xr, yr, axis.key + (axis.unit.empty() ? "" : " [" + axis.unit + "]"), "mean phonon number",
             true);
    svg.text(f.x0 + f.w / 2, 20, "mean phonon number vs " + axis.key);
    for (std::size_t k = 0; k < cols.size(); ++k) {
        const int l = cols[k];
        std::vector<std::pair<double, double>> pts;
        auto flush = [&] {
            svg.polyline(pts, palette_lines[l]);
            pts.clear();
        };
        for (const RunRecord& r : records) {
            if (!plottable(r, l)) {
                flush();
                continue;
            }
            pts.emplace_back(f.px(xr, r.axes[0]), f.py(yr, std::log10(*r.n_bar[l])));
        }
        flush();
        const double ly = f.y0 + 14 + 18 * static_cast<double>(k);
        svg.line(f.x0 + f.w + 12, ly - 4, f.x0 + f.w + 36, ly - 4, palette_lines[l]);
        svg.text(f.x0 + f.w + 42, ly, n_columns[l], "start");
    }
    return svg.finish();
}

std::string heatmap(const std::vector<RunRecord>& records, const std::vector<SweepAxis>& axes)
{
    const std::vector<int> cols = populated(records);
    Range cr;
    for (const RunRecord& r : records)
        for (int l : cols)
            if (plottable(r, l))
                cr.add(std::log10(*r.n_bar[l]));
    if (cr.empty())
        return empty_plot("mean phonon number over " + axes[0].key + " and " + axes[1].key);
    cr = cr.padded();
    Range xr, yr;
    xr.add(axes[0].start);
    xr.add(axes[0].stop);
    yr.add(axes[1].start);
    yr.add(axes[1].stop);
    xr = xr.padded();
    yr = yr.padded();
    const double panel = 300, gap = 110;
    const double width = 90 + cols.size() * (panel + gap) + 60;
    Svg svg(width, 420);
    const int nx = axes[0].count, ny = axes[1].count;
    for (std::size_t k = 0; k < cols.size(); ++k) {
        const int l = cols[k];
        const Frame f{90 + k * (panel + gap), 40, panel, panel};
        const double cw = f.w / nx, ch = f.h / ny;
        for (std::size_t i = 0; i < records.size(); ++i) {
            const RunRecord& r = records[i];
            if (!plottable(r, l))
                continue;
            const int ix = static_cast<int>(i / ny), iy = static_cast<int>(i % ny);
            svg.rect(f.x0 + ix * cw, f.y0 + f.h - (iy + 1) * ch, cw + 0.05, ch + 0.05,
                     ramp(cr.frac(std::log10(*r.n_bar[l]))));
        }
        axes_box(svg, f, xr, yr, axes[0].key, axes[1].key, false);
        svg.text(f.x0 + f.w / 2, 28, std::string("log10 ") + n_columns[l]);
    }
    // Colour bar shared by every panel.
    const double bx = width - 50, by = 40, bh = panel;
    for (int i = 0; i < 50; ++i)
        svg.rect(bx, by + bh - (i + 1) * bh / 50, 14, bh / 50 + 0.05, ramp((i + 0.5) / 50));
    svg.text(bx + 7, by - 6, label(cr.hi));
    svg.text(bx + 7, by + bh + 16, label(cr.lo));
    return svg.finish();
}

}  // namespace

std::string emit_csv(const std::vector<RunRecord>& records, const std::vector<std::string>& axis_names)
{
    std::ostringstream out;
    for (const std::string& a : axis_names)
        out << csv_field(a) << ',';
    out << "n_1x,n_2x,n_1z,n_2z,stable,margin,dark_residual_x,dark_residual_z,error\n";
    for (const RunRecord& r : records) {
        for (std::size_t i = 0; i < axis_names.size(); ++i)
            out << (i < r.axes.size() ? num(r.axes[i]) : std::string()) << ',';
        for (const auto& n : r.n_bar)
            out << opt(n) << ',';
        const bool evaluated = r.failure == FailureKind::none;
        out << (evaluated ? (r.stable ? "1" : "0") : "") << ',' << (evaluated ? num(r.margin) : "") << ','
            << opt(r.dark_residual[0]) << ',' << opt(r.dark_residual[1]) << ',' << csv_field(r.error) << '\n';
    }
    return out.str();
}

std::string emit_svg(const std::vector<RunRecord>& records, const std::vector<SweepAxis>& axes)
{
    if (records.empty() || axes.empty())
        return empty_plot("empty sweep");
    if (axes.size() == 1)
        return line_plot(records, axes[0]);
    return heatmap(records, axes);
}

std::string emit_force_csv(const std::vector<ForceScanRow>& rows)
{
    std::ostringstream out;
    out << "r_over_lambda,kr,fx_exact,fx_far,fz_exact,fz_far\n";
    for (const ForceScanRow& r : rows)
        out << num(r.r_over_lambda) << ',' << num(r.kr) << ',' << num(r.fx_exact) << ',' << num(r.fx_far) << ','
            << num(r.fz_exact) << ',' << num(r.fz_far) << '\n';
    return out.str();
}

std::string emit_force_svg(const std::vector<ForceScanRow>& rows)
{
    if (rows.empty())
        return empty_plot("binding force");
    Range xr, yr;
    for (const ForceScanRow& r : rows) {
        xr.add(r.r_over_lambda);
        for (double v : {r.fx_exact, r.fx_far, r.fz_exact, r.fz_far})
            yr.add(v);
    }
    xr = xr.padded();
    yr = yr.padded();
    Svg svg(700, 400);
    const Frame f{100, 30, 440, 310};
    axes_box(svg, f, xr, yr, "separation / wavelength", "force [N]", false);
    svg.text(f.x0 + f.w / 2, 20, "optical binding force");
    const char* names[4] = {"Fx exact", "Fx far field", "Fz exact", "Fz far field"};
    for (int c = 0; c < 4; ++c) {
        std::vector<std::pair<double, double>> pts;
        for (const ForceScanRow& r : rows) {
            const double v = c == 0 ? r.fx_exact : c == 1 ? r.fx_far : c == 2 ? r.fz_exact : r.fz_far;
            pts.emplace_back(f.px(xr, r.r_over_lambda), f.py(yr, v));
        }
        svg.polyline(pts, palette_lines[c]);
        const double ly = f.y0 + 14 + 18 * c;
        svg.line(f.x0 + f.w + 12, ly - 4, f.x0 + f.w + 36, ly - 4, palette_lines[c]);
        svg.text(f.x0 + f.w + 42, ly, names[c], "start");
    }
    return svg.finish();
}

void write_file(const std::string& path, const std::string& contents)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out << contents;
    if (!out.flush())
        throw IoError("failed writing '" + path + "'");
}

}  // namespace levcool
