#include "graphon/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>

#include "graphon/errors.hpp"

namespace graphon {

namespace {

constexpr double kWidth = 640.0, kHeight = 420.0;
constexpr double kLeft = 64.0, kRight = 24.0, kTop = 36.0, kBottom = 48.0;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// Blue-to-orange ramp indexed by a value in [0,1].
std::string ramp_color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const int r = static_cast<int>(40 + t * (230 - 40));
    const int g = static_cast<int>(90 + t * (140 - 90));
    const int b = static_cast<int>(200 - t * (200 - 40));
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    bool ok() const { return lo <= hi; }
    void pad() {
        if (!ok()) {
            lo = 0.0;
            hi = 1.0;
        } else if (lo == hi) {
            lo -= 0.5;
            hi += 0.5;
        } else {
            const double p = 0.05 * (hi - lo);
            lo -= p;
            hi += p;
        }
    }
};

}  // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series) {
    Range xr, yr;
    for (const auto& s : series) {
        for (double v : s.x) xr.add(v);
        for (std::size_t i = 0; i < s.y.size(); ++i) {
            const double half = i < s.band.size() ? s.band[i] : 0.0;
            yr.add(s.y[i] - half);
            yr.add(s.y[i] + half);
        }
    }
    const bool empty = !xr.ok() || !yr.ok();
    xr.pad();
    yr.pad();

    auto px = [&](double v) { return kLeft + (v - xr.lo) / (xr.hi - xr.lo) * (kWidth - kLeft - kRight); };
    auto py = [&](double v) { return kHeight - kBottom - (v - yr.lo) / (yr.hi - yr.lo) * (kHeight - kTop - kBottom); };

    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << title << "</text>\n";

    // Axes and ticks.
    out << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight
        << "\" y2=\"" << kHeight - kBottom << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
        << kHeight - kBottom << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = xr.lo + k * (xr.hi - xr.lo) / 4;
        const double yv = yr.lo + k * (yr.hi - yr.lo) / 4;
        out << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << kHeight - kBottom + 16
            << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt_tick(xv) << "</text>\n";
        out << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt(py(yv) + 3)
            << "\" text-anchor=\"end\" font-size=\"10\">" << fmt_tick(yv) << "</text>\n";
    }
    out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-size=\"12\">" << x_label << "</text>\n";
    out << "<text x=\"16\" y=\"" << kHeight / 2
        << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 " << kHeight / 2
        << ")\">" << y_label << "</text>\n";

    if (empty)
        out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight / 2
            << "\" text-anchor=\"middle\" font-size=\"12\" fill=\"gray\">no data</text>\n";

    for (const auto& s : series) {
        if (s.x.empty()) continue;
        if (!s.band.empty()) {
            out << "<path d=\"M";
            for (std::size_t i = 0; i < s.x.size(); ++i)
                out << fmt(px(s.x[i])) << ' ' << fmt(py(s.y[i] + s.band[i])) << (i + 1 < s.x.size() ? " L" : " ");
            for (std::size_t j = s.x.size(); j-- > 0;)
                out << "L" << fmt(px(s.x[j])) << ' ' << fmt(py(s.y[j] - s.band[j])) << ' ';
            out << "Z\" fill=\"" << s.color << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
        }
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << (i + 1 < s.x.size() ? " " : "");
        out << "\"/>\n";
    }

    // Legend (skipped for large fans).
    if (series.size() <= 8) {
        double ly = kTop + 6;
        for (const auto& s : series) {
            if (s.label.empty()) continue;
            out << "<rect x=\"" << kWidth - kRight - 130 << "\" y=\"" << fmt(ly - 8)
                << "\" width=\"10\" height=\"3\" fill=\"" << s.color << "\"/>\n";
            out << "<text x=\"" << kWidth - kRight - 115 << "\" y=\"" << fmt(ly - 4)
                << "\" font-size=\"10\">" << s.label << "</text>\n";
            ly += 14;
        }
    }
    out << "</svg>\n";
}

std::vector<std::string> plot_trajectory(const CsvTable& traj, const std::string& out_prefix) {
    const int ci = traj.column_index("particle");
    const int cl = traj.column_index("label");
    const int ct = traj.column_index("t");
    const int cy = traj.column_index("Y");
    const int cx = traj.column_index("X");
    if (ci < 0 || cl < 0 || ct < 0 || cy < 0 || cx < 0)
        throw IoError("plot_trajectory: missing trajectory columns");

    std::map<int, PlotSeries> y_fans, x_fans;
    for (const auto& row : traj.rows) {
        const int p = static_cast<int>(row[ci]);
        auto& sy = y_fans[p];
        auto& sx = x_fans[p];
        if (sy.color.empty()) {
            sy.color = ramp_color(row[cl]);
            sx.color = sy.color;
        }
        sy.x.push_back(row[ct]);
        sy.y.push_back(row[cy]);
        sx.x.push_back(row[ct]);
        sx.y.push_back(row[cx]);
    }
    // Thin dense batches to a readable fan.
    auto thin = [](std::map<int, PlotSeries>& fans) {
        std::vector<PlotSeries> out;
        const std::size_t stride = fans.size() > 64 ? fans.size() / 64 + 1 : 1;
        std::size_t k = 0;
        for (auto& [p, s] : fans) {
            if (k++ % stride == 0) out.push_back(std::move(s));
        }
        return out;
    };
    const std::string y_path = out_prefix + "_y_paths.svg";
    const std::string x_path = out_prefix + "_x_paths.svg";
    write_svg_plot(y_path, "Value process paths", "t", "Y_t", thin(y_fans));
    write_svg_plot(x_path, "Wealth paths", "t", "X_t", thin(x_fans));
    return {y_path, x_path};
}

std::vector<std::string> plot_train_report(const CsvTable& report, const std::string& out_prefix) {
    const int ck = report.column_index("iteration");
    const int ctl = report.column_index("train_loss");
    const int cvl = report.column_index("val_loss");
    const int cre = report.column_index("val_rel_error");
    if (ck < 0 || ctl < 0 || cvl < 0) throw IoError("plot_train_report: missing columns");

    auto log10_series = [&](int col, const std::string& label, const std::string& color) {
        PlotSeries s;
        s.label = label;
        s.color = color;
        for (const auto& row : report.rows) {
            if (row[col] <= 0.0) continue;
            s.x.push_back(row[ck]);
            s.y.push_back(std::log10(row[col]));
        }
        return s;
    };
    const std::string loss_path = out_prefix + "_loss.svg";
    write_svg_plot(loss_path, "Training and validation loss", "iteration", "log10 loss",
                   {log10_series(ctl, "train", "#2860c8"), log10_series(cvl, "validation", "#e68c28")});
    std::vector<std::string> files = {loss_path};
    if (cre >= 0) {
        bool any = false;
        for (const auto& row : report.rows) any = any || row[cre] >= 0.0;
        if (any) {
            const std::string err_path = out_prefix + "_rel_error.svg";
            write_svg_plot(err_path, "Validation relative error", "iteration", "log10 error (%)",
                           {log10_series(cre, "rel. error", "#287a3c")});
            files.push_back(err_path);
        }
    }
    return files;
}

std::vector<std::string> plot_utilities(const CsvTable& utilities, const std::string& out_prefix) {
    const int cl = utilities.column_index("label");
    const int cu = utilities.column_index("utility");
    const int cd = utilities.column_index("degenerate");
    if (cl < 0 || cu < 0) throw IoError("plot_utilities: missing columns");
    PlotSeries s;
    s.label = "V_0";
    s.color = "#2860c8";
    std::vector<std::pair<double, double>> pts;
    for (std::size_t r = 0; r < utilities.rows.size(); ++r) {
        if (cd >= 0 && utilities.rows[r][cd] != 0.0) continue;
        pts.emplace_back(utilities.rows[r][cl], utilities.rows[r][cu]);
    }
    std::sort(pts.begin(), pts.end());
    for (const auto& [u, v] : pts) {
        s.x.push_back(u);
        s.y.push_back(v);
    }
    const std::string path = out_prefix + "_utility_vs_label.svg";
    write_svg_plot(path, "Equilibrium utility vs label", "u", "V_0", {s});
    return {path};
}

std::vector<std::string> plot_metrics(const CsvTable& metrics, const std::string& out_prefix) {
    const int cg = metrics.column_index("group");
    const int ct = metrics.column_index("t");
    const int cx = metrics.column_index("mean_X");
    const int cb = metrics.column_index("mean_benchmarked_X");
    if (cg < 0 || ct < 0 || cx < 0 || cb < 0) throw IoError("plot_metrics: missing columns");

    std::map<std::string, std::pair<PlotSeries, PlotSeries>> by_group;
    const char* palette[] = {"#2860c8", "#e68c28", "#287a3c", "#b03030", "#7a28a0"};
    for (std::size_t r = 0; r < metrics.rows.size(); ++r) {
        const std::string& g = metrics.raw[r][cg];
        auto [it, fresh] = by_group.try_emplace(g);
        if (fresh) {
            const std::string color = palette[(by_group.size() - 1) % 5];
            it->second.first = {g, color, {}, {}, {}};
            it->second.second = {g, color, {}, {}, {}};
        }
        it->second.first.x.push_back(metrics.rows[r][ct]);
        it->second.first.y.push_back(metrics.rows[r][cx]);
        it->second.second.x.push_back(metrics.rows[r][ct]);
        it->second.second.y.push_back(metrics.rows[r][cb]);
    }
    std::vector<PlotSeries> wealth, bench;
    for (auto& [g, pair] : by_group) {
        wealth.push_back(std::move(pair.first));
        bench.push_back(std::move(pair.second));
    }
    const std::string w_path = out_prefix + "_wealth.svg";
    const std::string b_path = out_prefix + "_benchmarked_wealth.svg";
    write_svg_plot(w_path, "Expected wealth by group", "t", "E[X_t]", wealth);
    write_svg_plot(b_path, "Expected benchmarked wealth by group", "t", "E[X_t - avg]", bench);
    return {w_path, b_path};
}

}  // namespace graphon
