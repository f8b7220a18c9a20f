#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "fomc/experiment.hpp"

namespace fomc {

namespace {

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct Axes {
    bool log_x = false;
    bool log_y = false;
};

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                "#17becf", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22"};

std::string xml_escape(const std::string& s) {
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

std::string number(double x) {
    std::ostringstream out;
    out.precision(4);
    out << x;
    return out.str();
}

std::string render(const std::string& title, const std::string& x_label, const std::string& y_label,
                   std::vector<Series> series, Axes axes) {
    constexpr double kWidth = 720, kHeight = 480, kLeft = 80, kRight = 220, kTop = 50, kBottom = 60;
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;

    auto tx = [&](double v) { return axes.log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return axes.log_y ? std::log10(v) : v; };
    for (auto& s : series) {
        std::erase_if(s.points, [&](const auto& p) {
            return !std::isfinite(p.first) || !std::isfinite(p.second) || (axes.log_x && p.first <= 0) ||
                   (axes.log_y && p.second <= 0);
        });
        std::sort(s.points.begin(), s.points.end());
    }
    std::erase_if(series, [](const Series& s) { return s.points.empty(); });

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">" << xml_escape(title)
        << "</text>\n";
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">"
        << xml_escape(x_label) << (axes.log_x ? " (log)" : "") << "</text>\n";
    svg << "<text x=\"20\" y=\"" << kTop + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
        << kTop + plot_h / 2 << ")\">" << xml_escape(y_label) << (axes.log_y ? " (log)" : "") << "</text>\n";

    if (series.empty()) {
        svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kTop + plot_h / 2
            << "\" text-anchor=\"middle\" fill=\"gray\">no data</text>\n</svg>\n";
        return svg.str();
    }

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series) {
        for (auto [x, y] : s.points) {
            x0 = std::min(x0, tx(x));
            x1 = std::max(x1, tx(x));
            y0 = std::min(y0, ty(y));
            y1 = std::max(y1, ty(y));
        }
    }
    if (!axes.log_y) y0 = std::min(y0, 0.0);
    if (x1 - x0 < 1e-12) {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if (y1 - y0 < 1e-12) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    auto px = [&](double x) { return kLeft + (tx(x) - x0) / (x1 - x0) * plot_w; };
    auto py = [&](double y) { return kTop + plot_h - (ty(y) - y0) / (y1 - y0) * plot_h; };

    // Ticks: five evenly spaced in transformed coordinates.
    for (int i = 0; i <= 4; ++i) {
        const double fx = x0 + (x1 - x0) * i / 4.0;
        const double fy = y0 + (y1 - y0) * i / 4.0;
        const double sx = kLeft + plot_w * i / 4.0;
        const double sy = kTop + plot_h - plot_h * i / 4.0;
        svg << "<line x1=\"" << sx << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << sx << "\" y2=\""
            << kTop + plot_h + 5 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << sx << "\" y=\"" << kTop + plot_h + 18 << "\" text-anchor=\"middle\">"
            << number(axes.log_x ? std::pow(10.0, fx) : fx) << "</text>\n";
        svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << sy << "\" x2=\"" << kLeft << "\" y2=\"" << sy
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << sy + 4 << "\" text-anchor=\"end\">"
            << number(axes.log_y ? std::pow(10.0, fy) : fy) << "</text>\n";
    }

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto* color = kPalette[i % std::size(kPalette)];
        const auto& s = series[i];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : s.points) svg << px(x) << ',' << py(y) << ' ';
        svg << "\"/>\n";
        for (auto [x, y] : s.points) {
            svg << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
        }
        const double ly = kTop + 10 + 18.0 * static_cast<double>(i);
        svg << "<rect x=\"" << kWidth - kRight + 15 << "\" y=\"" << ly - 8 << "\" width=\"10\" height=\"10\" fill=\""
            << color << "\"/>\n";
        svg << "<text x=\"" << kWidth - kRight + 30 << "\" y=\"" << ly + 1 << "\" font-size=\"10\">"
            << xml_escape(s.name) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto k = v.size();
    return k % 2 ? v[k / 2] : (v[k / 2 - 1] + v[k / 2]) / 2.0;
}

std::optional<double> parse_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    try {
        std::size_t used = 0;
        const double x = std::stod(s, &used);
        if (used != s.size()) return std::nullopt;
        return x;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

// One series per model: the aggregate of `column` over seeds at each n.
std::vector<Series> per_model(const ReportTable& table, const std::string& column, bool use_median) {
    const int mc = table.column("model"), nc = table.column("n"), vc = table.column(column);
    if (mc < 0 || nc < 0 || vc < 0) return {};
    std::map<std::string, std::map<double, std::vector<double>>> values;
    std::vector<std::string> order;
    for (const auto& row : table.rows) {
        auto n = parse_number(row[nc]);
        auto v = parse_number(row[vc]);
        if (!n || !v) continue;
        if (!values.contains(row[mc])) order.push_back(row[mc]);
        values[row[mc]][*n].push_back(*v);
    }
    std::vector<Series> out;
    for (const auto& model : order) {
        Series s{model, {}};
        for (const auto& [n, vs] : values[model]) {
            double agg = 0;
            if (use_median) {
                agg = median(vs);
            } else {
                for (double v : vs) agg += v;
                agg /= static_cast<double>(vs.size());
            }
            s.points.emplace_back(n, agg);
        }
        out.push_back(std::move(s));
    }
    return out;
}

// One CCDF per (model, n), taken from the smallest seed present.
std::vector<Series> ccdf_series(const ReportTable& table) {
    const int mc = table.column("model"), nc = table.column("n"), sc = table.column("seed"),
              dc = table.column("degree"), cc = table.column("ccdf");
    if (mc < 0 || nc < 0 || sc < 0 || dc < 0 || cc < 0) return {};
    std::map<std::pair<std::string, std::string>, std::string> first_seed;
    std::vector<std::pair<std::string, std::string>> order;
    for (const auto& row : table.rows) {
        std::pair key{row[mc], row[nc]};
        auto it = first_seed.find(key);
        if (it == first_seed.end()) {
            first_seed.emplace(key, row[sc]);
            order.push_back(key);
        } else if (parse_number(row[sc]).value_or(0) < parse_number(it->second).value_or(0)) {
            it->second = row[sc];
        }
    }
    std::map<std::pair<std::string, std::string>, Series> by_key;
    for (const auto& row : table.rows) {
        std::pair key{row[mc], row[nc]};
        if (first_seed[key] != row[sc]) continue;
        auto d = parse_number(row[dc]);
        auto c = parse_number(row[cc]);
        if (!d || !c) continue;
        auto& s = by_key[key];
        s.name = row[mc] + " n=" + row[nc];
        s.points.emplace_back(*d, *c);
    }
    std::vector<Series> out;
    for (const auto& key : order) out.push_back(std::move(by_key[key]));
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

}  // namespace

std::vector<std::string> emit_plots(const std::string& report_path, const std::string& degree_path,
                                    const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    ReportTable report;
    if (std::filesystem::exists(report_path)) report = read_report(report_path);
    ReportTable degrees;
    if (!degree_path.empty() && std::filesystem::exists(degree_path)) degrees = read_report(degree_path);

    const std::filesystem::path dir(out_dir);
    std::vector<std::string> written;
    auto emit = [&](const std::string& name, const std::string& content) {
        const auto path = (dir / name).string();
        write_file(path, content);
        written.push_back(path);
    };
    emit("degree_ccdf.svg", render("Degree CCDF", "degree", "Pr[deg >= d]", ccdf_series(degrees), {true, true}));
    emit("bmin_vs_n.svg", render("Minimal b (median over seeds)", "n", "b_min", per_model(report, "b_min", true),
                                 {true, false}));
    emit("kernel_vs_n.svg", render("Kernel size (median over seeds)", "n", "kernel vertices",
                                   per_model(report, "kernel_out", true), {true, false}));
    emit("triangles_vs_n.svg", render("Triangles (mean over seeds)", "n", "triangles",
                                      per_model(report, "triangles", false), {true, false}));
    return written;
}

}  // namespace fomc
