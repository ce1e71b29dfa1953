// SPDX-License-Identifier: Apache-2.0
//
// beamtrace: location-aware mmWave beam alignment toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "beamtrace/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <sstream>

#include "beamtrace/dataset_io.hpp"

namespace beamtrace {

namespace {

std::string fixed6(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string compact(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string px(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape_xml(std::string_view s)
{
    std::string out;
    for (char c : s)
    {
        switch (c)
        {
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

struct ChartPoint
{
    double x = 0.0;
    double y = 0.0;
    std::string x_text;
    std::string y_text;
};

struct Series
{
    std::string label;
    std::vector<ChartPoint> points;
};

double field_value(const CsvTable &t, std::size_t row, std::size_t col)
{
    const auto v = parse_double(t.rows[row][col]);
    if (!v)
        throw DatasetError(row + 2, "column '" + t.header[col] + "' is not numeric");
    return *v;
}

constexpr const char *kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string render_chart(const std::string &title, const std::string &x_label, const std::string &y_label,
                         const std::vector<Series> &series)
{
    constexpr double width = 720.0, height = 440.0;
    constexpr double left = 70.0, right = 200.0, top = 40.0, bottom = 50.0;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto &s : series)
        for (const auto &p : s.points)
        {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
    if (!std::isfinite(xmin))
    {
        xmin = 0.0;
        xmax = 1.0;
        ymin = 0.0;
        ymax = 1.0;
    }
    if (xmax == xmin)
    {
        xmin -= 1.0;
        xmax += 1.0;
    }
    if (ymax == ymin)
    {
        ymin -= 1.0;
        ymax += 1.0;
    }
    const auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
    const auto sy = [&](double y) { return top + plot_h - (y - ymin) / (ymax - ymin) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(width) << "\" height=\"" << px(height)
        << "\" viewBox=\"0 0 " << px(width) << ' ' << px(height) << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << px(width) << "\" height=\"" << px(height) << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << px(left) << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << escape_xml(title)
        << "</text>\n";
    svg << "<rect x=\"" << px(left) << "\" y=\"" << px(top) << "\" width=\"" << px(plot_w) << "\" height=\""
        << px(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";

    constexpr int ticks = 5;
    for (int i = 0; i <= ticks; ++i)
    {
        const double fx = xmin + (xmax - xmin) * i / ticks;
        const double fy = ymin + (ymax - ymin) * i / ticks;
        svg << "<text x=\"" << px(sx(fx)) << "\" y=\"" << px(top + plot_h + 18)
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << compact(fx) << "</text>\n";
        svg << "<text x=\"" << px(left - 6) << "\" y=\"" << px(sy(fy) + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << compact(fy) << "</text>\n";
    }
    svg << "<text x=\"" << px(left + plot_w / 2) << "\" y=\"" << px(height - 10)
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" << escape_xml(x_label)
        << "</text>\n";
    svg << "<text x=\"16\" y=\"" << px(top + plot_h / 2) << "\" font-family=\"sans-serif\" font-size=\"12\" "
        << "text-anchor=\"middle\" transform=\"rotate(-90 16 " << px(top + plot_h / 2) << ")\">" << escape_xml(y_label)
        << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i)
    {
        const auto &s = series[i];
        const char *color = kPalette[i % std::size(kPalette)];
        svg << "<g data-series=\"" << escape_xml(s.label) << "\" stroke=\"" << color << "\" fill=\"" << color
            << "\">\n";
        if (s.points.size() > 1)
        {
            svg << "<polyline fill=\"none\" points=\"";
            for (std::size_t j = 0; j < s.points.size(); ++j)
                svg << (j ? " " : "") << px(sx(s.points[j].x)) << ',' << px(sy(s.points[j].y));
            svg << "\"/>\n";
        }
        for (const auto &p : s.points)
            svg << "<circle cx=\"" << px(sx(p.x)) << "\" cy=\"" << px(sy(p.y)) << "\" r=\"3\" data-x=\""
                << escape_xml(p.x_text) << "\" data-y=\"" << escape_xml(p.y_text) << "\"/>\n";
        svg << "</g>\n";
        const double ly = top + 14.0 + 18.0 * static_cast<double>(i);
        svg << "<line x1=\"" << px(left + plot_w + 12) << "\" y1=\"" << px(ly - 4) << "\" x2=\""
            << px(left + plot_w + 32) << "\" y2=\"" << px(ly - 4) << "\" stroke=\"" << color << "\"/>\n";
        svg << "<text x=\"" << px(left + plot_w + 38) << "\" y=\"" << px(ly)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(s.label) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

// Groups rows by key (first-appearance order), keeping finite points only.
std::vector<Series> collect(const CsvTable &t, const std::function<std::string(std::size_t)> &key,
                            std::size_t x_col, std::size_t y_col)
{
    std::vector<Series> out;
    std::map<std::string, std::size_t> index;
    for (std::size_t r = 0; r < t.rows.size(); ++r)
    {
        const std::string k = key(r);
        auto it = index.find(k);
        if (it == index.end())
        {
            it = index.emplace(k, out.size()).first;
            out.push_back({k, {}});
        }
        const double x = field_value(t, r, x_col);
        const double y = field_value(t, r, y_col);
        if (std::isfinite(x) && std::isfinite(y))
            out[it->second].points.push_back({x, y, t.rows[r][x_col], t.rows[r][y_col]});
    }
    return out;
}

std::string write_text(const std::filesystem::path &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("Cannot write '" + path.string() + "'.");
    out << text;
    if (!out)
        throw std::runtime_error("Failed while writing '" + path.string() + "'.");
    return text;
}

} // namespace

std::size_t CsvTable::column(std::string_view name) const
{
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return i;
    throw DatasetError(1, "missing column '" + std::string(name) + "'");
}

CsvTable read_csv(std::istream &in)
{
    CsvTable t;
    std::string line;
    if (!std::getline(in, line))
        throw DatasetError(0, "CSV file is empty");
    t.header = split_csv_line(line);
    std::size_t row = 1;
    while (std::getline(in, line))
    {
        ++row;
        if (line.empty() || line == "\r")
            continue;
        auto fields = split_csv_line(line);
        if (fields.size() != t.header.size())
            throw DatasetError(row, "expected " + std::to_string(t.header.size()) + " columns, found " +
                                        std::to_string(fields.size()));
        t.rows.push_back(std::move(fields));
    }
    return t;
}

std::string bmbpsf_csv(std::string_view param, const std::vector<SweepRow> &rows)
{
    std::ostringstream out;
    out << "sweep_param,sweep_value,algorithm,index,mean_dbm,median_dbm\n";
    for (const auto &row : rows)
        for (const auto &s : row.report.summary)
            for (std::size_t i = 0; i < s.bmbpsf_mean.size(); ++i)
                out << param << ',' << compact(row.value) << ',' << to_string(s.algorithm) << ',' << i + 1 << ','
                    << fixed6(s.bmbpsf_mean[i]) << ',' << fixed6(s.bmbpsf_median[i]) << '\n';
    return out.str();
}

std::string nmbp_csv(std::string_view param, const std::vector<SweepRow> &rows)
{
    std::ostringstream out;
    out << "sweep_param,sweep_value,algorithm,nmbp_mean,nmbp_median,censor_rate,first_pick_mean_dbm,"
           "selected_mean_dbm,mean_nn_distance_m,n_samples\n";
    for (const auto &row : rows)
        for (const auto &s : row.report.summary)
            out << param << ',' << compact(row.value) << ',' << to_string(s.algorithm) << ',' << fixed6(s.nmbp_mean)
                << ',' << fixed6(s.nmbp_median) << ',' << fixed6(s.censor_rate) << ',' << fixed6(s.first_pick_mean)
                << ',' << fixed6(s.selected_mean) << ',' << fixed6(row.report.mean_nn_distance) << ','
                << s.nmbp_count << '\n';
    return out.str();
}

std::string render_bmbpsf_svg(const CsvTable &t)
{
    const std::size_t param = t.column("sweep_param");
    const std::size_t value = t.column("sweep_value");
    const std::size_t alg = t.column("algorithm");
    const auto series = collect(
        t,
        [&](std::size_t r) {
            if (t.rows[r][param] == "none")
                return t.rows[r][alg];
            return t.rows[r][alg] + " " + t.rows[r][param] + "=" + t.rows[r][value];
        },
        t.column("index"), t.column("mean_dbm"));
    return render_chart("Best measured beam pair so far", "measurement index", "mean RSS (dBm)", series);
}

std::string render_nmbp_svg(const CsvTable &t)
{
    const std::size_t alg = t.column("algorithm");
    const std::string x_label = t.rows.empty() ? "sweep value" : t.rows.front()[t.column("sweep_param")];
    const auto series = collect(
        t, [&](std::size_t r) { return t.rows[r][alg]; }, t.column("sweep_value"), t.column("nmbp_mean"));
    return render_chart("Measurements to reach the best pair within the margin", x_label, "mean NMBP", series);
}

void write_report(const std::filesystem::path &dir, std::string_view param, const std::vector<SweepRow> &rows)
{
    std::filesystem::create_directories(dir);
    write_text(dir / "bmbpsf.csv", bmbpsf_csv(param, rows));
    write_text(dir / "nmbp.csv", nmbp_csv(param, rows));
    render_reports(dir);
}

std::vector<std::filesystem::path> render_reports(const std::filesystem::path &dir)
{
    if (!std::filesystem::is_directory(dir))
        throw std::runtime_error("Report directory '" + dir.string() + "' does not exist.");
    std::vector<std::filesystem::path> written;
    const std::pair<const char *, std::string (*)(const CsvTable &)> kinds[] = {
        {"bmbpsf", &render_bmbpsf_svg},
        {"nmbp", &render_nmbp_svg},
    };
    for (const auto &[stem, render] : kinds)
    {
        const auto csv = dir / (std::string(stem) + ".csv");
        if (!std::filesystem::exists(csv))
            continue;
        std::ifstream in(csv, std::ios::binary);
        if (!in)
            throw std::runtime_error("Cannot read '" + csv.string() + "'.");
        const auto svg = dir / (std::string(stem) + ".svg");
        write_text(svg, render(read_csv(in)));
        written.push_back(svg);
    }
    if (written.empty())
        throw std::runtime_error("No report CSV files found in '" + dir.string() + "'.");
    return written;
}

} // namespace beamtrace
