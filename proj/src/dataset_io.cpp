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

#include "beamtrace/dataset_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <regex>

namespace beamtrace {

DatasetError::DatasetError(std::size_t row, const std::string &what)
    : std::runtime_error(row == 0 ? what : "row " + std::to_string(row) + ": " + what), row_(row)
{
}

namespace {

constexpr const char *kFixedColumns[] = {"loc_id", "x_est", "y_est", "x_true", "y_true"};
constexpr std::size_t kNumFixed = 5;

std::string fixed6(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

} // namespace

std::vector<std::string> split_csv_line(const std::string &line)
{
    std::string s = line;
    if (!s.empty() && s.back() == '\r')
        s.pop_back();
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true)
    {
        const auto comma = s.find(',', start);
        fields.push_back(s.substr(start, comma - start));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return fields;
}

std::optional<double> parse_double(const std::string &text)
{
    if (text.empty())
        return std::nullopt;
    if (text == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const char *first = text.data();
    const char *last = text.data() + text.size();
    if (*first == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        return std::nullopt;
    return v;
}

void write_dataset(std::ostream &out, const TrainingSet &d, std::span<const std::size_t> loc_ids)
{
    validate_training_set(d);
    if (!loc_ids.empty() && loc_ids.size() != d.size())
        throw std::invalid_argument("One loc_id per record is required.");
    const auto mt = static_cast<Eigen::Index>(d.tx_beams());
    const auto mr = static_cast<Eigen::Index>(d.rx_beams());

    out << "loc_id,x_est,y_est,x_true,y_true";
    for (Eigen::Index m = 0; m < mt; ++m)
        for (Eigen::Index k = 0; k < mr; ++k)
            out << ",rss_m" << m << "_k" << k;
    out << '\n';
    for (std::size_t l = 0; l < d.size(); ++l)
    {
        const auto &r = d.records[l];
        out << (loc_ids.empty() ? l : loc_ids[l]) << ',' << fixed6(r.est_loc.x()) << ',' << fixed6(r.est_loc.y())
            << ',' << fixed6(r.true_loc.x()) << ',' << fixed6(r.true_loc.y());
        for (Eigen::Index m = 0; m < mt; ++m)
            for (Eigen::Index k = 0; k < mr; ++k)
                out << ',' << fixed6(r.rss_meas(m, k));
        out << '\n';
    }
}

void save_dataset(const TrainingSet &d, const std::filesystem::path &path, std::span<const std::size_t> loc_ids)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("Cannot write dataset '" + path.string() + "'.");
    write_dataset(out, d, loc_ids);
    if (!out)
        throw std::runtime_error("Failed while writing '" + path.string() + "'.");
}

TrainingSet read_dataset(std::istream &in)
{
    std::string line;
    if (!std::getline(in, line) || split_csv_line(line) == std::vector<std::string>{""})
        throw DatasetError(0, "dataset is empty");

    const auto header = split_csv_line(line);
    if (header.size() <= kNumFixed)
        throw DatasetError(1, "header has no RSS columns");
    for (std::size_t i = 0; i < kNumFixed; ++i)
        if (header[i] != kFixedColumns[i])
            throw DatasetError(1, "expected column '" + std::string(kFixedColumns[i]) + "', found '" + header[i] + "'");

    // The last RSS column declares (Mt - 1, Mr - 1); every column must then
    // appear in lexicographic order.
    static const std::regex rss_name(R"(rss_m(\d+)_k(\d+))");
    std::smatch match;
    if (!std::regex_match(header.back(), match, rss_name))
        throw DatasetError(1, "malformed column name '" + header.back() + "'");
    const std::size_t mt = std::stoul(match[1]) + 1;
    const std::size_t mr = std::stoul(match[2]) + 1;
    if (header.size() != kNumFixed + mt * mr)
        throw DatasetError(1, "header declares " + std::to_string(mt) + "x" + std::to_string(mr) + " beams but has " +
                                  std::to_string(header.size() - kNumFixed) + " RSS columns");
    for (std::size_t m = 0; m < mt; ++m)
        for (std::size_t k = 0; k < mr; ++k)
        {
            const std::string expected = "rss_m" + std::to_string(m) + "_k" + std::to_string(k);
            if (header[kNumFixed + m * mr + k] != expected)
                throw DatasetError(1, "expected column '" + expected + "'");
        }

    TrainingSet d;
    std::size_t row = 1;
    while (std::getline(in, line))
    {
        ++row;
        if (line.empty() || line == "\r")
            continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw DatasetError(row, "expected " + std::to_string(header.size()) + " columns, found " +
                                        std::to_string(fields.size()));
        std::vector<double> values(fields.size());
        for (std::size_t i = 0; i < fields.size(); ++i)
        {
            const auto v = parse_double(fields[i]);
            if (!v || !std::isfinite(*v))
                throw DatasetError(row, "column '" + header[i] + "' is not a finite number");
            values[i] = *v;
        }
        TrainingRecord rec;
        rec.est_loc = {values[1], values[2]};
        rec.true_loc = {values[3], values[4]};
        rec.rss_meas.resize(static_cast<Eigen::Index>(mt), static_cast<Eigen::Index>(mr));
        for (std::size_t m = 0; m < mt; ++m)
            for (std::size_t k = 0; k < mr; ++k)
                rec.rss_meas(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) =
                    values[kNumFixed + m * mr + k];
        d.records.push_back(std::move(rec));
    }
    if (d.empty())
        throw DatasetError(0, "dataset has no records");
    return d;
}

TrainingSet load_dataset(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DatasetError(0, "cannot open dataset '" + path.string() + "'");
    return read_dataset(in);
}

} // namespace beamtrace
