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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "beamtrace/cli.hpp"
#include "beamtrace/dataset_io.hpp"
#include "beamtrace/report.hpp"
#include "beamtrace/scenario.hpp"

using namespace beamtrace;
namespace fs = std::filesystem;

namespace {

struct CliResult
{
    int code;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "beamtrace");
    std::vector<const char *> argv;
    for (const auto &a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class TempDir
{
  public:
    TempDir()
    {
        std::random_device rd;
        path_ = fs::temp_directory_path() / ("beamtrace-test-" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    fs::path operator/(const std::string &name) const { return path_ / name; }
    const fs::path &path() const { return path_; }

  private:
    fs::path path_;
};

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const fs::path &p, const std::string &text)
{
    std::ofstream(p, std::ios::binary) << text;
}

const char *kSmallScenario = R"({
  "scene": {
    "bs": [75, 5],
    "obstacles": [[20, 60, 40, 80], [100, 90, 130, 110]]
  },
  "campaign": {
    "grid_spacing_m": 10,
    "num_train": 30,
    "num_trials": 2,
    "num_test_locations": 4,
    "sigma_test_m": 5,
    "assumed_sigma_test_m": 5,
    "master_seed": 5
  }
})";

std::size_t count(const std::string &hay, const std::string &needle)
{
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1))
        ++n;
    return n;
}

} // namespace

TEST_CASE("usage errors exit with 2 and one diagnostic line")
{
    auto r = cli({});
    CHECK(r.code == kExitUsage);
    CHECK(count(r.err, "\n") == 1);
    CHECK(r.out.find("Usage") != std::string::npos);

    r = cli({"frobnicate"});
    CHECK(r.code == kExitUsage);
    r = cli({"run", "--out", "x"});
    CHECK(r.code == kExitUsage);
    r = cli({"sweep", "--param", "nope", "--values", "1", "--out", "x"});
    CHECK(r.code == kExitUsage);
    r = cli({"sweep", "--param", "nt", "--values", "4,abc", "--out", "x"});
    CHECK(r.code == kExitUsage);
    CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("scenario errors map to distinct exit codes")
{
    TempDir dir;
    auto run_with = [&](const std::string &text) {
        spit(dir / "s.json", text);
        return cli({"run", "--config", (dir / "s.json").string(), "--out", (dir / "out").string()});
    };

    auto r = cli({"run", "--config", (dir / "missing.json").string(), "--out", (dir / "out").string()});
    CHECK(r.code == kExitMissingFile);
    CHECK(count(r.err, "\n") == 1);

    r = run_with("{\n  \"scene\": {\n    \"bs\": [75, 5],\n  }\n");
    CHECK(r.code == kExitSyntax);
    CHECK(r.err.find("line") != std::string::npos);

    r = run_with(R"({"scene": {"bs": [75, 5], "colour": 3}})");
    CHECK(r.code == kExitSchema);
    CHECK(r.err.find("colour") != std::string::npos);

    r = run_with(R"({"scene": {}})");
    CHECK(r.code == kExitSchema);
    CHECK(r.err.find("scene.bs") != std::string::npos);

    r = run_with(R"({"scene": {"bs": "here"}})");
    CHECK(r.code == kExitSchema);

    r = run_with(R"({"scene": {"bs": [75, 5], "obstacles": [[0,0,5,5],[10,10,20,20],[30,30,25,40]]}})");
    CHECK(r.code == kExitConstraint);
    CHECK(r.err.find("scene.obstacles[2]") != std::string::npos);

    r = run_with(R"({"scene": {"bs": [75, 5]}, "campaign": {"num_train": 1}})");
    CHECK(r.code == kExitConstraint);
    CHECK(r.err.find("campaign.num_train") != std::string::npos);

    r = run_with(R"({"scene": {"bs": [75, 5]}, "campaign": {"algorithms": ["esba", "psychic"]}})");
    CHECK(r.code == kExitSchema);
}

TEST_CASE("minimal scenario gets the documented defaults")
{
    const CampaignConfig c = parse_scenario_text(R"({"scene": {"bs": [75, 5]}})");
    CHECK(c.scene.carrier_freq_hz == 30e9);
    CHECK(c.scene.region == Rect{0.0, 0.0, 150.0, 150.0});
    CHECK(c.scene.obstacles.empty());
    CHECK(c.grid_spacing == 1.0);
    CHECK(c.nt == 16);
    CHECK(c.nr == 4);
    CHECK(c.tx_power_dbm == 0.0);
    CHECK(c.margin_db == 1.0);
    CHECK(c.bim_neighbors == 5);
    CHECK(c.budget == 10);
    CHECK(c.algorithms.size() == 5);
}

TEST_CASE("scenario serialization round trips")
{
    CampaignConfig c = parse_scenario_text(kSmallScenario);
    c.algorithms = {Algorithm::Loren, Algorithm::Esba};
    c.sigma_train = 2.5;
    c.master_seed = 0xfeedfacecafebeefULL;
    const std::string text = serialize_scenario(c);
    const CampaignConfig back = parse_scenario_text(text);
    CHECK(back == c);
    CHECK(serialize_scenario(back) == text);

    TempDir dir;
    write_scenario(c, dir / "c.json");
    CHECK(parse_scenario(dir / "c.json") == c);
    CHECK_THROWS_AS(parse_scenario(dir / "nope.json"), ScenarioError);
}

TEST_CASE("scene-gen writes a loadable scenario")
{
    TempDir dir;
    const auto p = (dir / "gen.json").string();
    REQUIRE(cli({"scene-gen", "--out", p, "--seed", "3", "--obstacles", "5"}).code == kExitOk);
    const CampaignConfig c = parse_scenario(p);
    CHECK(c.scene.obstacles.size() == 5);
    CHECK(c.master_seed == 3);
    const auto again = (dir / "gen2.json").string();
    REQUIRE(cli({"scene-gen", "--out", again, "--seed", "3", "--obstacles", "5"}).code == kExitOk);
    CHECK(slurp(p) == slurp(again));
}

TEST_CASE("dataset CSV round trip and errors")
{
    TrainingSet d;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-120.0, -60.0);
    for (int i = 0; i < 5; ++i)
    {
        RssMatrix m(4, 2);
        for (Eigen::Index k = 0; k < m.size(); ++k)
            m(k) = u(rng);
        d.records.push_back({Point2(i * 1.25, 7.0 - i), Point2(i * 1.25, 7.0 - i), m});
    }
    std::stringstream s;
    write_dataset(s, d);
    const TrainingSet back = read_dataset(s);
    REQUIRE(back.size() == 5);
    CHECK(back.tx_beams() == 4);
    CHECK(back.rx_beams() == 2);
    for (std::size_t i = 0; i < 5; ++i)
    {
        CHECK((back.records[i].rss_meas - d.records[i].rss_meas).cwiseAbs().maxCoeff() <= 1e-6);
        CHECK((back.records[i].est_loc - d.records[i].est_loc).norm() <= 1e-6);
    }

    std::stringstream one;
    TrainingSet single;
    single.records.push_back(d.records[0]);
    write_dataset(one, single);
    CHECK(read_dataset(one).size() == 1);

    std::stringstream empty;
    CHECK_THROWS_AS(read_dataset(empty), DatasetError);

    std::ostringstream header_only;
    write_dataset(header_only, single);
    const std::string header = header_only.str().substr(0, header_only.str().find('\n') + 1);
    std::stringstream no_rows(header);
    try
    {
        read_dataset(no_rows);
        FAIL("expected a DatasetError");
    }
    catch (const DatasetError &e)
    {
        CHECK(e.row() == 0);
    }

    std::stringstream ragged(header + header_only.str().substr(header.size()) + "1,2,3\n");
    try
    {
        read_dataset(ragged);
        FAIL("expected a DatasetError");
    }
    catch (const DatasetError &e)
    {
        CHECK(e.row() == 3);
    }

    CHECK(parse_double("1.5") == 1.5);
    CHECK_FALSE(parse_double("1.5x").has_value());
    CHECK(split_csv_line("a,b,,c\r") == std::vector<std::string>{"a", "b", "", "c"});
}

TEST_CASE("dataset-build and bad data exit code")
{
    TempDir dir;
    spit(dir / "s.json", kSmallScenario);
    const auto csv = (dir / "d.csv").string();
    REQUIRE(cli({"dataset-build", "--config", (dir / "s.json").string(), "--out", csv}).code == kExitOk);
    const TrainingSet d = load_dataset(csv);
    CHECK(d.size() == 30);
    CHECK(d.tx_beams() == 16);
    CHECK(d.rx_beams() == 4);

    spit(dir / "bad.csv", "loc_id,x,y\n");
    std::ifstream bad(dir / "bad.csv");
    CHECK_THROWS_AS(read_dataset(bad), DatasetError);
}

TEST_CASE("run is deterministic and report re-renders identically")
{
    TempDir dir;
    spit(dir / "s.json", kSmallScenario);
    const auto cfg = (dir / "s.json").string();
    REQUIRE(cli({"run", "--config", cfg, "--out", (dir / "a").string()}).code == kExitOk);
    REQUIRE(cli({"run", "--config", cfg, "--out", (dir / "b").string()}).code == kExitOk);
    for (const char *f : {"bmbpsf.csv", "nmbp.csv", "bmbpsf.svg", "nmbp.svg"})
    {
        REQUIRE(fs::exists(dir / "a" / f));
        CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
    }
    const std::string svg = slurp(dir / "a" / "bmbpsf.svg");
    fs::remove(dir / "a" / "bmbpsf.svg");
    REQUIRE(cli({"report", "--dir", (dir / "a").string()}).code == kExitOk);
    CHECK(slurp(dir / "a" / "bmbpsf.svg") == svg);

    const auto other = cli({"run", "--config", cfg, "--seed", "6", "--out", (dir / "c").string()});
    REQUIRE(other.code == kExitOk);
    CHECK(slurp(dir / "c" / "nmbp.csv") != slurp(dir / "a" / "nmbp.csv"));
}

TEST_CASE("sweep writes one row per value and algorithm")
{
    TempDir dir;
    spit(dir / "s.json", kSmallScenario);
    const auto r = cli({"sweep", "--config", (dir / "s.json").string(), "--param", "sigma_test", "--values",
                        "0,2,4,6,8,10", "--match", "--out", (dir / "sw").string()});
    REQUIRE(r.code == kExitOk);
    std::ifstream in(dir / "sw" / "nmbp.csv");
    const CsvTable t = read_csv(in);
    CHECK(t.rows.size() == 30);
    const auto alg = t.column("algorithm");
    const auto param = t.column("sweep_param");
    for (const char *name : {"esba", "hsba", "bim", "mabel", "loren"})
    {
        std::size_t n = 0;
        for (const auto &row : t.rows)
        {
            n += row[alg] == name;
            CHECK(row[param] == "sigma_test");
        }
        CHECK(n == 6);
    }
}

TEST_CASE("charts are rendered from the CSV alone")
{
    const std::string csv = "sweep_param,sweep_value,algorithm,index,mean_dbm,median_dbm\n"
                            "none,0,esba,1,-90.5,-91\n"
                            "none,0,esba,2,-80.25,-80\n"
                            "none,0,esba,3,-70,-70\n";
    std::istringstream in(csv);
    const CsvTable t = read_csv(in);
    const std::string svg = render_bmbpsf_svg(t);
    CHECK(count(svg, "<circle") == 3);
    CHECK(svg.find("data-y=\"-80.25\"") != std::string::npos);
    CHECK(svg.find("data-x=\"3\"") != std::string::npos);
    CHECK(render_bmbpsf_svg(t) == svg);

    TempDir dir;
    spit(dir / "bmbpsf.csv", csv);
    const auto written = render_reports(dir.path());
    REQUIRE(written.size() == 1);
    CHECK(slurp(dir / "bmbpsf.svg") == svg);

    std::istringstream ragged("a,b\n1\n");
    CHECK_THROWS_AS(read_csv(ragged), DatasetError);
}

#ifdef BEAMTRACE_CLI_PATH
TEST_CASE("installed binary reports usage errors through its exit status")
{
    const std::string cmd = std::string("\"") + BEAMTRACE_CLI_PATH + "\" run > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    CHECK(WEXITSTATUS(status) == kExitUsage);
}
#endif
