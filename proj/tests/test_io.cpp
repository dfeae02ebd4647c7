#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "rwre/csv.hpp"
#include "rwre/fit.hpp"
#include "rwre/fixtures.hpp"
#include "rwre/hull.hpp"
#include "rwre/model_json.hpp"
#include "rwre/parallel.hpp"

using namespace rwre;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "rwre_io_tests";
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RWRE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5e-300) == "-2.5e-300");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  const double x = 0.1 + 0.2;
  CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
}

TEST_CASE("csv quoting and layout") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  std::ostringstream out;
  CsvWriter w(out, "{\"k\":1}");
  w.header({"a", "b"});
  w.row({CsvWriter::num(0.5), CsvWriter::flag(true)});
  CHECK(out.str() == "# config: {\"k\":1}\r\na,b\r\n0.5,true\r\n");
  CHECK_THROWS(w.row({"1"}));
}

TEST_CASE("model json round trip") {
  for (const auto& name : fixture_names()) {
    const ModelSpec m = fixture(name);
    const nlohmann::json j = model_to_json(m);
    const ModelSpec back = model_from_json(j);
    CHECK(model_to_json(back) == j);
    CHECK((back.p0().probs() - m.p0().probs()).cwiseAbs().maxCoeff() == 0.0);
  }
  nlohmann::json j = model_to_json(fixture("d1-twopoint"));
  nlohmann::json extra = j;
  extra["colour"] = "blue";
  CHECK_THROWS_AS(model_from_json(extra), std::invalid_argument);
  nlohmann::json missing = j;
  missing.erase("kappa0");
  CHECK_THROWS_AS(model_from_json(missing), std::invalid_argument);
  nlohmann::json partial = j;
  partial["p0"].erase("-1");
  CHECK_THROWS_AS(model_from_json(partial), std::invalid_argument);
}

TEST_CASE("convex hull") {
  std::vector<Eigen::Vector2d> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.5, 0}, {0.2, 0.7}};
  const auto h = convex_hull(pts);
  CHECK(h.size() == 4);
  CHECK(hull_distance(h, {0.5, 0.5}) == 0.0);
  CHECK(hull_distance(h, {1.0, 0.3}) == 0.0);
  CHECK(hull_distance(h, {2.0, 0.5}) == doctest::Approx(1.0));
  CHECK(hull_distance(h, {2.0, 2.0}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(convex_hull({{1, 1}, {1, 1}}).size() == 1);
  const auto seg = convex_hull({{0, 0}, {1, 1}, {2, 2}});
  CHECK(seg.size() == 2);
  CHECK(hull_distance(seg, {1, 0}) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("log-log fit") {
  const std::vector<double> x{1, 2, 4, 8}, y{3, 3.0 / 8, 3.0 / 64, 3.0 / 512};
  const LineFit f = loglog_fit(x, y);
  CHECK(f.slope == doctest::Approx(-3.0));
  CHECK(f.points == 4);
  const std::vector<double> bad{1, -1};
  CHECK_THROWS_AS(loglog_fit(bad, bad), std::invalid_argument);
}

TEST_CASE("parallel helpers") {
  std::vector<double> xs(1000);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = 1.0 / static_cast<double>(i + 1);
  set_num_threads(4);
  std::vector<double> out(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { out[i] = 2.0 * xs[i]; });
  CHECK(pairwise_sum(out) == 2.0 * pairwise_sum(xs));
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                    if (i == 7) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
  set_num_threads(1);
}

TEST_CASE("command line exit codes") {
  const fs::path dir = scratch();
  const std::string out = " --out " + (dir / "x_").string();
  CHECK(run_cli("expand --fixture d1-twopoint" + out) == 0);
  CHECK(run_cli("expand --fixture no-such-fixture" + out) == 2);
  CHECK(run_cli("frobnicate" + out) == 2);
  CHECK(run_cli("expand --threads 0 --fixture d1-twopoint" + out) == 2);

  write_file(dir / "noseed.json", R"({"fixture": "d1-twopoint", "n_steps": 100, "n_replicates": 4})");
  CHECK(run_cli("simulate --config " + (dir / "noseed.json").string() + out) == 2);
  write_file(dir / "unknown.json", R"({"fixture": "d1-twopoint", "gamma": 0.1, "colour": 3})");
  CHECK(run_cli("expand --config " + (dir / "unknown.json").string() + out) == 2);
  write_file(dir / "nomodel.json", R"({"gamma": 0.1})");
  CHECK(run_cli("expand --config " + (dir / "nomodel.json").string() + out) == 2);
  write_file(dir / "broken.json", "{not json");
  CHECK(run_cli("expand --config " + (dir / "broken.json").string() + out) == 2);
  write_file(dir / "range.json", R"({"fixture": "d1-twopoint", "gamma": 0.5})");
  CHECK(run_cli("expand --config " + (dir / "range.json").string() + out) == 2);

  write_file(dir / "coarse.json", R"({"fixture": "speedup-s2", "integral_grid": 4, "n_steps": 10, "n_replicates": 2, "master_seed": 1})");
  CHECK(run_cli("speedup --config " + (dir / "coarse.json").string() + out) == 3);
}

TEST_CASE("command line output is reproducible") {
  const fs::path dir = scratch();
  write_file(dir / "sim.json", R"({"fixture": "d1-twopoint", "n_steps": 500, "n_replicates": 20, "master_seed": 5})");
  REQUIRE(run_cli("simulate --config " + (dir / "sim.json").string() + " --out " + (dir / "a_").string()) == 0);
  REQUIRE(run_cli("simulate --config " + (dir / "sim.json").string() + " --out " + (dir / "b_").string()) == 0);
  const std::string a = read_file(dir / "a_simulate.csv");
  CHECK(a == read_file(dir / "b_simulate.csv"));
  CHECK(a.rfind("# config: {", 0) == 0);
  CHECK(a.find("\"master_seed\":5") != std::string::npos);
  CHECK(a.find("within_3_stderr") != std::string::npos);

  REQUIRE(run_cli("expand --fixture d1-twopoint --out " + (dir / "e_").string()) == 0);
  const nlohmann::json report = nlohmann::json::parse(read_file(dir / "e_expansion.json"));
  CHECK(report.contains("config"));
}

}  // TEST_SUITE
