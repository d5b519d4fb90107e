#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

const std::string kCli = VTB_CLI_PATH;
const std::string kConfigDir = VTB_CONFIG_DIR;

int run_cli(const std::string& args) {
  const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  if (status < 0) return -1;
  return (status >> 8) & 0xff;  // decode the wait status
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("vtb_cli_test_" + name);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

struct Csv {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Csv parse_csv(const fs::path& p) {
  Csv csv;
  std::ifstream in(p);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      csv.comments.push_back(line);
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!have_header) {
      csv.header = cells;
      have_header = true;
    } else {
      csv.rows.push_back(cells);
    }
  }
  return csv;
}

const std::string kStressProblem = R"({"model": "maxwell", "modulus": 1.0, "viscosity": 1.6666666666666667})";

std::string stress_config(const std::string& extra) {
  return std::string(R"({"problem": {"side": "stress", "phase1": )") + kStressProblem +
         R"(, "phase2": {"model": "elastic", "modulus": 0.5}})" + (extra.empty() ? "" : ", ") +
         extra + "}";
}

}  // namespace

TEST_CASE("cli bounds: shipped no-information config reproduces the closed forms") {
  const auto out = temp_file("bounds_none.csv");
  REQUIRE(run_cli("bounds --config " + kConfigDir + "/bounds_no_info_stress.json --out " +
                  out.string()) == 0);
  const auto csv = parse_csv(out);
  REQUIRE(csv.header.size() >= 4);
  CHECK(csv.header[0] == "t");
  CHECK(csv.header[1] == "lower");
  CHECK(csv.header[2] == "upper");
  CHECK(csv.header.back() == "gap");
  REQUIRE(csv.rows.size() == 121);
  // provenance comments
  REQUIRE(csv.comments.size() >= 3);
  CHECK(csv.comments[0].find("version") != std::string::npos);
  CHECK(csv.comments[1].find("config-hash") != std::string::npos);
  // instantaneous bounds: phase-2 value 1 below, twice it above (normalized)
  CHECK(std::stod(csv.rows[0][0]) == doctest::Approx(0.0));
  CHECK(std::stod(csv.rows[0][1]) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::stod(csv.rows[0][2]) == doctest::Approx(2.0).epsilon(1e-9));
  // the late-time upper bound plateaus at the phase-2 value
  CHECK(std::stod(csv.rows.back()[2]) == doctest::Approx(1.0).epsilon(1e-9));
  for (const auto& row : csv.rows)
    CHECK(std::stod(row.back()) >= -1e-12);  // gap column nonnegative
}

TEST_CASE("cli bounds: volume-fraction information narrows the band") {
  const auto out_none = temp_file("bounds_none2.csv");
  const auto out_vf = temp_file("bounds_vf.csv");
  REQUIRE(run_cli("bounds --config " + kConfigDir + "/bounds_no_info_stress.json --out " +
                  out_none.string()) == 0);
  REQUIRE(run_cli("bounds --config " + kConfigDir + "/bounds_vf_stress.json --out " +
                  out_vf.string()) == 0);
  const auto none = parse_csv(out_none);
  const auto vf = parse_csv(out_vf);
  REQUIRE(none.rows.size() == vf.rows.size());
  for (std::size_t i = 0; i < none.rows.size(); ++i) {
    CHECK(std::stod(vf.rows[i][1]) >= std::stod(none.rows[i][1]) - 1e-9);
    CHECK(std::stod(vf.rows[i][2]) <= std::stod(none.rows[i][2]) + 1e-9);
  }
}

TEST_CASE("cli bounds: output is deterministic across runs and thread counts") {
  const auto out_a = temp_file("det_a.csv");
  const auto out_b = temp_file("det_b.csv");
  const std::string base = "bounds --config " + kConfigDir + "/bounds_iso_stress.json --out ";
  REQUIRE(run_cli(base + out_a.string() + " --threads 1") == 0);
  REQUIRE(run_cli(base + out_b.string() + " --threads 4") == 0);
  CHECK(slurp(out_a) == slurp(out_b));
}

TEST_CASE("cli domain: one frame file per requested time") {
  const auto out = temp_file("domain.csv");
  REQUIRE(run_cli("domain --config " + kConfigDir + "/domain_stress.json --out " + out.string()) ==
          0);
  for (int frame = 0; frame < 3; ++frame) {
    fs::path p = out;
    p.replace_filename("vtb_cli_test_domain_frame" + std::to_string(frame) + ".csv");
    REQUIRE(fs::exists(p));
    const auto csv = parse_csv(p);
    REQUIRE(csv.header.size() == 5);
    CHECK(csv.header[0] == "kind");
    int hulls = 0, laminates = 0;
    for (const auto& row : csv.rows) {
      if (row[0] == "hull") ++hulls;
      if (row[0] == "laminate") ++laminates;
    }
    CHECK(hulls > 0);
    CHECK(laminates == 101);
  }
}

TEST_CASE("cli kernel: direction fan and superadditivity footer") {
  const auto out = temp_file("kernel.csv");
  REQUIRE(run_cli("kernel --config " + kConfigDir + "/kernel_stress.json --out " + out.string()) ==
          0);
  const auto csv = parse_csv(out);
  REQUIRE(csv.header.size() == 6);
  CHECK(csv.rows.size() == 4 * 32);  // 4 times, 32 directions
  bool footer = false;
  for (const auto& c : csv.comments)
    if (c.find("superadditivity_check pass") != std::string::npos) footer = true;
  CHECK(footer);
}

TEST_CASE("cli invert: shipped measurements recover the generating volume fraction") {
  const auto out = temp_file("invert.csv");
  REQUIRE(run_cli("invert --config " + kConfigDir + "/invert_stress.json --out " + out.string()) ==
          0);
  const auto csv = parse_csv(out);
  REQUIRE(csv.rows.size() == 1);
  CHECK(csv.rows[0][0] == "1");  // consistent
  CHECK(csv.rows[0][1] == "0");  // non-empty
  CHECK(std::stod(csv.rows[0][2]) <= 0.5);
  CHECK(std::stod(csv.rows[0][3]) >= 0.5);
}

TEST_CASE("cli correlate: joint supports dominate the marginal sums") {
  const auto out = temp_file("correlate.csv");
  REQUIRE(run_cli("correlate --config " + kConfigDir + "/correlate_stress.json --out " +
                  out.string()) == 0);
  const auto csv = parse_csv(out);
  REQUIRE(csv.rows.size() == 3);
  for (const auto& row : csv.rows)
    CHECK(std::stod(row[2]) >= std::stod(row[3]) - 1e-9);
  // single-tuple joint equals its marginal
  CHECK(std::stod(csv.rows[0][2]) == doctest::Approx(std::stod(csv.rows[0][3])).epsilon(1e-12));
  // opposite directions at one time: joint support vanishes, marginals do not
  CHECK(std::stod(csv.rows[2][2]) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(std::stod(csv.rows[2][3]) < -1e-3);
}

TEST_CASE("cli error handling: exit codes") {
  // malformed JSON
  const auto bad = temp_file("bad.json");
  write_file(bad, "{ not json");
  CHECK(run_cli("bounds --config " + bad.string()) == 2);
  // missing config file
  CHECK(run_cli("bounds --config /nonexistent/nowhere.json") == 2);
  // structurally valid but inconsistent: volume fraction out of range
  const auto bad_vf = temp_file("bad_vf.json");
  write_file(bad_vf, stress_config(R"("info": {"volume_fraction": 1.5},
    "times": {"start": 0.0, "stop": 1.0, "count": 3})"));
  CHECK(run_cli("bounds --config " + bad_vf.string()) == 2);
  // subcommand preconditions: bounds without a time grid
  const auto no_times = temp_file("no_times.json");
  write_file(no_times, stress_config(""));
  CHECK(run_cli("bounds --config " + no_times.string()) == 2);
  // infeasible: a prescribed value no admissible composite can reach
  const auto infeasible = temp_file("infeasible.json");
  write_file(infeasible, stress_config(R"("info": {"volume_fraction": 0.4,
      "known_values": [{"time": 0.5, "value": 1.9}]},
    "times": {"start": 0.2, "stop": 1.0, "count": 3})"));
  CHECK(run_cli("bounds --config " + infeasible.string() + " --out " +
                temp_file("infeasible_out.csv").string()) == 3);
}
