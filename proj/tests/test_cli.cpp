#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "airsweep/io.hpp"

namespace fs = std::filesystem;

namespace {

const char* kCli = AIRSWEEP_CLI_PATH;

int run_cli(const std::string& args) {
  const std::string cmd = std::string("'") + kCli + "' " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "airsweep_cli_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

// A one-square-metre room keeps subprocess runs fast.
std::string small_config(const std::string& emission = "emission = 0 1") {
  return R"(room.width = 1
room.length = 1
room.height = 3.5
room.cell = 0.1
layout.d_x = 0.3
layout.d_y = 0.3
layout.rows = 3
layout.cols = 3
layout.origin_x = 0.2
layout.origin_y = 0.2
)" + emission + R"(
horizon = 20
source.handoff = 5
cough.droplet_count = 400
filter.v = 0.3
filter.r = 0.15
filter.n = 2
optimize.n_list = 2
optimize.grid_v = 2
optimize.grid_r = 2
optimize.v_max = 1.0
optimize.r_max = 0.25
optimize.tolerance = 1.0
optimize.budget = 6
optimize.slice_v = 0.3 0.6
optimize.slice_r = 0.1 0.2
optimize.slice_r_fixed = 0.15
optimize.slice_v_fixed = 0.3
)";
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "airsweep_cli_tests";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  airsweep::write_text_file(p.string(), text);
  return p;
}

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("--help exits zero, bad invocations exit 2") {
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("") == 2);                  // a subcommand is required
  CHECK(run_cli("--bogus simulate") == 2);  // unknown flag
  CHECK(run_cli("teleport") == 2);          // unknown subcommand
}

TEST_CASE("a bad config fails closed without creating outputs") {
  const fs::path out = fs::temp_directory_path() / "airsweep_cli_tests" / "never_created";
  fs::remove_all(out);

  SUBCASE("nonexistent config path") {
    CHECK(run_cli("simulate --config /nonexistent/x.cfg --out " + quoted(out)) == 2);
  }
  SUBCASE("unknown key") {
    const fs::path cfg = write_config("bad_key.cfg", "bogus.key = 3\n");
    CHECK(run_cli("simulate --config " + quoted(cfg) + " --out " + quoted(out)) == 2);
  }
  SUBCASE("value that fails validation") {
    const fs::path cfg = write_config("bad_rows.cfg", "layout.rows = 0\n");
    CHECK(run_cli("simulate --config " + quoted(cfg) + " --out " + quoted(out)) == 2);
  }
  SUBCASE("bad --jobs") {
    const fs::path cfg = write_config("ok.cfg", small_config());
    CHECK(run_cli("simulate --config " + quoted(cfg) + " --jobs 0 --out " + quoted(out)) == 2);
  }
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("simulate writes dosage table, summary, and requested heatmaps") {
  const fs::path cfg = write_config(
      "sim_patrol.cfg", small_config() + "filter.mode = patrol\n");
  const fs::path out = fresh_dir("simulate");
  REQUIRE(run_cli("simulate --config " + quoted(cfg) + " --seed 909 --snapshot 1,20 --out " +
                  quoted(out)) == 0);

  const std::string csv = slurp(out / "dosage.csv");
  CHECK(contains(csv, "observer,window_end_s,cumulative_dose_pfu"));
  CHECK(contains(csv, "observer,final_dose_pfu,robust_dose_pfu,risk,risk_margin_pfu"));
  CHECK(contains(csv, "FrontCenter,5,"));
  CHECK(contains(csv, "FrontCenter,20,"));

  const std::string sum = slurp(out / "summary.txt");
  CHECK(contains(sum, "command = simulate"));
  CHECK(contains(sum, "mode = patrol"));
  CHECK(contains(sum, "v_mps = 0.3"));
  CHECK(contains(sum, "release_offset_s = 0"));
  CHECK(contains(sum, "seed = 909"));
  CHECK(contains(sum, "total_virus_t1_pfu = "));
  CHECK(contains(sum, "total_virus_t20_pfu = "));
  CHECK(contains(sum, "observer.FrontCenter = final "));

  for (const char* name : {"net_t1.pgm", "net_t20.pgm"}) {
    const std::string pgm = slurp(out / name);
    CHECK(pgm.substr(0, 3) == "P5\n");
    CHECK(contains(pgm.substr(0, 16), "10 10"));
    CHECK(fs::exists(out / (std::string(name) + ".txt")));
  }
  CHECK_FALSE(fs::exists(out / "net_t5.pgm"));  // only requested times are rendered
}

TEST_CASE("a no-emission scenario runs clean and reports zero dose") {
  const fs::path cfg =
      write_config("sim_silent.cfg", small_config("emission = none"));
  const fs::path out = fresh_dir("silent");
  REQUIRE(run_cli("simulate --config " + quoted(cfg) + " --out " + quoted(out)) == 0);
  const std::string sum = slurp(out / "summary.txt");
  CHECK(contains(sum, "total_virus_t20_pfu = 0\n"));
  CHECK(contains(sum, "observer.FrontCenter = final 0 pfu, robust 0 pfu, below-reference"));
}

TEST_CASE("plume reruns are byte-identical") {
  const fs::path cfg = write_config("plume.cfg", small_config());
  const fs::path out1 = fresh_dir("plume1");
  const fs::path out2 = fresh_dir("plume2");
  REQUIRE(run_cli("plume --config " + quoted(cfg) + " --seed 4242 --out " + quoted(out1)) == 0);
  REQUIRE(run_cli("plume --config " + quoted(cfg) + " --seed 4242 --out " + quoted(out2)) == 0);

  for (const char* name : {"source.bin", "summary.txt", "plume_t1.pgm", "plume_t300.pgm"}) {
    CHECK(slurp(out1 / name) == slurp(out2 / name));
  }
  CHECK(slurp(out1 / "source.bin").size() > 100);

  const std::string sum = slurp(out1 / "summary.txt");
  CHECK(contains(sum, "command = plume"));
  CHECK(contains(sum, "handoff_s = 5"));
  CHECK(contains(sum, "source_x_m = 0.2"));
  CHECK(contains(sum, "source_y_m = 0.5"));
  CHECK(contains(sum, "total_virus_t0_pfu = "));
  CHECK(contains(sum, "extent90_t1_m = "));

  const fs::path out3 = fresh_dir("plume3");
  REQUIRE(run_cli("plume --config " + quoted(cfg) + " --seed 4243 --out " + quoted(out3)) == 0);
  CHECK(slurp(out1 / "source.bin") != slurp(out3 / "source.bin"));
}

TEST_CASE("compare normalizes doses against the worst case") {
  const fs::path cfg = write_config("compare.cfg", small_config());
  const fs::path out = fresh_dir("compare");
  REQUIRE(run_cli("compare --config " + quoted(cfg) + " --seed 909 --out " + quoted(out)) == 0);

  const std::string csv = slurp(out / "compare.csv");
  std::istringstream lines(csv);
  std::string header;
  REQUIRE(std::getline(lines, header));
  CHECK(header == "observer,mobile_N2,near_static,far_static,no_filter");

  double max_entry = 0.0;
  std::string row;
  while (std::getline(lines, row)) {
    std::istringstream cells(row);
    std::string cell;
    REQUIRE(std::getline(cells, cell, ','));  // observer label
    while (std::getline(cells, cell, ',')) {
      if (cell == "absent") continue;
      const double d = std::stod(cell);
      CHECK(d >= 0.0);
      CHECK(d <= 1.0 + 1e-12);
      max_entry = std::max(max_entry, d);
    }
  }
  CHECK(max_entry == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(fs::exists(out / "compare_raw.csv"));
  const std::string sum = slurp(out / "summary.txt");
  CHECK(contains(sum, "normalizer_pfu = "));
  CHECK(contains(sum, "case.no_filter = mode none"));
  CHECK(contains(sum, "case.mobile_N2 = mode patrol"));
}

TEST_CASE("optimize outputs do not depend on the thread count") {
  const fs::path cfg = write_config("optimize.cfg", small_config());
  const fs::path out1 = fresh_dir("opt_jobs1");
  const fs::path out2 = fresh_dir("opt_jobs2");
  REQUIRE(run_cli("optimize --config " + quoted(cfg) + " --seed 909 --jobs 1 --out " +
                  quoted(out1)) == 0);
  REQUIRE(run_cli("optimize --config " + quoted(cfg) + " --seed 909 --jobs 2 --out " +
                  quoted(out2)) == 0);

  for (const char* name : {"optimize_summary.txt", "grid_N2.csv", "slice_speed_N2.csv",
                           "slice_distance_N2.csv"}) {
    CHECK(slurp(out1 / name) == slurp(out2 / name));
  }

  const std::string sum = slurp(out1 / "optimize_summary.txt");
  CHECK(contains(sum, "command = optimize"));
  CHECK(contains(sum, "N = 2"));
  CHECK(contains(sum, "v_star_mps = "));
  CHECK(contains(sum, "value_star_pfu = "));
  CHECK(contains(sum, "budget_exhausted = 0"));
  CHECK(contains(sum, "grid_trend"));
  CHECK(contains(sum, "value_star_by_n = "));
  CHECK(contains(sum, "n_trend = ok"));

  const std::string grid = slurp(out1 / "grid_N2.csv");
  CHECK(contains(grid, "v_mps,r_m,worst_T_C_s,worst_observer,robust_dose_pfu"));
}
