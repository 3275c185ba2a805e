// Copyright (c) 2026 The chansim authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end tests of the command-line tool.  Every case shells out to the
// built binary and inspects exit codes and produced files, so these tests
// exercise the real argument parsing, profile resolution, and I/O paths.

#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <chansim/chansim.hpp>

namespace {

using namespace chansim;

const std::string kTool = CHANSIM_TOOL_PATH;
const std::string kTmp = CHANSIM_TEST_TMP;

int run(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

// Quiet variant for commands whose chatter is irrelevant to the assertion.
int run_quiet(const std::string& cmd) {
  return run(cmd + " > /dev/null 2>&1");
}

std::string tmp_path(const std::string& name) { return kTmp + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool file_exists(const std::string& path) {
  return std::ifstream(path).good();
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  return rows;
}

// Small but non-trivial grid: 12 subcarriers x 4 symbols = dim 48.
std::string tdl_args(const std::string& profile) {
  return " gen-tdl --profile " + profile +
         " --subcarriers 12 --symbols 4 --scs-khz 60 --duration-ms 0.25"
         " --doppler-hz 800 --delay-spread-ns 30";
}

}  // namespace

TEST_CASE("gen-tdl writes a normalized dataset with sidecar", "[cli]") {
  const std::string out = tmp_path("cli_tdl.chds");
  REQUIRE(run(kTool + tdl_args("tdl-a") +
              " --count 300 --seed 11 --out " + out + " > /dev/null") == 0);

  const ChannelDataset ds = read_chds(out);
  CHECK(ds.count() == 300);
  CHECK(ds.dim() == 48);
  CHECK(ds.seed == 11);
  // Default normalization pins the measured mean-square norm to the
  // dimension exactly.
  CHECK(ds.samples.squaredNorm() / 300.0 == Catch::Approx(48.0).margin(1e-9));
  CHECK(ds.normalization_scale != 1.0);
  REQUIRE(ds.provenance.count("generator") == 1);
  CHECK(ds.provenance.at("generator") == "tdl");

  REQUIRE(file_exists(out + ".json"));
  const auto meta = nlohmann::json::parse(slurp(out + ".json"));
  CHECK(meta.at("generator").get<std::string>() == "tdl");

  SECTION("--no-normalize leaves the raw scale") {
    const std::string raw = tmp_path("cli_tdl_raw.chds");
    REQUIRE(run(kTool + tdl_args("tdl-a") +
                " --count 300 --seed 11 --no-normalize --out " + raw +
                " > /dev/null") == 0);
    const ChannelDataset rds = read_chds(raw);
    CHECK(rds.normalization_scale == 1.0);
    // Same seed: the raw draw must match the normalized one up to scale.
    CHECK((rds.samples * ds.normalization_scale - ds.samples).norm() <
          1e-9 * ds.samples.norm());
  }
}

TEST_CASE("gen-tdl output is independent of worker count", "[cli]") {
  const std::string a = tmp_path("cli_det_a.chds");
  const std::string b = tmp_path("cli_det_b.chds");
  const std::string c = tmp_path("cli_det_c.chds");
  const std::string d = tmp_path("cli_det_d.chds");
  const std::string base = tdl_args("tdl-c") + " --count 257 --seed 99";
  REQUIRE(run(kTool + base + " --threads 1 --out " + a + " > /dev/null") == 0);
  REQUIRE(run(kTool + base + " --threads 3 --out " + b + " > /dev/null") == 0);
  REQUIRE(run(kTool + base + " --threads 1 --out " + c + " > /dev/null") == 0);
  // Worker cap picked up from the environment instead of the flag.
  REQUIRE(run("CHANSIM_THREADS=5 " + kTool + base + " --out " + d +
              " > /dev/null") == 0);

  const std::string bytes = slurp(a);
  CHECK(bytes == slurp(b));
  CHECK(bytes == slurp(c));
  CHECK(bytes == slurp(d));
  CHECK(slurp(a + ".json") == slurp(b + ".json"));
}

TEST_CASE("gen-cdl writes a normalized dataset deterministically", "[cli]") {
  const std::string a = tmp_path("cli_cdl_a.chds");
  const std::string b = tmp_path("cli_cdl_b.chds");
  const std::string base = std::string(" gen-cdl --profile cdl-b --tx 4 --rx 2"
                                       " --fc-ghz 3.5 --spacing 0.5"
                                       " --count 200 --seed 7");
  REQUIRE(run(kTool + base + " --threads 1 --out " + a + " > /dev/null") == 0);
  REQUIRE(run(kTool + base + " --threads 2 --out " + b + " > /dev/null") == 0);

  const ChannelDataset ds = read_chds(a);
  CHECK(ds.count() == 200);
  CHECK(ds.dim() == 8);
  CHECK(ds.samples.squaredNorm() / 200.0 == Catch::Approx(8.0).margin(1e-9));
  REQUIRE(ds.provenance.count("generator") == 1);
  CHECK(ds.provenance.at("generator") == "cdl");
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("profile resolution failures map to distinct exit codes", "[cli]") {
  // A CDL profile fed to the TDL generator (and vice versa) is an argument
  // error, not an I/O error.
  CHECK(run_quiet(kTool + tdl_args("cdl-a") + " --count 10 --out " +
                  tmp_path("cli_wrong.chds")) == 2);
  CHECK(run_quiet(kTool + " gen-cdl --profile tdl-a --tx 2 --rx 2 --count 10"
                          " --out " + tmp_path("cli_wrong2.chds")) == 2);
  // Unknown profile name: the resolved path does not exist.
  CHECK(run_quiet(kTool + tdl_args("no-such-profile") + " --count 10 --out " +
                  tmp_path("cli_missing.chds")) == 3);
}

TEST_CASE("usage errors exit with code 2", "[cli]") {
  CHECK(run_quiet(kTool) == 2);                       // missing subcommand
  CHECK(run_quiet(kTool + " frobnicate") == 2);       // unknown subcommand
  CHECK(run_quiet(kTool + tdl_args("tdl-a") + " --count 10") == 2);  // no --out
  CHECK(run_quiet(kTool + tdl_args("tdl-a") + " --count 0 --out " +
                  tmp_path("cli_zero.chds")) == 2);   // count must be positive
  CHECK(run_quiet(kTool + " export --format not-a-format --in x --out y") == 2);
}

TEST_CASE("import rejects malformed tables with a line diagnostic", "[cli]") {
  const std::string bad = tmp_path("cli_bad.csv");
  {
    std::ofstream out(bad, std::ios::trunc);
    out << "1.0,0.5\n1.0\n";  // second row is short for dim 1
  }
  const std::string errlog = tmp_path("cli_bad.err");
  CHECK(run(kTool + " import --format csv-complex --dim 1 --in " + bad +
            " --out " + tmp_path("cli_bad.chds") + " > /dev/null 2> " +
            errlog) == 2);
  const std::string message = slurp(errlog);
  CHECK(message.find("line 2") != std::string::npos);
}

TEST_CASE("export/import cycles are byte-stable", "[cli]") {
  const std::string src = tmp_path("cli_cycle.chds");
  REQUIRE(run(kTool + tdl_args("tdl-b") + " --count 50 --seed 13 --out " +
              src + " > /dev/null") == 0);

  SECTION("csv-complex") {
    const std::string csv1 = tmp_path("cli_cycle1.csv");
    const std::string csv2 = tmp_path("cli_cycle2.csv");
    const std::string back = tmp_path("cli_cycle_back.chds");
    REQUIRE(run(kTool + " export --format csv-complex --in " + src +
                " --out " + csv1 + " > /dev/null") == 0);
    REQUIRE(run(kTool + " import --format csv-complex --dim 48 --in " + csv1 +
                " --out " + back + " > /dev/null") == 0);
    REQUIRE(run(kTool + " export --format csv-complex --in " + back +
                " --out " + csv2 + " > /dev/null") == 0);
    CHECK(slurp(csv1) == slurp(csv2));
    // Import keeps samples bit-exact and never applies statistical rescaling.
    const ChannelDataset round = read_chds(back);
    CHECK(round.normalization_scale == 1.0);
    CHECK(round.samples == read_chds(src).samples);
    REQUIRE(round.provenance.count("generator") == 1);
    CHECK(round.provenance.at("generator") == "import");
  }

  SECTION("raw-interleaved-f64") {
    const std::string raw1 = tmp_path("cli_cycle1.bin");
    const std::string raw2 = tmp_path("cli_cycle2.bin");
    const std::string back = tmp_path("cli_cycle_back_raw.chds");
    REQUIRE(run(kTool + " export --format raw-interleaved-f64 --in " + src +
                " --out " + raw1 + " > /dev/null") == 0);
    REQUIRE(run(kTool + " import --format raw-interleaved-f64 --dim 48 --in " +
                raw1 + " --out " + back + " > /dev/null") == 0);
    REQUIRE(run(kTool + " export --format raw-interleaved-f64 --in " + back +
                " --out " + raw2 + " > /dev/null") == 0);
    CHECK(slurp(raw1) == slurp(raw2));
  }
}

TEST_CASE("experiment compression emits a measured-vs-analytic sweep",
          "[cli]") {
  const std::string out = tmp_path("cli_comp.csv");
  REQUIRE(run(kTool + " experiment compression --profile tdl-a"
                      " --subcarriers 8 --symbols 2 --scs-khz 60"
                      " --duration-ms 0.25 --doppler-hz 800"
                      " --delay-spread-ns 30 --train-count 4000"
                      " --val-count 500 --latents 4,8 --seed 21 --out " +
              out + " > /dev/null") == 0);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 3);
  REQUIRE(rows[0] ==
          std::vector<std::string>{"n_latent_real", "pca_nmse",
                                   "analytic_nmse"});
  double previous = 1.0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    REQUIRE(rows[r].size() == 3);
    const double measured = std::strtod(rows[r][1].c_str(), nullptr);
    const double analytic = std::strtod(rows[r][2].c_str(), nullptr);
    CHECK(measured >= 0.0);
    CHECK(measured <= 1.0);
    CHECK(std::abs(measured - analytic) < 0.05);
    CHECK(measured <= previous + 1e-12);  // more latents, less error
    previous = measured;
  }
}

TEST_CASE("experiment estimation emits a measured-vs-analytic sweep", "[cli]") {
  const std::string out = tmp_path("cli_est.csv");
  REQUIRE(run(kTool + " experiment estimation --profile tdl-a"
                      " --subcarriers 8 --symbols 2 --scs-khz 60"
                      " --duration-ms 0.25 --doppler-hz 800"
                      " --delay-spread-ns 30 --train-count 4000"
                      " --val-count 500 --snrs 0,10 --seed 22 --out " +
              out + " > /dev/null") == 0);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 3);
  REQUIRE(rows[0] ==
          std::vector<std::string>{"snr_db", "lmmse_nmse", "analytic_mmse"});
  for (std::size_t r = 1; r < rows.size(); ++r) {
    REQUIRE(rows[r].size() == 3);
    const double measured = std::strtod(rows[r][1].c_str(), nullptr);
    const double analytic = std::strtod(rows[r][2].c_str(), nullptr);
    CHECK(measured > 0.0);
    CHECK(measured < 1.0);
    CHECK(std::abs(measured - analytic) < 0.05);
  }
}

TEST_CASE("experiment generation writes the report and CDF files", "[cli]") {
  const std::string prefix = tmp_path("cli_gen");
  REQUIRE(run(kTool + " experiment generation --profile cdl-b --tx 4 --rx 2"
                      " --count 2000 --se-snr-db 10 --seed 23 --out-prefix " +
              prefix + " > /dev/null") == 0);

  REQUIRE(file_exists(prefix + ".report.json"));
  const auto report = nlohmann::json::parse(slurp(prefix + ".report.json"));
  const std::string verdict = report.at("verdict").get<std::string>();
  CHECK((verdict == "consistent-with-gaussian" || verdict == "non-gaussian"));
  CHECK(report.at("seed").get<std::uint64_t>() == 23);
  CHECK(report.at("tv_vs_gaussian").get<double>() >= 0.0);
  CHECK(report.at("ks_spectral_efficiency").get<double>() >= 0.0);
  CHECK(report.at("config").at("count").get<double>() == 2000.0);

  for (const char* suffix : {".se_ground_truth.csv", ".se_surrogate.csv"}) {
    const auto rows = read_csv(prefix + suffix);
    REQUIRE(rows.size() == 2000);
    // Cumulative probabilities end at exactly one.
    CHECK(rows.back().at(1) == "1");
  }

  // The verdict threshold is exposed on the command line; an enormous
  // multiplier accepts anything with a nonzero floor.
  const std::string loose = tmp_path("cli_gen_loose");
  REQUIRE(run(kTool + " experiment generation --profile cdl-b --tx 4 --rx 2"
                      " --count 2000 --se-snr-db 10 --seed 23"
                      " --verdict-multiplier 1e9 --out-prefix " +
              loose + " > /dev/null") == 0);
  const auto loose_report =
      nlohmann::json::parse(slurp(loose + ".report.json"));
  CHECK(loose_report.at("config").at("threshold_multiplier").get<double>() ==
        1e9);
  CHECK(loose_report.at("verdict").get<std::string>() ==
        "consistent-with-gaussian");
}
