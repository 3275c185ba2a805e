// Copyright (c) 2026 The chansim authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <chansim/io.hpp>

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

using namespace chansim;

namespace {

const std::string kTmp = CHANSIM_TEST_TMP;

std::string tmp_path(const std::string& name) { return kTmp + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  REQUIRE(out);
  out << content;
}

ChannelDataset toy_dataset() {
  ChannelDataset ds;
  ds.samples.resize(3, 2);
  ds.samples << std::complex<double>(1.0, -2.0), std::complex<double>(0.25, 0),
      std::complex<double>(-1e-3, 1e3), std::complex<double>(0, 0),
      std::complex<double>(1.0 / 3.0, -1.0 / 7.0),
      std::complex<double>(3.14159265358979, -2.71828182845905);
  ds.seed = 424242;
  ds.normalization_scale = 1.25;
  ds.provenance = {{"generator", "test"}, {"note", "toy"}};
  return ds;
}

}  // namespace

TEST_CASE("chds roundtrip preserves everything", "[io]") {
  const ChannelDataset ds = toy_dataset();
  const std::string path = tmp_path("roundtrip.chds");
  write_chds(path, ds);
  const ChannelDataset back = read_chds(path);
  CHECK(back.samples == ds.samples);
  CHECK(back.seed == ds.seed);
  CHECK(back.normalization_scale == ds.normalization_scale);
  CHECK(back.provenance.at("generator") == "test");
}

TEST_CASE("chds header layout is stable", "[io]") {
  const ChannelDataset ds = toy_dataset();
  const std::string path = tmp_path("header.chds");
  write_chds(path, ds);
  const std::string bytes = slurp(path);
  REQUIRE(bytes.size() == 36 + 3 * 2 * 16);
  CHECK(bytes.substr(0, 4) == "CHDS");
  // version 1, dim 2, count 3, little endian.
  CHECK(std::uint8_t(bytes[4]) == 1);
  CHECK(std::uint8_t(bytes[5]) == 0);
  CHECK(std::uint8_t(bytes[8]) == 2);
  CHECK(std::uint8_t(bytes[12]) == 3);
  double first_re;
  std::memcpy(&first_re, bytes.data() + 36, 8);
  CHECK(first_re == 1.0);
  double first_im;
  std::memcpy(&first_im, bytes.data() + 44, 8);
  CHECK(first_im == -2.0);
}

TEST_CASE("chds rejects corrupted files", "[io]") {
  const ChannelDataset ds = toy_dataset();
  const std::string path = tmp_path("corrupt.chds");

  SECTION("bad magic") {
    write_chds(path, ds);
    std::string bytes = slurp(path);
    bytes[0] = 'X';
    spit(path, bytes);
    CHECK_THROWS_AS(read_chds(path), IoError);
  }
  SECTION("unsupported version") {
    write_chds(path, ds);
    std::string bytes = slurp(path);
    bytes[4] = 9;
    spit(path, bytes);
    CHECK_THROWS_AS(read_chds(path), IoError);
  }
  SECTION("truncated payload") {
    write_chds(path, ds);
    std::string bytes = slurp(path);
    spit(path, bytes.substr(0, bytes.size() - 5));
    CHECK_THROWS_AS(read_chds(path), IoError);
  }
  SECTION("trailing bytes") {
    write_chds(path, ds);
    std::string bytes = slurp(path);
    spit(path, bytes + "zz");
    CHECK_THROWS_AS(read_chds(path), IoError);
  }
  SECTION("missing file") {
    CHECK_THROWS_AS(read_chds(tmp_path("does-not-exist.chds")), IoError);
  }
}

TEST_CASE("csv import parses values and reports malformed lines", "[io]") {
  const std::string path = tmp_path("import.csv");

  SECTION("well-formed with blank lines") {
    spit(path, "1.0,-2.0,0.25,0\n\n-0.001,1000,0,0\n");
    const ChannelDataset ds = import_csv_complex(path, 2);
    REQUIRE(ds.count() == 2);
    REQUIRE(ds.dim() == 2);
    CHECK(ds.samples(0, 0) == std::complex<double>(1.0, -2.0));
    CHECK(ds.samples(1, 0) == std::complex<double>(-0.001, 1000.0));
    CHECK(ds.normalization_scale == 1.0);
  }
  SECTION("wrong field count names the line") {
    spit(path, "1,2,3,4\n1,2,3\n");
    CHECK_THROWS_WITH(import_csv_complex(path, 2),
                      Catch::Matchers::ContainsSubstring("line 2"));
  }
  SECTION("malformed number names the line") {
    spit(path, "1,2,3,4\n1,2,junk,4\n");
    CHECK_THROWS_WITH(import_csv_complex(path, 2),
                      Catch::Matchers::ContainsSubstring("line 2"));
  }
  SECTION("empty file") {
    spit(path, "");
    CHECK_THROWS_AS(import_csv_complex(path, 2), ValidationError);
  }
  SECTION("bad dim") {
    CHECK_THROWS_AS(import_csv_complex(path, 0), std::invalid_argument);
  }
}

TEST_CASE("raw import validates the byte length", "[io]") {
  const ChannelDataset ds = toy_dataset();
  const std::string raw = tmp_path("payload.raw");
  export_raw_f64(raw, ds);
  const ChannelDataset back = import_raw_f64(raw, 2);
  CHECK(back.samples == ds.samples);

  spit(raw, slurp(raw) + "123");
  CHECK_THROWS_AS(import_raw_f64(raw, 2), ValidationError);
}

TEST_CASE("import/export cycles are byte-identical", "[io]") {
  const ChannelDataset ds = toy_dataset();

  SECTION("csv") {
    const std::string a = tmp_path("cycle_a.csv");
    const std::string b = tmp_path("cycle_b.csv");
    export_csv_complex(a, ds);
    const ChannelDataset mid = import_csv_complex(a, 2);
    export_csv_complex(b, mid);
    CHECK(slurp(a) == slurp(b));
  }
  SECTION("raw") {
    const std::string a = tmp_path("cycle_a.raw");
    const std::string b = tmp_path("cycle_b.raw");
    export_raw_f64(a, ds);
    const ChannelDataset mid = import_raw_f64(a, 2);
    export_raw_f64(b, mid);
    CHECK(slurp(a) == slurp(b));
  }
}

TEST_CASE("format_f64 round-trips doubles exactly", "[io]") {
  for (double v : {1.0 / 3.0, -1e-300, 3.141592653589793, 0.1, -0.0,
                   6.02214076e23}) {
    const std::string s = format_f64(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}
