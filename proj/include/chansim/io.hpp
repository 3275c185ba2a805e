// Copyright (c) 2026 The chansim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CHANSIM_IO_HPP
#define CHANSIM_IO_HPP

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "chansim/dataset.hpp"
#include "chansim/errors.hpp"

namespace chansim {

// CHDS, the on-disk dataset container:
//   "CHDS" | u32 version=1 | u32 dim | u64 count | u64 seed | f64 scale
// followed by count*dim complex values, each 64-bit-float real part then
// imaginary part, little-endian, row-major.  An optional JSON sidecar at
// <path>.json carries the provenance map.
inline constexpr char kChdsMagic[4] = {'C', 'H', 'D', 'S'};
inline constexpr std::uint32_t kChdsVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "CHDS I/O assumes a little-endian host");

namespace detail {

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T take(std::istream& in, const char* what) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw IoError(std::string("CHDS: truncated ") + what);
  return v;
}

}  // namespace detail

inline void write_chds(const std::string& path, const ChannelDataset& ds) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(kChdsMagic, 4);
  detail::put<std::uint32_t>(out, kChdsVersion);
  detail::put<std::uint32_t>(out, std::uint32_t(ds.dim()));
  detail::put<std::uint64_t>(out, std::uint64_t(ds.count()));
  detail::put<std::uint64_t>(out, ds.seed);
  detail::put<double>(out, ds.normalization_scale);
  for (Eigen::Index i = 0; i < ds.count(); ++i)
    for (Eigen::Index j = 0; j < ds.dim(); ++j) {
      const std::complex<double> v = ds.samples(i, j);
      detail::put<double>(out, v.real());
      detail::put<double>(out, v.imag());
    }
  if (!out) throw IoError("write failed: " + path);
  out.close();
  if (!ds.provenance.empty()) {
    nlohmann::json meta(ds.provenance);
    std::ofstream side(path + ".json", std::ios::trunc);
    if (!side) throw IoError("cannot open for writing: " + path + ".json");
    side << meta.dump(2) << "\n";
  }
}

inline ChannelDataset read_chds(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kChdsMagic, 4) != 0)
    throw IoError("not a CHDS file: " + path);
  const auto version = detail::take<std::uint32_t>(in, "version");
  if (version != kChdsVersion)
    throw IoError("unsupported CHDS version " + std::to_string(version) +
                  ": " + path);
  const auto dim = detail::take<std::uint32_t>(in, "dim");
  const auto count = detail::take<std::uint64_t>(in, "count");
  if (dim == 0) throw IoError("CHDS: zero dim: " + path);

  ChannelDataset ds;
  ds.seed = detail::take<std::uint64_t>(in, "seed");
  ds.normalization_scale = detail::take<double>(in, "scale");
  ds.samples.resize(Eigen::Index(count), Eigen::Index(dim));
  for (std::uint64_t i = 0; i < count; ++i)
    for (std::uint32_t j = 0; j < dim; ++j) {
      const double re = detail::take<double>(in, "payload");
      const double im = detail::take<double>(in, "payload");
      ds.samples(Eigen::Index(i), Eigen::Index(j)) = {re, im};
    }
  char extra;
  if (in.read(&extra, 1))
    throw IoError("CHDS: trailing bytes after payload: " + path);

  std::ifstream side(path + ".json");
  if (side) {
    nlohmann::json meta;
    try {
      side >> meta;
      for (const auto& item : meta.items())
        if (item.value().is_string())
          ds.provenance[item.key()] = item.value().get<std::string>();
    } catch (const nlohmann::json::exception&) {
      // a malformed sidecar never invalidates the dataset proper
    }
  }
  return ds;
}

// csv-complex: one sample per line, interleaved "re,im,re,im,..."; the
// declared dim fixes the expected 2*dim fields per row.
inline ChannelDataset import_csv_complex(const std::string& path,
                                         Eigen::Index dim) {
  if (dim < 1) throw std::invalid_argument("import: dim must be >= 1");
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::vector<std::complex<double>> values;
  std::string line;
  std::size_t lineno = 0, rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::size_t fields = 0;
    double pair[2];
    const char* p = line.c_str();
    while (*p != '\0') {
      char* end = nullptr;
      const double v = std::strtod(p, &end);
      if (end == p)
        throw ValidationError(path + ": line " + std::to_string(lineno) +
                              ": malformed number");
      pair[fields % 2] = v;
      if (fields % 2 == 1) values.emplace_back(pair[0], pair[1]);
      ++fields;
      p = end;
      while (*p == ' ' || *p == '\t') ++p;
      if (*p == ',') {
        ++p;
      } else if (*p != '\0') {
        throw ValidationError(path + ": line " + std::to_string(lineno) +
                              ": expected ',' between fields");
      }
    }
    if (fields != std::size_t(2 * dim))
      throw ValidationError(path + ": line " + std::to_string(lineno) +
                            ": expected " + std::to_string(2 * dim) +
                            " fields, got " + std::to_string(fields));
    ++rows;
  }
  if (rows == 0) throw ValidationError(path + ": no data rows");
  ChannelDataset ds;
  ds.samples.resize(Eigen::Index(rows), dim);
  for (std::size_t i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      ds.samples(Eigen::Index(i), j) = values[i * std::size_t(dim) + j];
  return ds;
}

// raw-interleaved-f64: no header, little-endian (re, im) f64 pairs,
// row-major; the byte length must be a multiple of 16*dim.
inline ChannelDataset import_raw_f64(const std::string& path,
                                     Eigen::Index dim) {
  if (dim < 1) throw std::invalid_argument("import: dim must be >= 1");
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw IoError("cannot open: " + path);
  const std::streamoff bytes = in.tellg();
  in.seekg(0);
  const std::streamoff row_bytes = std::streamoff(16) * dim;
  if (bytes % row_bytes != 0)
    throw ValidationError(path + ": byte length " + std::to_string(bytes) +
                          " is not a multiple of 16*dim = " +
                          std::to_string(row_bytes));
  const Eigen::Index rows = Eigen::Index(bytes / row_bytes);
  if (rows == 0) throw ValidationError(path + ": no data rows");
  ChannelDataset ds;
  ds.samples.resize(rows, dim);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double re = detail::take<double>(in, "payload");
      const double im = detail::take<double>(in, "payload");
      ds.samples(i, j) = {re, im};
    }
  return ds;
}

// All CSV output goes through this: 17 significant digits round-trips
// IEEE doubles exactly, so byte-identical reruns are guaranteed.
inline std::string format_f64(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void export_csv_complex(const std::string& path,
                               const ChannelDataset& ds) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (Eigen::Index i = 0; i < ds.count(); ++i) {
    for (Eigen::Index j = 0; j < ds.dim(); ++j) {
      if (j) out << ',';
      out << format_f64(ds.samples(i, j).real()) << ','
          << format_f64(ds.samples(i, j).imag());
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

inline void export_raw_f64(const std::string& path,
                           const ChannelDataset& ds) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (Eigen::Index i = 0; i < ds.count(); ++i)
    for (Eigen::Index j = 0; j < ds.dim(); ++j) {
      detail::put<double>(out, ds.samples(i, j).real());
      detail::put<double>(out, ds.samples(i, j).imag());
    }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace chansim

#endif  // CHANSIM_IO_HPP
