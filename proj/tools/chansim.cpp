// Copyright (c) 2026 The chansim authors
// SPDX-License-Identifier: Apache-2.0
//
// chansim: generate link-level channel datasets, run the second-order
// baseline experiments, and convert between dataset formats.
//
// Exit codes: 0 success, 2 invalid arguments or malformed input data,
// 3 I/O failure, 4 numerical failure.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <variant>
#include <vector>

#include <chansim/chansim.hpp>

namespace {

using namespace chansim;

constexpr double kSpeedOfLight = 299792458.0;  // m/s

std::string default_profile_dir() {
  if (const char* env = std::getenv("CHANSIM_PROFILE_DIR"))
    if (*env) return env;
#ifdef CHANSIM_DATA_DIR
  return std::string(CHANSIM_DATA_DIR) + "/profiles";
#else
  return "data/profiles";
#endif
}

// A profile reference is either a bare name resolved against the profile
// directory or an explicit path to a JSON document.
Profile resolve_profile(const std::string& ref, const std::string& dir_flag) {
  std::string path = ref;
  if (ref.find('/') == std::string::npos &&
      ref.find(".json") == std::string::npos) {
    const std::string dir = dir_flag.empty() ? default_profile_dir() : dir_flag;
    path = dir + "/" + ref + ".json";
  }
  return load_profile_file(path);
}

// ---------------------------------------------------------------------------
// Shared flag groups

struct CommonFlags {
  std::string profile;
  std::string profile_dir;
  std::uint64_t seed = 1;
  std::uint64_t first_stream_index = 0;
  int threads = 0;
  bool no_normalize = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f, const char* profile_default) {
  f.profile = profile_default;
  cmd->add_option("--profile", f.profile,
                  "Profile name (resolved in the profile directory) or JSON path")
      ->capture_default_str();
  cmd->add_option("--profile-dir", f.profile_dir,
                  "Profile directory (default: $CHANSIM_PROFILE_DIR, then the "
                  "installed data directory)");
  cmd->add_option("--seed", f.seed, "Root RNG seed")->capture_default_str();
  cmd->add_option("--first-stream-index", f.first_stream_index,
                  "Offset of the first per-realization RNG stream; datasets "
                  "generated with disjoint index ranges are statistically "
                  "disjoint")
      ->capture_default_str();
  cmd->add_option("--threads", f.threads,
                  "Worker threads (0 = hardware, capped by $CHANSIM_THREADS); "
                  "results do not depend on this")
      ->capture_default_str();
  cmd->add_flag("--no-normalize", f.no_normalize,
                "Keep raw generator power instead of normalizing the mean "
                "squared sample norm to the dimension");
}

struct TdlFlags {
  int subcarriers = 48;
  int symbols = 14;
  double scs_khz = 60.0;
  double duration_ms = 0.25;
  double doppler_hz = 800.0;
  double delay_spread_ns = 30.0;
};

void add_tdl_flags(CLI::App* cmd, TdlFlags& f) {
  cmd->add_option("--subcarriers", f.subcarriers, "OFDM subcarriers sampled")
      ->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--symbols", f.symbols, "OFDM symbols sampled")
      ->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--scs-khz", f.scs_khz, "Subcarrier spacing, kHz")
      ->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--duration-ms", f.duration_ms,
                  "Time spanned by the symbol grid, ms")
      ->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--doppler-hz", f.doppler_hz, "Maximum Doppler shift, Hz")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  cmd->add_option("--delay-spread-ns", f.delay_spread_ns,
                  "RMS delay spread applied to the normalized tap delays, ns")
      ->check(CLI::PositiveNumber)->capture_default_str();
}

GridConfig make_grid(const TdlFlags& f) {
  GridConfig g;
  g.n_subcarriers = f.subcarriers;
  g.n_symbols = f.symbols;
  g.subcarrier_spacing = f.scs_khz * 1e3;
  g.symbol_duration = f.duration_ms * 1e-3 / double(f.symbols);
  g.max_doppler = f.doppler_hz;
  g.validate();
  return g;
}

struct CdlFlags {
  int tx = 16;
  int rx = 8;
  double fc_ghz = 3.5;
  double spacing = 0.5;
  std::string ray_mode = "iid-laplacian";
};

void add_cdl_flags(CLI::App* cmd, CdlFlags& f) {
  cmd->add_option("--tx", f.tx, "Transmit ULA elements")
      ->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--rx", f.rx, "Receive ULA elements")
      ->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--fc-ghz", f.fc_ghz, "Carrier frequency, GHz")
      ->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--spacing", f.spacing, "Element spacing, wavelengths")
      ->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--ray-mode", f.ray_mode, "Ray angle draw")
      ->check(CLI::IsMember({"iid-laplacian", "fixed-offsets"}))
      ->capture_default_str();
}

RayMode parse_ray_mode(const std::string& s) {
  return s == "fixed-offsets" ? RayMode::fixed_offsets
                              : RayMode::iid_laplacian;
}

// Everything needed to draw realizations from either generator family.
struct Source {
  bool is_cdl = false;
  LinkProfile link;  // delay-scaled
  GridConfig grid{};
  CdlProfile cdl;
  ArrayConfig tx, rx;
  RayMode mode = RayMode::iid_laplacian;

  Eigen::Index dim() const {
    return is_cdl ? tx.size() * rx.size() : grid.dim();
  }

  ChannelDataset generate(std::size_t count, std::uint64_t seed,
                          std::uint64_t first, int threads) const {
    if (is_cdl) {
      CdlOptions opts;
      opts.workers = threads;
      opts.first_stream_index = first;
      return generate_cdl_dataset(cdl, tx, rx, count, seed, mode, opts);
    }
    TdlOptions opts;
    opts.workers = threads;
    opts.first_stream_index = first;
    return generate_tdl_dataset(link, grid, count, seed, opts);
  }
};

Source make_source(const CommonFlags& common, const TdlFlags& tdl,
                   const CdlFlags& cdl) {
  Source src;
  Profile profile = resolve_profile(common.profile, common.profile_dir);
  if (std::holds_alternative<LinkProfile>(profile)) {
    src.is_cdl = false;
    src.link = scale_delays(std::get<LinkProfile>(profile),
                            tdl.delay_spread_ns * 1e-9);
    src.grid = make_grid(tdl);
  } else {
    src.is_cdl = true;
    src.cdl = std::get<CdlProfile>(profile);
    const double wavelength = kSpeedOfLight / (cdl.fc_ghz * 1e9);
    src.tx = ula_config(cdl.tx, cdl.spacing, wavelength);
    src.rx = ula_config(cdl.rx, cdl.spacing, wavelength);
    src.mode = parse_ray_mode(cdl.ray_mode);
  }
  return src;
}

Source make_tdl_source(const CommonFlags& common, const TdlFlags& tdl) {
  Source src;
  Profile profile = resolve_profile(common.profile, common.profile_dir);
  if (!std::holds_alternative<LinkProfile>(profile))
    throw std::invalid_argument("profile '" + common.profile +
                                "' is not a tap-delay-line profile");
  src.is_cdl = false;
  src.link = scale_delays(std::get<LinkProfile>(profile),
                          tdl.delay_spread_ns * 1e-9);
  src.grid = make_grid(tdl);
  return src;
}

Source make_cdl_source(const CommonFlags& common, const CdlFlags& cdl) {
  Source src;
  Profile profile = resolve_profile(common.profile, common.profile_dir);
  if (!std::holds_alternative<CdlProfile>(profile))
    throw std::invalid_argument("profile '" + common.profile +
                                "' is not a clustered-delay-line profile");
  src.is_cdl = true;
  src.cdl = std::get<CdlProfile>(profile);
  const double wavelength = kSpeedOfLight / (cdl.fc_ghz * 1e9);
  src.tx = ula_config(cdl.tx, cdl.spacing, wavelength);
  src.rx = ula_config(cdl.rx, cdl.spacing, wavelength);
  src.mode = parse_ray_mode(cdl.ray_mode);
  return src;
}

// ---------------------------------------------------------------------------
// Commands

void run_generate(const Source& src, const CommonFlags& common,
                  std::size_t count, const std::string& out) {
  ChannelDataset ds = src.generate(count, common.seed,
                                   common.first_stream_index, common.threads);
  if (!common.no_normalize)
    normalize_dataset(ds, double(ds.dim()));
  write_chds(out, ds);
  std::cout << "wrote " << ds.count() << " x " << ds.dim() << " samples to "
            << out << " (scale " << format_f64(ds.normalization_scale)
            << ")\n";
}

// Train/validation pair from disjoint stream ranges; the train
// normalization scale is reused for validation so both sit in the same
// units.
struct SplitData {
  ChannelDataset train, val;
};

SplitData make_split(const Source& src, const CommonFlags& common,
                     std::size_t train_count, std::size_t val_count) {
  SplitData data;
  data.train = src.generate(train_count, common.seed,
                            common.first_stream_index, common.threads);
  data.val = src.generate(val_count, common.seed,
                          common.first_stream_index + train_count,
                          common.threads);
  if (!common.no_normalize) {
    const double scale = normalize_dataset(data.train, double(src.dim()));
    data.val.samples *= scale;
    data.val.normalization_scale *= scale;
  }
  return data;
}

void run_compression(const Source& src, const CommonFlags& common,
                     std::size_t train_count, std::size_t val_count,
                     const std::vector<int>& latents, const std::string& out) {
  const SplitData data = make_split(src, common, train_count, val_count);
  const CovarianceModel model = sample_mean_cov(data.train);

  std::ofstream csv(out, std::ios::trunc);
  if (!csv) throw IoError("cannot open for writing: " + out);
  csv << "n_latent_real,pca_nmse,analytic_nmse\n";
  for (int n_latent : latents) {
    const PcaCodec codec = pca_fit(model, n_latent);
    const SampleMatrix recon = pca_roundtrip(codec, data.val.samples);
    const double measured = nmse(data.val.samples, recon);
    const double analytic = pca_expected_nmse(codec);
    csv << n_latent << ',' << format_f64(measured) << ','
        << format_f64(analytic) << '\n';
    std::cout << "n_latent_real " << n_latent << ": pca_nmse "
              << format_f64(measured) << ", analytic " << format_f64(analytic)
              << "\n";
  }
  if (!csv) throw IoError("write failed: " + out);
}

void run_estimation(const Source& src, const CommonFlags& common,
                    std::size_t train_count, std::size_t val_count,
                    const std::vector<double>& snrs_db,
                    const std::string& out) {
  const SplitData data = make_split(src, common, train_count, val_count);
  const CovarianceModel model = sample_mean_cov(data.train);
  const Eigen::Index n = model.dim();
  const Eigen::MatrixXcd observation = Eigen::MatrixXcd::Identity(n, n);

  std::ofstream csv(out, std::ios::trunc);
  if (!csv) throw IoError("cannot open for writing: " + out);
  csv << "snr_db,lmmse_nmse,analytic_mmse\n";
  for (std::size_t k = 0; k < snrs_db.size(); ++k) {
    const double noise_var = snr_to_noise_var(snrs_db[k]);
    const LmmseEstimator est = make_lmmse(model, observation, noise_var);

    // Noisy observations y = h + w drawn from a stream range disjoint from
    // every generator stream (upper index bits flag the noise source).
    SampleMatrix y = data.val.samples;
    const RngStream noise_root(common.seed, (1ull << 62) + k);
    const double noise_amp = std::sqrt(noise_var);
    parallel_for(std::size_t(y.rows()), worker_count(common.threads),
                 [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        RngStream row = noise_root.substream(i);
        for (Eigen::Index j = 0; j < n; ++j)
          y(Eigen::Index(i), j) += noise_amp * row.cnormal();
      }
    });

    const SampleMatrix estimates = lmmse_estimate(est, y);
    const double measured = nmse(data.val.samples, estimates);
    csv << format_f64(snrs_db[k]) << ',' << format_f64(measured) << ','
        << format_f64(analytic_mmse(est)) << '\n';
    std::cout << "snr " << snrs_db[k] << " dB: lmmse_nmse "
              << format_f64(measured) << ", analytic_mmse "
              << format_f64(analytic_mmse(est)) << "\n";
  }
  if (!csv) throw IoError("write failed: " + out);
}

void run_generation(const Source& src, const CommonFlags& common,
                    std::size_t count, double se_snr_db,
                    double verdict_multiplier, const std::string& out_prefix) {
  ChannelDataset ds = src.generate(count, common.seed,
                                   common.first_stream_index, common.threads);
  if (!common.no_normalize)
    normalize_dataset(ds, double(ds.dim()));
  const double noise_var = snr_to_noise_var(se_snr_db);

  const GaussianityReport report = gaussianity_report(
      ds, noise_var, common.seed, common.threads, verdict_multiplier);

  // The report draws its surrogate from gaussian_generate(model, count,
  // seed) with the zero-mean second-order fit; rebuild the identical
  // surrogate for the CDF dump.
  CovarianceModel model = sample_mean_cov(ds);
  model.mean.setZero();
  const ChannelDataset surrogate =
      gaussian_generate(model, count, common.seed, common.threads);

  const Eigen::VectorXd se_gt = spectral_efficiencies(ds.samples, noise_var);
  const Eigen::VectorXd se_sur =
      spectral_efficiencies(surrogate.samples, noise_var);
  write_cdf_csv(out_prefix + ".se_ground_truth.csv",
                std::vector<double>(se_gt.data(), se_gt.data() + se_gt.size()));
  write_cdf_csv(out_prefix + ".se_surrogate.csv",
                std::vector<double>(se_sur.data(),
                                    se_sur.data() + se_sur.size()));

  const std::string report_path = out_prefix + ".report.json";
  std::ofstream json_out(report_path, std::ios::trunc);
  if (!json_out) throw IoError("cannot open for writing: " + report_path);
  json_out << to_json(report).dump(2) << "\n";
  if (!json_out) throw IoError("write failed: " + report_path);

  std::cout << "verdict: " << to_string(report.verdict) << " (tv "
            << format_f64(report.tv_vs_gaussian) << " vs floor "
            << format_f64(report.tv_noise_floor) << ", ks "
            << format_f64(report.ks_spectral_efficiency) << " vs floor "
            << format_f64(report.ks_noise_floor) << ")\n";
}

void run_import(const std::string& format, const std::string& in,
                Eigen::Index dim, std::uint64_t seed,
                const std::string& out) {
  ChannelDataset ds = format == "csv-complex" ? import_csv_complex(in, dim)
                                              : import_raw_f64(in, dim);
  ds.seed = seed;
  ds.provenance = {{"generator", "import"},
                   {"format", format},
                   {"source", in}};
  write_chds(out, ds);
  std::cout << "imported " << ds.count() << " x " << ds.dim()
            << " samples to " << out << "\n";
}

void run_export(const std::string& format, const std::string& in,
                const std::string& out) {
  const ChannelDataset ds = read_chds(in);
  if (format == "csv-complex")
    export_csv_complex(out, ds);
  else
    export_raw_f64(out, ds);
  std::cout << "exported " << ds.count() << " x " << ds.dim()
            << " samples to " << out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Link-level wireless channel dataset toolkit"};
  app.require_subcommand(1);

  std::function<void()> action;

  // gen-tdl ------------------------------------------------------------
  auto* gen_tdl = app.add_subcommand(
      "gen-tdl", "Generate OFDM-grid realizations of a TDL profile");
  CommonFlags tdl_common;
  TdlFlags tdl_flags;
  std::size_t tdl_count = 10000;
  std::string tdl_out;
  add_common_flags(gen_tdl, tdl_common, "tdl-a");
  add_tdl_flags(gen_tdl, tdl_flags);
  gen_tdl->add_option("--count", tdl_count, "Realizations to draw")
      ->check(CLI::PositiveNumber)->capture_default_str();
  gen_tdl->add_option("--out", tdl_out, "Output dataset path")->required();
  gen_tdl->callback([&] {
    action = [&] {
      run_generate(make_tdl_source(tdl_common, tdl_flags), tdl_common,
                   tdl_count, tdl_out);
    };
  });

  // gen-cdl ------------------------------------------------------------
  auto* gen_cdl = app.add_subcommand(
      "gen-cdl", "Generate narrowband MIMO realizations of a CDL profile");
  CommonFlags cdl_common;
  CdlFlags cdl_flags;
  std::size_t cdl_count = 10000;
  std::string cdl_out;
  add_common_flags(gen_cdl, cdl_common, "cdl-a");
  add_cdl_flags(gen_cdl, cdl_flags);
  gen_cdl->add_option("--count", cdl_count, "Realizations to draw")
      ->check(CLI::PositiveNumber)->capture_default_str();
  gen_cdl->add_option("--out", cdl_out, "Output dataset path")->required();
  gen_cdl->callback([&] {
    action = [&] {
      run_generate(make_cdl_source(cdl_common, cdl_flags), cdl_common,
                   cdl_count, cdl_out);
    };
  });

  // experiment ----------------------------------------------------------
  auto* experiment = app.add_subcommand(
      "experiment", "Second-order baseline experiments");
  experiment->require_subcommand(1);

  auto* compression = experiment->add_subcommand(
      "compression", "PCA compression sweep: measured vs analytic nMSE");
  CommonFlags comp_common;
  TdlFlags comp_tdl;
  CdlFlags comp_cdl;
  std::size_t comp_train = 60000, comp_val = 10000;
  std::vector<int> comp_latents = {4, 8, 16, 32};
  std::string comp_out;
  add_common_flags(compression, comp_common, "tdl-a");
  add_tdl_flags(compression, comp_tdl);
  add_cdl_flags(compression, comp_cdl);
  compression->add_option("--train-count", comp_train, "Training realizations")
      ->check(CLI::PositiveNumber)->capture_default_str();
  compression->add_option("--val-count", comp_val, "Validation realizations")
      ->check(CLI::PositiveNumber)->capture_default_str();
  compression->add_option("--latents", comp_latents,
                          "Real latent dimensions to sweep")
      ->delimiter(',')->capture_default_str();
  compression->add_option("--out", comp_out, "Output CSV path")->required();
  compression->callback([&] {
    action = [&] {
      run_compression(make_source(comp_common, comp_tdl, comp_cdl),
                      comp_common, comp_train, comp_val, comp_latents,
                      comp_out);
    };
  });

  auto* estimation = experiment->add_subcommand(
      "estimation", "LMMSE estimation sweep: measured vs analytic MMSE");
  CommonFlags est_common;
  TdlFlags est_tdl;
  CdlFlags est_cdl;
  std::size_t est_train = 60000, est_val = 10000;
  std::vector<double> est_snrs = {0.0, 10.0, 20.0};
  std::string est_out;
  add_common_flags(estimation, est_common, "tdl-a");
  add_tdl_flags(estimation, est_tdl);
  add_cdl_flags(estimation, est_cdl);
  estimation->add_option("--train-count", est_train, "Training realizations")
      ->check(CLI::PositiveNumber)->capture_default_str();
  estimation->add_option("--val-count", est_val, "Validation realizations")
      ->check(CLI::PositiveNumber)->capture_default_str();
  estimation->add_option("--snrs", est_snrs, "SNR sweep, dB")
      ->delimiter(',')->capture_default_str();
  estimation->add_option("--out", est_out, "Output CSV path")->required();
  estimation->callback([&] {
    action = [&] {
      run_estimation(make_source(est_common, est_tdl, est_cdl), est_common,
                     est_train, est_val, est_snrs, est_out);
    };
  });

  auto* generation = experiment->add_subcommand(
      "generation", "Gaussianity report and spectral-efficiency CDFs");
  CommonFlags gen_common;
  TdlFlags gen_tdl_flags;
  CdlFlags gen_cdl_flags;
  std::size_t gen_count = 10000;
  double gen_se_snr = 10.0;
  double gen_multiplier = 1.5;
  std::string gen_prefix;
  add_common_flags(generation, gen_common, "cdl-a");
  add_tdl_flags(generation, gen_tdl_flags);
  add_cdl_flags(generation, gen_cdl_flags);
  generation->add_option("--count", gen_count, "Realizations to draw")
      ->check(CLI::PositiveNumber)->capture_default_str();
  generation->add_option("--se-snr-db", gen_se_snr,
                         "SNR for the spectral-efficiency statistic, dB")
      ->capture_default_str();
  generation->add_option("--verdict-multiplier", gen_multiplier,
                         "Verdict threshold as a multiple of the noise floor")
      ->check(CLI::PositiveNumber)->capture_default_str();
  generation->add_option("--out-prefix", gen_prefix,
                         "Prefix for .report.json and .se_*.csv outputs")
      ->required();
  generation->callback([&] {
    action = [&] {
      run_generation(make_source(gen_common, gen_tdl_flags, gen_cdl_flags),
                     gen_common, gen_count, gen_se_snr, gen_multiplier,
                     gen_prefix);
    };
  });

  // import / export ------------------------------------------------------
  auto* import_cmd = app.add_subcommand(
      "import", "Convert an external sample table to a dataset file");
  std::string import_format = "csv-complex", import_in, import_out;
  Eigen::Index import_dim = 0;
  std::uint64_t import_seed = 0;
  import_cmd->add_option("--format", import_format, "Input format")
      ->check(CLI::IsMember({"csv-complex", "raw-interleaved-f64"}))
      ->capture_default_str();
  import_cmd->add_option("--dim", import_dim, "Sample vector dimension")
      ->required()->check(CLI::PositiveNumber);
  import_cmd->add_option("--in", import_in, "Input path")->required();
  import_cmd->add_option("--out", import_out, "Output dataset path")
      ->required();
  import_cmd->add_option("--seed", import_seed,
                         "Seed recorded in the dataset header")
      ->capture_default_str();
  import_cmd->callback([&] {
    action = [&] {
      run_import(import_format, import_in, import_dim, import_seed,
                 import_out);
    };
  });

  auto* export_cmd = app.add_subcommand(
      "export", "Convert a dataset file to an external sample table");
  std::string export_format = "csv-complex", export_in, export_out;
  export_cmd->add_option("--format", export_format, "Output format")
      ->check(CLI::IsMember({"csv-complex", "raw-interleaved-f64"}))
      ->capture_default_str();
  export_cmd->add_option("--in", export_in, "Input dataset path")->required();
  export_cmd->add_option("--out", export_out, "Output path")->required();
  export_cmd->callback([&] {
    action = [&] { run_export(export_format, export_in, export_out); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    action();
    return 0;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {  // validation and state errors
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
