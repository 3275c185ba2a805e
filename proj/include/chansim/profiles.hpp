// Copyright (c) 2026 The chansim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CHANSIM_PROFILES_HPP
#define CHANSIM_PROFILES_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "chansim/errors.hpp"

namespace chansim {

constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }
inline double db2lin(double db) { return std::pow(10.0, db / 10.0); }

// One tapped-delay-line tap.  `delay` is dimensionless (units of the RMS
// delay spread) until LinkProfile::delays_scaled is set, physical seconds
// after.  `power` is the normalized linear power of the whole tap; for a
// tap with is_los the LOS part is power*k/(1+k) and the Rayleigh-fading
// part power/(1+k).
struct TapEntry {
  double delay = 0.0;
  double power = 0.0;
  bool is_los = false;
};

struct LinkProfile {
  std::string name;
  std::vector<TapEntry> taps;
  double k_factor = 0.0;  // LOS-to-fading power ratio of the LOS tap, linear
  double los_doppler_fraction = 0.7;
  bool delays_scaled = false;
  double raw_power_sum = 1.0;  // power sum of the source document before
                               // unit-sum normalization (provenance only)
};

// Ray spreads per angle dimension, radians.
struct AngularSpreads {
  double asd = 0.0, asa = 0.0, zsd = 0.0, zsa = 0.0;
};

// One clustered-delay-line cluster; mean angles in radians.  Power
// semantics match TapEntry (normalized total, split by the profile
// k_factor when is_los).
struct CdlCluster {
  double power = 0.0;
  double aod = 0.0, aoa = 0.0, zod = 0.0, zoa = 0.0;
  bool is_los = false;
};

struct CdlProfile {
  std::string name;
  std::vector<CdlCluster> clusters;
  AngularSpreads spreads;
  int rays_per_cluster = 20;
  double k_factor = 0.0;
  double raw_power_sum = 1.0;
};

using Profile = std::variant<LinkProfile, CdlProfile>;

// {fading part, LOS part} of a normalized total power under Rician factor k.
inline std::pair<double, double> split_rician(double total_power, double k) {
  return {total_power / (1.0 + k), total_power * k / (1.0 + k)};
}

// Wrap an azimuth (radians) into (-pi, pi].
inline double wrap_azimuth(double a) {
  double w = std::fmod(a + kPi, 2.0 * kPi);
  if (w <= 0.0) w += 2.0 * kPi;
  return w - kPi;
}

namespace detail {

using nlohmann::json;

inline void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                       const std::string& where) {
  for (const auto& item : obj.items()) {
    const std::string& key = item.key();
    if (key.rfind("x-", 0) == 0) continue;
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok)
      throw ValidationError(where + ": unknown field '" + key + "'");
  }
}

inline double get_number(const json& obj, const char* field,
                         const std::string& where) {
  if (!obj.contains(field))
    throw ValidationError(where + ": missing field '" + field + "'");
  const json& v = obj.at(field);
  if (!v.is_number())
    throw ValidationError(where + ": field '" + field + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x))
    throw ValidationError(where + ": field '" + field + "' must be finite");
  return x;
}

inline bool get_flag(const json& obj, const char* field,
                     const std::string& where) {
  if (!obj.contains(field)) return false;
  if (!obj.at(field).is_boolean())
    throw ValidationError(where + ": field '" + field + "' must be a boolean");
  return obj.at(field).get<bool>();
}

inline double load_k_factor(const json& doc, bool has_los,
                            const std::string& where) {
  if (!doc.contains("k_factor_db")) {
    if (has_los)
      throw ValidationError(where +
                            ": an is_los entry requires 'k_factor_db'");
    return 0.0;
  }
  if (!has_los)
    throw ValidationError(where +
                          ": 'k_factor_db' given but no entry has is_los");
  const double db = get_number(doc, "k_factor_db", where);
  return db2lin(db);
}

inline LinkProfile load_tdl(const json& doc, const std::string& name) {
  const std::string where = "profile '" + name + "'";
  check_keys(doc, {"kind", "name", "taps", "k_factor_db",
                   "los_doppler_fraction"},
             where);
  if (!doc.contains("taps") || !doc.at("taps").is_array() ||
      doc.at("taps").empty())
    throw ValidationError(where + ": 'taps' must be a non-empty array");

  LinkProfile p;
  p.name = name;
  int los_count = 0;
  for (std::size_t i = 0; i < doc.at("taps").size(); ++i) {
    const json& t = doc.at("taps").at(i);
    const std::string tw = where + ", tap " + std::to_string(i);
    if (!t.is_object())
      throw ValidationError(tw + ": tap must be an object");
    check_keys(t, {"normalized_delay", "power", "is_los"}, tw);
    TapEntry tap;
    tap.delay = get_number(t, "normalized_delay", tw);
    if (tap.delay < 0.0)
      throw ValidationError(tw + ": field 'normalized_delay' must be >= 0");
    tap.power = get_number(t, "power", tw);
    if (!(tap.power > 0.0))
      throw ValidationError(tw + ": field 'power' must be > 0");
    tap.is_los = get_flag(t, "is_los", tw);
    if (tap.is_los && ++los_count > 1)
      throw ValidationError(tw + ": duplicate 'is_los' tap");
    p.taps.push_back(tap);
  }
  p.k_factor = load_k_factor(doc, los_count == 1, where);
  if (doc.contains("los_doppler_fraction")) {
    p.los_doppler_fraction =
        get_number(doc, "los_doppler_fraction", where);
    if (p.los_doppler_fraction < -1.0 || p.los_doppler_fraction > 1.0)
      throw ValidationError(where +
                            ": field 'los_doppler_fraction' must be in "
                            "[-1, 1]");
  }

  std::stable_sort(p.taps.begin(), p.taps.end(),
                   [](const TapEntry& a, const TapEntry& b) {
                     return a.delay < b.delay;
                   });
  if (los_count == 1 && !p.taps.front().is_los)
    throw ValidationError(where +
                          ": the is_los tap must have the smallest delay");

  // Unit-sum normalization over total tap powers (LOS part included).
  double sum = 0.0;
  for (const TapEntry& t : p.taps)
    sum += t.is_los ? t.power * (1.0 + p.k_factor) : t.power;
  p.raw_power_sum = sum;
  for (TapEntry& t : p.taps) {
    const double total = t.is_los ? t.power * (1.0 + p.k_factor) : t.power;
    t.power = total / sum;
  }
  return p;
}

inline CdlProfile load_cdl(const json& doc, const std::string& name) {
  const std::string where = "profile '" + name + "'";
  check_keys(doc, {"kind", "name", "clusters", "spreads_deg",
                   "rays_per_cluster", "k_factor_db"},
             where);
  if (!doc.contains("clusters") || !doc.at("clusters").is_array() ||
      doc.at("clusters").empty())
    throw ValidationError(where + ": 'clusters' must be a non-empty array");
  if (!doc.contains("spreads_deg") || !doc.at("spreads_deg").is_object())
    throw ValidationError(where + ": 'spreads_deg' must be an object");

  CdlProfile p;
  p.name = name;

  const json& sp = doc.at("spreads_deg");
  const std::string sw = where + ", spreads_deg";
  check_keys(sp, {"asd", "asa", "zsd", "zsa"}, sw);
  const auto spread = [&](const char* f) {
    const double v = get_number(sp, f, sw);
    if (v < 0.0)
      throw ValidationError(sw + ": field '" + f + "' must be >= 0");
    return deg2rad(v);
  };
  p.spreads = {spread("asd"), spread("asa"), spread("zsd"), spread("zsa")};

  if (doc.contains("rays_per_cluster")) {
    const json& m = doc.at("rays_per_cluster");
    if (!m.is_number_integer() || m.get<long long>() < 1)
      throw ValidationError(where +
                            ": field 'rays_per_cluster' must be a positive "
                            "integer");
    p.rays_per_cluster = int(m.get<long long>());
  }

  int los_count = 0;
  for (std::size_t i = 0; i < doc.at("clusters").size(); ++i) {
    const json& c = doc.at("clusters").at(i);
    const std::string cw = where + ", cluster " + std::to_string(i);
    if (!c.is_object())
      throw ValidationError(cw + ": cluster must be an object");
    check_keys(c, {"power", "aod_deg", "aoa_deg", "zod_deg", "zoa_deg",
                   "is_los"},
               cw);
    CdlCluster cl;
    cl.power = get_number(c, "power", cw);
    if (!(cl.power > 0.0))
      throw ValidationError(cw + ": field 'power' must be > 0");
    cl.aod = wrap_azimuth(deg2rad(get_number(c, "aod_deg", cw)));
    cl.aoa = wrap_azimuth(deg2rad(get_number(c, "aoa_deg", cw)));
    const auto zenith = [&](const char* f) {
      const double deg = get_number(c, f, cw);
      if (deg < 0.0 || deg > 180.0)
        throw ValidationError(cw + ": field '" + std::string(f) +
                              "' must be in [0, 180]");
      return deg2rad(deg);
    };
    cl.zod = zenith("zod_deg");
    cl.zoa = zenith("zoa_deg");
    cl.is_los = get_flag(c, "is_los", cw);
    if (cl.is_los && ++los_count > 1)
      throw ValidationError(cw + ": duplicate 'is_los' cluster");
    p.clusters.push_back(cl);
  }
  p.k_factor = load_k_factor(doc, los_count == 1, where);

  double sum = 0.0;
  for (const CdlCluster& c : p.clusters)
    sum += c.is_los ? c.power * (1.0 + p.k_factor) : c.power;
  p.raw_power_sum = sum;
  for (CdlCluster& c : p.clusters) {
    const double total = c.is_los ? c.power * (1.0 + p.k_factor) : c.power;
    c.power = total / sum;
  }
  return p;
}

}  // namespace detail

// Parse and validate a profile document.  Powers come out normalized to
// unit sum (LOS parts included), angles in radians, delays untouched.
inline Profile load_profile(const nlohmann::json& doc) {
  if (!doc.is_object())
    throw ValidationError("profile document must be a JSON object");
  if (!doc.contains("name") || !doc.at("name").is_string() ||
      doc.at("name").get<std::string>().empty())
    throw ValidationError("profile: missing or empty field 'name'");
  const std::string name = doc.at("name").get<std::string>();
  if (!doc.contains("kind") || !doc.at("kind").is_string())
    throw ValidationError("profile '" + name + "': missing field 'kind'");
  const std::string kind = doc.at("kind").get<std::string>();
  if (kind == "tdl") return detail::load_tdl(doc, name);
  if (kind == "cdl") return detail::load_cdl(doc, name);
  throw ValidationError("profile '" + name + "': unknown kind '" + kind +
                        "'");
}

inline Profile load_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open profile file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("profile file " + path + ": " + e.what());
  }
  return load_profile(doc);
}

inline nlohmann::json serialize_profile(const LinkProfile& p) {
  if (p.delays_scaled)
    throw StateError("serialize_profile: profile has physical delays");
  nlohmann::json doc;
  doc["kind"] = "tdl";
  doc["name"] = p.name;
  nlohmann::json taps = nlohmann::json::array();
  for (const TapEntry& t : p.taps) {
    nlohmann::json tap;
    tap["normalized_delay"] = t.delay;
    tap["power"] = t.is_los ? t.power / (1.0 + p.k_factor) : t.power;
    if (t.is_los) tap["is_los"] = true;
    taps.push_back(tap);
  }
  doc["taps"] = std::move(taps);
  if (p.k_factor > 0.0) doc["k_factor_db"] = 10.0 * std::log10(p.k_factor);
  if (p.los_doppler_fraction != 0.7)
    doc["los_doppler_fraction"] = p.los_doppler_fraction;
  return doc;
}

inline nlohmann::json serialize_profile(const CdlProfile& p) {
  nlohmann::json doc;
  doc["kind"] = "cdl";
  doc["name"] = p.name;
  doc["spreads_deg"] = {{"asd", rad2deg(p.spreads.asd)},
                        {"asa", rad2deg(p.spreads.asa)},
                        {"zsd", rad2deg(p.spreads.zsd)},
                        {"zsa", rad2deg(p.spreads.zsa)}};
  doc["rays_per_cluster"] = p.rays_per_cluster;
  nlohmann::json clusters = nlohmann::json::array();
  for (const CdlCluster& c : p.clusters) {
    nlohmann::json cl;
    cl["power"] = c.is_los ? c.power / (1.0 + p.k_factor) : c.power;
    cl["aod_deg"] = rad2deg(c.aod);
    cl["aoa_deg"] = rad2deg(c.aoa);
    cl["zod_deg"] = rad2deg(c.zod);
    cl["zoa_deg"] = rad2deg(c.zoa);
    if (c.is_los) cl["is_los"] = true;
    clusters.push_back(cl);
  }
  doc["clusters"] = std::move(clusters);
  if (p.k_factor > 0.0) doc["k_factor_db"] = 10.0 * std::log10(p.k_factor);
  return doc;
}

inline nlohmann::json serialize_profile(const Profile& p) {
  if (std::holds_alternative<LinkProfile>(p))
    return serialize_profile(std::get<LinkProfile>(p));
  return serialize_profile(std::get<CdlProfile>(p));
}

// Turn dimensionless tap delays into physical seconds by multiplying with
// the target RMS delay spread.
inline LinkProfile scale_delays(const LinkProfile& profile,
                                double delay_spread) {
  if (profile.delays_scaled)
    throw StateError("scale_delays: profile '" + profile.name +
                     "' already has physical delays");
  if (!(delay_spread > 0.0))
    throw std::invalid_argument("scale_delays: delay_spread must be > 0");
  LinkProfile out = profile;
  for (TapEntry& t : out.taps) t.delay *= delay_spread;
  out.delays_scaled = true;
  return out;
}

}  // namespace chansim

#endif  // CHANSIM_PROFILES_HPP
