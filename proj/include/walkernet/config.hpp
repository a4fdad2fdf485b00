#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "walkernet/core.hpp"
#include "walkernet/geometry.hpp"
#include "walkernet/link_budget.hpp"
#include "walkernet/metrics.hpp"
#include "walkernet/simulator.hpp"

namespace walkernet {

// Knobs of a study that are not physics: how many topology snapshots to draw,
// how far apart in time they may lie, which metrics and bandwidths to sweep.
struct ExperimentSettings {
  int rotations = 100;
  double dt_min_s = 1e4;
  double dt_max_s = 1e6;
  std::uint64_t seed = 1;
  std::vector<Metric> metrics = {Metric::kPathlossSimplified};
  std::vector<double> bandwidths_mhz = {400.0};
  std::string out_dir = "out";
  std::string gs_file;  // empty -> built-in station list
  bool rotate_ground_stations = true;
  bool enable_seam_links = false;
  double occlusion_margin_km = 0.0;
  int threads = 0;  // 0 -> hardware concurrency

  void validate() const {
    if (rotations < 1) throw ConfigError("experiment: rotations must be >= 1");
    if (dt_min_s < 0.0 || dt_max_s < dt_min_s)
      throw ConfigError("experiment: need 0 <= dt_min <= dt_max");
    if (metrics.empty()) throw ConfigError("experiment: metric list is empty");
    if (bandwidths_mhz.empty()) throw ConfigError("experiment: bandwidth list is empty");
    for (double b : bandwidths_mhz)
      if (b <= 0.0) throw ConfigError("experiment: bandwidths must be > 0");
    if (occlusion_margin_km < 0.0)
      throw ConfigError("experiment: occlusion margin must be >= 0");
    if (threads < 0) throw ConfigError("experiment: threads must be >= 0");
  }
};

struct AppConfig {
  ConstellationConfig constellation;
  LinkBudgetParams link;
  TrafficConfig traffic;
  ExperimentSettings experiment;

  void validate() const {
    constellation.validate();
    link.validate();
    traffic.validate();
    experiment.validate();
  }
};

namespace detail {

inline std::string trim(std::string s) {
  const char* ws = " \t\r\n";
  std::size_t a = s.find_first_not_of(ws);
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(ws);
  return s.substr(a, b - a + 1);
}

[[noreturn]] inline void config_fail(int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

inline double to_double(const std::string& key, const std::string& value, int line) {
  try {
    std::size_t used = 0;
    double x = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    config_fail(line, key + ": not a number: '" + value + "'");
  }
}

inline long to_long(const std::string& key, const std::string& value, int line) {
  try {
    std::size_t used = 0;
    long x = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    config_fail(line, key + ": not an integer: '" + value + "'");
  }
}

inline bool to_bool(const std::string& key, const std::string& value, int line) {
  if (value == "true" || value == "yes" || value == "on" || value == "1") return true;
  if (value == "false" || value == "no" || value == "off" || value == "0") return false;
  config_fail(line, key + ": not a boolean: '" + value + "'");
}

inline std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace detail

// Sectioned key = value text; '#' starts a comment anywhere on a line.
// Unknown sections and keys are errors so that typos cannot silently
// fall back to defaults.
inline AppConfig parse_config(std::istream& in, AppConfig config = {}) {
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') detail::config_fail(lineno, "unterminated section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section != "constellation" && section != "link" && section != "traffic" &&
          section != "experiment")
        detail::config_fail(lineno, "unknown section [" + section + "]");
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) detail::config_fail(lineno, "expected key = value");
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) detail::config_fail(lineno, "empty key");
    if (value.empty()) detail::config_fail(lineno, key + ": empty value");
    if (section.empty()) detail::config_fail(lineno, "key outside of any section");

    if (section == "constellation") {
      if (key == "planes")
        config.constellation.num_planes = static_cast<int>(detail::to_long(key, value, lineno));
      else if (key == "sats_per_plane")
        config.constellation.sats_per_plane =
            static_cast<int>(detail::to_long(key, value, lineno));
      else if (key == "base_altitude_km")
        config.constellation.base_altitude_km = detail::to_double(key, value, lineno);
      else if (key == "altitude_step_km")
        config.constellation.altitude_step_km = detail::to_double(key, value, lineno);
      else if (key == "earth_radius_km")
        config.constellation.earth_radius_km = detail::to_double(key, value, lineno);
      else
        detail::config_fail(lineno, "unknown key '" + key + "' in [constellation]");
    } else if (section == "link") {
      if (key == "carrier_ghz")
        config.link.carrier_frequency_hz = detail::to_double(key, value, lineno) * 1e9;
      else if (key == "eirp_dbw_per_mhz")
        config.link.eirp_density_dbw_mhz = detail::to_double(key, value, lineno);
      else if (key == "tx_gain_db")
        config.link.tx_gain_db = detail::to_double(key, value, lineno);
      else if (key == "rx_gain_db")
        config.link.rx_gain_db = detail::to_double(key, value, lineno);
      else if (key == "bandwidth_mhz") {
        config.experiment.bandwidths_mhz.clear();
        for (const std::string& item : detail::split_list(value))
          config.experiment.bandwidths_mhz.push_back(detail::to_double(key, item, lineno));
        if (config.experiment.bandwidths_mhz.empty())
          detail::config_fail(lineno, "bandwidth_mhz: empty list");
      } else if (key == "noise_temp_k")
        config.link.noise_temp_k = detail::to_double(key, value, lineno);
      else if (key == "snr_margin_db")
        config.link.snr_margin_db = detail::to_double(key, value, lineno);
      else
        detail::config_fail(lineno, "unknown key '" + key + "' in [link]");
    } else if (section == "traffic") {
      if (key == "arrival_mbps")
        config.traffic.arrival_bps = detail::to_double(key, value, lineno) * 1e6;
      else if (key == "packet_mbit")
        config.traffic.packet_bits = detail::to_double(key, value, lineno) * 1e6;
      else if (key == "burst_max_packets")
        config.traffic.burst_max_packets =
            static_cast<int>(detail::to_long(key, value, lineno));
      else if (key == "t_sim_s")
        config.traffic.t_sim_s = detail::to_double(key, value, lineno);
      else if (key == "warmup_s")
        config.traffic.warmup_s = detail::to_double(key, value, lineno);
      else
        detail::config_fail(lineno, "unknown key '" + key + "' in [traffic]");
    } else {  // experiment
      if (key == "rotations")
        config.experiment.rotations = static_cast<int>(detail::to_long(key, value, lineno));
      else if (key == "dt_min_s")
        config.experiment.dt_min_s = detail::to_double(key, value, lineno);
      else if (key == "dt_max_s")
        config.experiment.dt_max_s = detail::to_double(key, value, lineno);
      else if (key == "seed")
        config.experiment.seed = static_cast<std::uint64_t>(detail::to_long(key, value, lineno));
      else if (key == "metrics") {
        config.experiment.metrics.clear();
        for (const std::string& item : detail::split_list(value)) {
          try {
            config.experiment.metrics.push_back(parse_metric(item));
          } catch (const ConfigError& err) {
            detail::config_fail(lineno, err.what());
          }
        }
        if (config.experiment.metrics.empty())
          detail::config_fail(lineno, "metrics: empty list");
      } else if (key == "out_dir")
        config.experiment.out_dir = value;
      else if (key == "gs_file")
        config.experiment.gs_file = value;
      else if (key == "rotate_ground_stations")
        config.experiment.rotate_ground_stations = detail::to_bool(key, value, lineno);
      else if (key == "enable_seam_links")
        config.experiment.enable_seam_links = detail::to_bool(key, value, lineno);
      else if (key == "occlusion_margin_km")
        config.experiment.occlusion_margin_km = detail::to_double(key, value, lineno);
      else if (key == "threads")
        config.experiment.threads = static_cast<int>(detail::to_long(key, value, lineno));
      else
        detail::config_fail(lineno, "unknown key '" + key + "' in [experiment]");
    }
  }
  config.validate();
  return config;
}

inline AppConfig load_config(const std::string& path, AppConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  try {
    return parse_config(in, std::move(base));
  } catch (const ConfigError& err) {
    throw ConfigError(path + ": " + err.what());
  }
}

}  // namespace walkernet
