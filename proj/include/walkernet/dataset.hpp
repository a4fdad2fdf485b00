#pragma once

#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "walkernet/config.hpp"
#include "walkernet/geometry.hpp"

namespace walkernet {

// Station tables are plain text: one `name, latitude_deg, longitude_deg`
// row per line, '#' comments, blank lines ignored.
inline std::vector<GroundStation> parse_ground_stations(std::istream& in) {
  std::vector<GroundStation> stations;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    std::vector<std::string> fields = detail::split_list(line);
    if (fields.size() != 3)
      detail::config_fail(lineno, "expected 'name, lat, lon', got '" + line + "'");
    GroundStation gs;
    gs.name = fields[0];
    gs.latitude_deg = detail::to_double("latitude", fields[1], lineno);
    gs.longitude_deg = detail::to_double("longitude", fields[2], lineno);
    try {
      gs.validate();
    } catch (const ConfigError& err) {
      detail::config_fail(lineno, err.what());
    }
    for (const GroundStation& seen : stations)
      if (seen.name == gs.name) detail::config_fail(lineno, "duplicate station '" + gs.name + "'");
    stations.push_back(std::move(gs));
  }
  return stations;
}

inline std::vector<GroundStation> load_ground_stations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open ground station file: " + path);
  try {
    return parse_ground_stations(in);
  } catch (const ConfigError& err) {
    throw ConfigError(path + ": " + err.what());
  }
}

// Built-in 23-station network, approximating a commercial polar-friendly
// ground segment. Coordinates are rough city/site positions, not surveyed
// antenna locations.
inline std::vector<GroundStation> default_ground_stations() {
  static const char* table = R"(# name, latitude_deg, longitude_deg
Svalbard,           78.23,   15.39
Tromso,             69.65,   18.94
Kourou,              5.17,  -52.68
Santiago,          -33.45,  -70.67
Inuvik,             68.32, -133.55
Fairbanks,          64.80, -147.50
LongBeach,          33.77, -118.19
SouthPoint,         19.01, -155.66
Panama,              8.98,  -79.52
PuntaArenas,       -53.16,  -70.91
Cordoba,           -31.42,  -64.18
Puertollano,        38.69,   -4.11
Athens,             37.98,   23.73
Hartebeesthoek,    -25.89,   27.69
Troll,             -72.01,    2.53
Mauritius,         -20.14,   57.48
Dubai,              25.27,   55.30
Bangalore,          12.97,   77.59
Singapore,           1.35,  103.82
Jeju,               33.39,  126.26
Tokyo,              35.68,  139.69
Dongara,           -29.05,  115.35
Awarua,            -46.53,  168.38
)";
  std::istringstream in(table);
  return parse_ground_stations(in);
}

// Resolve the station list an experiment should run against.
inline std::vector<GroundStation> resolve_ground_stations(const ExperimentSettings& settings) {
  std::vector<GroundStation> stations = settings.gs_file.empty()
                                            ? default_ground_stations()
                                            : load_ground_stations(settings.gs_file);
  if (stations.size() < 2)
    throw ConfigError("ground station list needs at least 2 entries, got " +
                      std::to_string(stations.size()));
  return stations;
}

}  // namespace walkernet
