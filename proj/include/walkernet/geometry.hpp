#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "walkernet/core.hpp"

namespace walkernet {

// Walker star constellation: M polar planes whose node azimuths span pi,
// each carrying the same number of evenly spaced satellites.
struct ConstellationConfig {
  int num_planes = 5;
  int sats_per_plane = 40;
  double base_altitude_km = 1000.0;
  double altitude_step_km = 10.0;  // plane a sits at base + step*(a-1)
  double earth_radius_km = constants::kEarthRadiusKm;

  double plane_altitude_km(int plane) const {
    return base_altitude_km + altitude_step_km * plane;
  }
  double plane_radius_km(int plane) const {
    return earth_radius_km + plane_altitude_km(plane);
  }
  int total_sats() const { return num_planes * sats_per_plane; }

  void validate() const {
    if (num_planes < 1) throw ConfigError("constellation: num_planes must be >= 1");
    if (sats_per_plane < 3) throw ConfigError("constellation: sats_per_plane must be >= 3");
    if (base_altitude_km <= 0.0) throw ConfigError("constellation: base_altitude_km must be > 0");
    if (earth_radius_km <= 0.0) throw ConfigError("constellation: earth_radius_km must be > 0");
    for (int a = 0; a < num_planes; ++a)
      if (plane_altitude_km(a) <= 0.0)
        throw ConfigError("constellation: plane altitude must stay > 0");
  }
};

struct GroundStation {
  std::string name;
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;

  void validate() const {
    if (std::fabs(latitude_deg) > 90.0)
      throw ConfigError("ground station '" + name + "': |latitude| > 90");
    if (longitude_deg < -180.0 || longitude_deg > 180.0)
      throw ConfigError("ground station '" + name + "': longitude outside [-180, 180]");
  }
};

struct OrbitalPlane {
  double node_azimuth_rad = 0.0;   // epsilon_a = (a-1)*pi/M
  double altitude_km = 0.0;
  double radius_km = 0.0;
  double angular_rate = 0.0;       // sqrt(mu / radius^3), rad/s
  std::vector<double> anomalies;   // polar angle theta of each slot, in [0, 2pi)
};

// Immutable snapshot of the space segment at one instant.
struct Constellation {
  ConstellationConfig config;
  std::vector<OrbitalPlane> planes;

  int num_sats() const { return config.total_sats(); }
  int plane_of(int sat_id) const { return sat_id / config.sats_per_plane; }
  int slot_of(int sat_id) const { return sat_id % config.sats_per_plane; }
  int sat_id(int plane, int slot) const { return plane * config.sats_per_plane + slot; }
  double theta_of(int sat_id) const {
    return planes[plane_of(sat_id)].anomalies[slot_of(sat_id)];
  }
};

inline Constellation build_constellation(const ConstellationConfig& cfg,
                                         const std::vector<double>& initial_anomalies = {}) {
  cfg.validate();
  if (!initial_anomalies.empty() &&
      static_cast<int>(initial_anomalies.size()) != cfg.num_planes)
    throw ConfigError("build_constellation: need one initial anomaly per plane");

  Constellation c;
  c.config = cfg;
  c.planes.resize(cfg.num_planes);
  for (int a = 0; a < cfg.num_planes; ++a) {
    OrbitalPlane& pl = c.planes[a];
    pl.node_azimuth_rad = a * constants::kPi / cfg.num_planes;
    pl.altitude_km = cfg.plane_altitude_km(a);
    pl.radius_km = cfg.plane_radius_km(a);
    pl.angular_rate = std::sqrt(constants::kMuEarth / std::pow(pl.radius_km, 3));
    double base = initial_anomalies.empty() ? 0.0 : initial_anomalies[a];
    pl.anomalies.resize(cfg.sats_per_plane);
    for (int k = 0; k < cfg.sats_per_plane; ++k)
      pl.anomalies[k] = wrap_angle(base + constants::kTwoPi * k / cfg.sats_per_plane);
  }
  return c;
}

// Advance every satellite along its plane by omega_a * dt. Keplerian circular
// orbits, so even in-plane spacing is preserved.
inline Constellation propagate(const Constellation& c, double dt_s) {
  if (dt_s < 0.0) throw ConfigError("propagate: dt must be >= 0");
  Constellation out = c;
  for (OrbitalPlane& pl : out.planes) {
    double advance = pl.angular_rate * dt_s;
    for (double& theta : pl.anomalies) theta = wrap_angle(theta + advance);
  }
  return out;
}

// Earth-fixed longitudes drift westward relative to the inertial frame while
// the constellation advances; equivalently the stations move east.
inline std::vector<GroundStation> rotate_ground_stations(
    std::vector<GroundStation> stations, double dt_s,
    double rotation_rate = constants::kEarthRotationRate) {
  for (GroundStation& gs : stations) {
    double lon = gs.longitude_deg + rotation_rate * dt_s * 180.0 / constants::kPi;
    lon = std::fmod(lon + 180.0, 360.0);
    if (lon < 0.0) lon += 360.0;
    gs.longitude_deg = lon - 180.0;
  }
  return stations;
}

// Plane coordinates (r, epsilon, theta) to Cartesian km. theta is the angle
// along the orbit measured from the ascending node's equator crossing, so a
// polar plane sweeps equator -> north pole -> equator -> south pole.
inline Vec3 satellite_position(const Constellation& c, int sat_id) {
  const OrbitalPlane& pl = c.planes[c.plane_of(sat_id)];
  double theta = pl.anomalies[c.slot_of(sat_id)];
  double ct = std::cos(theta), st = std::sin(theta);
  double ce = std::cos(pl.node_azimuth_rad), se = std::sin(pl.node_azimuth_rad);
  return {pl.radius_km * ct * ce, pl.radius_km * ct * se, pl.radius_km * st};
}

inline Vec3 ground_station_position(const GroundStation& gs, double earth_radius_km) {
  double lat = gs.latitude_deg * constants::kPi / 180.0;
  double lon = gs.longitude_deg * constants::kPi / 180.0;
  double cl = std::cos(lat);
  return {earth_radius_km * cl * std::cos(lon), earth_radius_km * cl * std::sin(lon),
          earth_radius_km * std::sin(lat)};
}

// Line-of-sight distance. Returns the Euclidean norm when the segment clears
// the occluding sphere, kUnreachable when the Earth blocks it.
inline double slant_range(const Vec3& p1, const Vec3& p2, double earth_radius_km,
                          double occlusion_margin_km = 0.0) {
  Vec3 d = p2 - p1;
  double len2 = d.norm2();
  double min_dist;
  if (len2 == 0.0) {
    min_dist = p1.norm();
  } else {
    double t = -p1.dot(d) / len2;
    if (t < 0.0) t = 0.0;
    if (t > 1.0) t = 1.0;
    min_dist = (p1 + d * t).norm();
  }
  if (min_dist < earth_radius_km + occlusion_margin_km) return kUnreachable;
  return std::sqrt(len2);
}

}  // namespace walkernet
