#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace walkernet {

namespace constants {
// Earth gravitational parameter, km^3/s^2
inline constexpr double kMuEarth = 398600.4418;
// Mean Earth radius, km
inline constexpr double kEarthRadiusKm = 6371.0;
// Sidereal rotation rate of the Earth, rad/s
inline constexpr double kEarthRotationRate = 7.2921150e-5;
// Speed of light, m/s
inline constexpr double kSpeedOfLight = 299792458.0;
// Boltzmann constant, J/K
inline constexpr double kBoltzmann = 1.380649e-23;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace constants

// Slant range of a blocked (no line-of-sight) link.
inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();
// Rate sentinel for links modeled without a capacity constraint (GSLs).
inline constexpr double kInfiniteRate = std::numeric_limits<double>::infinity();

inline bool is_unreachable(double range_km) { return std::isinf(range_km); }

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct UnreachableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StatsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }
};

inline double distance_km(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

// Angular distance on the circle, result in [0, pi].
inline double circular_distance(double a, double b) {
  double d = std::fmod(std::fabs(a - b), constants::kTwoPi);
  return d > constants::kPi ? constants::kTwoPi - d : d;
}

// Reduce an angle to [0, 2*pi).
inline double wrap_angle(double a) {
  double w = std::fmod(a, constants::kTwoPi);
  if (w < 0.0) w += constants::kTwoPi;
  return w;
}

// Seed stream identifiers for the reproducibility hierarchy:
// master seed -> per-rotation seed -> per-purpose stream.
enum class Stream : std::uint32_t {
  kRotation = 1,  // delta-t draw of a rotation
  kTraffic = 2,   // burst trace of a rotation (shared by all metrics)
  kTieBreak = 3,  // per-metric randomized tie-breaking
  kGeneric = 4,
};

// Deterministic child engine for (master, rotation, stream, tag).
inline std::mt19937_64 substream(std::uint64_t master, std::uint64_t rotation,
                                 Stream stream, std::uint64_t tag = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(master & 0xffffffffu),
                    static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(rotation & 0xffffffffu),
                    static_cast<std::uint32_t>(rotation >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(tag & 0xffffffffu),
                    static_cast<std::uint32_t>(tag >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace walkernet
