#pragma once

#include <cmath>

#include "walkernet/core.hpp"

namespace walkernet {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// Adaptive-rate ISL budget. EIRP is specified as a spectral density, so the
// transmit side is eirp_density + 10*log10(B/1MHz) and tx_gain_db is kept for
// reference only (folding it in again would double-count the antenna).
struct LinkBudgetParams {
  double carrier_frequency_hz = 20e9;
  double eirp_density_dbw_mhz = 4.0;
  double tx_gain_db = 38.5;
  double rx_gain_db = 38.5;
  double bandwidth_hz = 400e6;
  double noise_temp_k = 354.81;
  double snr_margin_db = 2.0;
  double boltzmann = constants::kBoltzmann;
  double speed_of_light = constants::kSpeedOfLight;

  double eirp_dbw() const {
    return eirp_density_dbw_mhz + 10.0 * std::log10(bandwidth_hz / 1e6);
  }

  void validate() const {
    if (carrier_frequency_hz <= 0.0) throw ConfigError("link: carrier frequency must be > 0");
    if (bandwidth_hz <= 0.0) throw ConfigError("link: bandwidth must be > 0");
    if (noise_temp_k <= 0.0) throw ConfigError("link: noise temperature must be > 0");
    if (snr_margin_db < 0.0) throw ConfigError("link: SNR margin must be >= 0");
  }
};

// Free-space pathloss (4*pi*l*f/c)^2 as a linear factor.
inline double fspl(double length_km, double frequency_hz,
                   double speed_of_light = constants::kSpeedOfLight) {
  if (is_unreachable(length_km)) return kUnreachable;
  if (length_km <= 0.0) throw DomainError("fspl: length must be > 0");
  double x = 4.0 * constants::kPi * (length_km * 1e3) * frequency_hz / speed_of_light;
  return x * x;
}

inline double received_power_w(const LinkBudgetParams& p, double length_km) {
  double loss = fspl(length_km, p.carrier_frequency_hz, p.speed_of_light);
  return db_to_linear(p.eirp_dbw()) * db_to_linear(p.rx_gain_db) / loss;
}

// Shannon rate with the SNR backed off by the configured margin. Blocked
// links carry no traffic.
inline double data_rate_bps(const LinkBudgetParams& p, double length_km) {
  if (is_unreachable(length_km)) return 0.0;
  double snr = received_power_w(p, length_km) /
               (p.boltzmann * p.noise_temp_k * p.bandwidth_hz * db_to_linear(p.snr_margin_db));
  return p.bandwidth_hz * std::log2(1.0 + snr);
}

}  // namespace walkernet
