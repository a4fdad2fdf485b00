#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"

using namespace walkernet;
using Catch::Approx;

namespace {
LinkBudgetParams table_params(double bandwidth_hz = 400e6) {
  LinkBudgetParams p;  // defaults are the reference settings
  p.bandwidth_hz = bandwidth_hz;
  return p;
}
}  // namespace

TEST_CASE("free-space pathloss", "[link_budget]") {
  SECTION("1000 km at 20 GHz") {
    double loss_db = linear_to_db(fspl(1000.0, 20e9));
    CHECK(loss_db == Approx(178.468383135163).epsilon(1e-12));
  }
  SECTION("2000 km at 20 GHz") {
    double loss_db = linear_to_db(fspl(2000.0, 20e9));
    CHECK(loss_db == Approx(184.48898304844263).epsilon(1e-12));
  }
  SECTION("doubling the distance adds 20 log10(2) dB") {
    double d1 = linear_to_db(fspl(1234.5, 20e9));
    double d2 = linear_to_db(fspl(2469.0, 20e9));
    CHECK(d2 - d1 == Approx(20.0 * std::log10(2.0)).epsilon(1e-12));
  }
  SECTION("unit argument: l = c/(4 pi f) gives a loss factor of 1") {
    double f = 20e9;
    double l_km = constants::kSpeedOfLight / (4.0 * constants::kPi * f) / 1e3;
    CHECK(fspl(l_km, f) == Approx(1.0).epsilon(1e-12));
  }
  SECTION("nonpositive length is a domain error") {
    CHECK_THROWS_AS(fspl(0.0, 20e9), DomainError);
    CHECK_THROWS_AS(fspl(-3.0, 20e9), DomainError);
  }
  SECTION("unreachable propagates to infinite loss") {
    CHECK(std::isinf(fspl(kUnreachable, 20e9)));
  }
}

TEST_CASE("EIRP follows the density times bandwidth rule", "[link_budget]") {
  CHECK(table_params(400e6).eirp_dbw() == Approx(30.020599913279625).epsilon(1e-12));
  CHECK(table_params(100e6).eirp_dbw() == Approx(24.0).epsilon(1e-12));  // 4 + 10 log10(100)
}

TEST_CASE("received power at 2000 km", "[link_budget]") {
  LinkBudgetParams p = table_params();
  double pr_dbw = linear_to_db(received_power_w(p, 2000.0));
  CHECK(pr_dbw == Approx(-115.96838313516301).margin(1e-9));

  SECTION("halving the distance quadruples the power") {
    CHECK(received_power_w(p, 1000.0) ==
          Approx(4.0 * received_power_w(p, 2000.0)).epsilon(1e-12));
  }
  SECTION("P_r * L_p / G_r is the EIRP, independent of distance") {
    for (double l : {500.0, 1000.0, 2000.0, 4000.0}) {
      double eirp_w = received_power_w(p, l) * fspl(l, p.carrier_frequency_hz) /
                      db_to_linear(p.rx_gain_db);
      CHECK(eirp_w == Approx(db_to_linear(p.eirp_dbw())).epsilon(1e-12));
    }
  }
}

TEST_CASE("shannon data rate with margin", "[link_budget]") {
  LinkBudgetParams p = table_params();

  SECTION("noise floor at 400 MHz") {
    double noise_dbw = linear_to_db(p.boltzmann * p.noise_temp_k * p.bandwidth_hz);
    CHECK(noise_dbw == Approx(-117.07860874463152).margin(1e-9));
  }
  SECTION("2000 km, 400 MHz reference value") {
    CHECK(data_rate_bps(p, 2000.0) == Approx(343907247.7816381).epsilon(1e-9));
  }
  SECTION("intra-plane chord, 400 MHz") {
    CHECK(data_rate_bps(p, 1156.64398921989) == Approx(712297532.9220588).epsilon(1e-9));
  }
  SECTION("2000 km, 100 MHz") {
    CHECK(data_rate_bps(table_params(100e6), 2000.0) ==
          Approx(85976811.94540952).epsilon(1e-9));
  }
  SECTION("strictly decreasing in distance") {
    double prev = data_rate_bps(p, 100.0);
    for (double l = 200.0; l <= 8000.0; l += 100.0) {
      double r = data_rate_bps(p, l);
      CHECK(r < prev);
      prev = r;
    }
  }
  SECTION("rate inverts back to the post-margin SNR") {
    for (double l : {700.0, 1500.0, 3100.0}) {
      double rate = data_rate_bps(p, l);
      double snr_from_rate = std::exp2(rate / p.bandwidth_hz) - 1.0;
      double snr_direct = received_power_w(p, l) /
                          (p.boltzmann * p.noise_temp_k * p.bandwidth_hz *
                           db_to_linear(p.snr_margin_db));
      CHECK(snr_from_rate == Approx(snr_direct).epsilon(1e-9));
    }
  }
  SECTION("unreachable distance carries zero rate") {
    CHECK(data_rate_bps(p, kUnreachable) == 0.0);
  }
}

TEST_CASE("parameter validation", "[link_budget]") {
  LinkBudgetParams p = table_params();
  p.bandwidth_hz = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = table_params();
  p.noise_temp_k = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = table_params();
  p.snr_margin_db = -0.1;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = table_params();
  p.carrier_frequency_hz = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}
