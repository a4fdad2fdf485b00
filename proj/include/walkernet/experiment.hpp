#pragma once

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "walkernet/capacity.hpp"
#include "walkernet/config.hpp"
#include "walkernet/core.hpp"
#include "walkernet/simulator.hpp"
#include "walkernet/stats.hpp"
#include "walkernet/topology.hpp"

namespace walkernet {

inline int effective_threads(int requested, int jobs) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  int t = requested > 0 ? requested : hw;
  if (t > jobs) t = jobs;
  return t < 1 ? 1 : t;
}

// Run fn(0..jobs-1) on a small worker pool. Workers pull indices from a
// shared counter; the first exception wins and is rethrown on the caller.
template <typename Fn>
void parallel_for(int jobs, int threads, Fn&& fn) {
  threads = effective_threads(threads, jobs);
  if (threads <= 1) {
    for (int i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= jobs) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// One topology draw: the constellation propagated by a random interval,
// stations carried along with Earth's rotation if enabled. Rotations are
// numbered from 1; each gets its own random substream, so any rotation can
// be reproduced in isolation.
struct RotationContext {
  int rotation = 0;
  double dt_s = 0.0;
  Constellation constellation;
  std::vector<GroundStation> stations;
};

inline RotationContext make_rotation(const AppConfig& config, const Constellation& base,
                                     const std::vector<GroundStation>& stations, int rotation) {
  std::mt19937_64 rng = substream(config.experiment.seed, rotation, Stream::kRotation);
  std::uniform_real_distribution<double> dt(config.experiment.dt_min_s,
                                            config.experiment.dt_max_s);
  RotationContext ctx;
  ctx.rotation = rotation;
  ctx.dt_s = dt(rng);
  ctx.constellation = propagate(base, ctx.dt_s);
  ctx.stations = config.experiment.rotate_ground_stations
                     ? rotate_ground_stations(stations, ctx.dt_s)
                     : stations;
  return ctx;
}

inline TopologyOptions topology_options(const ExperimentSettings& experiment) {
  TopologyOptions options;
  options.enable_seam_links = experiment.enable_seam_links;
  options.occlusion_margin_km = experiment.occlusion_margin_km;
  return options;
}

struct RotationFailure {
  int rotation = 0;
  std::string reason;
};

// ---------------------------------------------------------------------------
// Capacity study: max-load estimate per (rotation, bandwidth, metric).

struct CapacitySample {
  int rotation = 0;
  double dt_s = 0.0;
  Metric metric = Metric::kPathlossSimplified;
  double bandwidth_mhz = 0.0;
  double lambda_max_bps = 0.0;
};

struct CapacityStudy {
  std::vector<CapacitySample> samples;  // rotation-major, then bandwidth, then metric
  std::vector<RotationFailure> failures;
  int rotations = 0;

  std::vector<double> lambda_samples(Metric metric, double bandwidth_mhz) const {
    std::vector<double> out;
    for (const CapacitySample& s : samples)
      if (s.metric == metric && s.bandwidth_mhz == bandwidth_mhz)
        out.push_back(s.lambda_max_bps);
    return out;
  }
};

// A rotation that fails (an unreachable station pair, or no loaded ISL)
// is dropped whole, so every surviving rotation contributes a full
// bandwidth-by-metric block and cross-metric comparisons stay paired.
inline CapacityStudy run_capacity_study(const AppConfig& config,
                                        const std::vector<GroundStation>& stations) {
  config.validate();
  const ExperimentSettings& experiment = config.experiment;
  Constellation base = build_constellation(config.constellation);
  TopologyOptions options = topology_options(experiment);

  struct Slot {
    std::vector<CapacitySample> samples;
    std::optional<std::string> failure;
  };
  std::vector<Slot> slots(experiment.rotations);

  parallel_for(experiment.rotations, experiment.threads, [&](int idx) {
    int rotation = idx + 1;
    Slot& slot = slots[idx];
    try {
      RotationContext ctx = make_rotation(config, base, stations, rotation);
      for (double bw : experiment.bandwidths_mhz) {
        LinkBudgetParams params = config.link;
        params.bandwidth_hz = bw * 1e6;
        TopologySnapshot snap = build_topology(ctx.constellation, ctx.stations, params, options);
        for (std::size_t mi = 0; mi < experiment.metrics.size(); ++mi) {
          MetricSpec spec;
          spec.kind = experiment.metrics[mi];
          spec.packet_bits = config.traffic.packet_bits;
          std::mt19937_64 tie = substream(experiment.seed, rotation, Stream::kTieBreak, mi);
          PathCensus counts = census(snap, spec, tie);
          slot.samples.push_back({rotation, ctx.dt_s, spec.kind, bw, lambda_max(counts, snap)});
        }
      }
    } catch (const std::exception& err) {
      slot.samples.clear();
      slot.failure = err.what();
    }
  });

  CapacityStudy study;
  study.rotations = experiment.rotations;
  for (int idx = 0; idx < experiment.rotations; ++idx) {
    Slot& slot = slots[idx];
    if (slot.failure) {
      study.failures.push_back({idx + 1, *slot.failure});
      continue;
    }
    study.samples.insert(study.samples.end(), slot.samples.begin(), slot.samples.end());
  }
  return study;
}

// ---------------------------------------------------------------------------
// Latency study: packet-level simulation per rotation, one burst trace
// shared by all metrics (common random numbers), samples pooled over
// rotations per metric.

struct MetricLatencyAggregate {
  Metric metric = Metric::kPathlossSimplified;
  long packets = 0;
  double mean_waiting_s = 0.0;
  double mean_transmission_s = 0.0;
  double mean_propagation_s = 0.0;
  double mean_latency_s = 0.0;
  std::vector<double> latencies_s;
  std::vector<double> hop_waits_s;

  Cdf latency_cdf() const { return Cdf::from_samples(latencies_s); }
  Cdf hop_wait_cdf() const { return Cdf::from_samples(hop_waits_s); }
};

struct LatencyStudy {
  std::vector<MetricLatencyAggregate> per_metric;  // in configured metric order
  std::vector<RotationFailure> failures;
  int rotations = 0;
  double bandwidth_mhz = 0.0;

  const MetricLatencyAggregate& aggregate(Metric metric) const {
    for (const MetricLatencyAggregate& agg : per_metric)
      if (agg.metric == metric) return agg;
    throw ConfigError("latency study does not include metric " +
                      std::string(metric_name(metric)));
  }
};

// The latency study runs at a single bandwidth: the first entry of the
// configured list.
inline LatencyStudy run_latency_study(const AppConfig& config,
                                      const std::vector<GroundStation>& stations) {
  config.validate();
  const ExperimentSettings& experiment = config.experiment;
  Constellation base = build_constellation(config.constellation);
  TopologyOptions options = topology_options(experiment);
  LinkBudgetParams params = config.link;
  params.bandwidth_hz = experiment.bandwidths_mhz.front() * 1e6;

  struct MetricPool {
    long packets = 0;
    double waiting_sum = 0.0;
    double transmission_sum = 0.0;
    double propagation_sum = 0.0;
    std::vector<double> latencies_s;
    std::vector<double> hop_waits_s;
  };
  struct Slot {
    std::vector<MetricPool> per_metric;
    std::optional<std::string> failure;
  };
  std::vector<Slot> slots(experiment.rotations);

  parallel_for(experiment.rotations, experiment.threads, [&](int idx) {
    int rotation = idx + 1;
    Slot& slot = slots[idx];
    try {
      RotationContext ctx = make_rotation(config, base, stations, rotation);
      TopologySnapshot snap = build_topology(ctx.constellation, ctx.stations, params, options);
      std::mt19937_64 traffic_rng = substream(experiment.seed, rotation, Stream::kTraffic);
      std::vector<BurstEvent> trace =
          generate_traffic(snap.num_stations(), config.traffic, traffic_rng);
      slot.per_metric.resize(experiment.metrics.size());
      for (std::size_t mi = 0; mi < experiment.metrics.size(); ++mi) {
        MetricSpec spec;
        spec.kind = experiment.metrics[mi];
        spec.packet_bits = config.traffic.packet_bits;
        std::mt19937_64 tie = substream(experiment.seed, rotation, Stream::kTieBreak, mi);
        RunResult run = run_snapshot(snap, spec, config.traffic, trace, tie);
        if (run.records.empty())
          throw StatsError("no packets completed inside the measurement window");
        MetricPool& pool = slot.per_metric[mi];
        pool.packets += static_cast<long>(run.records.size());
        for (const PacketRecord& rec : run.records) {
          pool.waiting_sum += rec.waiting_s;
          pool.transmission_sum += rec.transmission_s;
          pool.propagation_sum += rec.propagation_s;
          pool.latencies_s.push_back(rec.latency_s);
        }
        pool.hop_waits_s.insert(pool.hop_waits_s.end(), run.hop_waits_s.begin(),
                                run.hop_waits_s.end());
      }
    } catch (const std::exception& err) {
      slot.per_metric.clear();
      slot.failure = err.what();
    }
  });

  LatencyStudy study;
  study.rotations = experiment.rotations;
  study.bandwidth_mhz = experiment.bandwidths_mhz.front();
  study.per_metric.resize(experiment.metrics.size());
  for (std::size_t mi = 0; mi < experiment.metrics.size(); ++mi)
    study.per_metric[mi].metric = experiment.metrics[mi];
  for (int idx = 0; idx < experiment.rotations; ++idx) {
    Slot& slot = slots[idx];
    if (slot.failure) {
      study.failures.push_back({idx + 1, *slot.failure});
      continue;
    }
    for (std::size_t mi = 0; mi < experiment.metrics.size(); ++mi) {
      MetricPool& pool = slot.per_metric[mi];
      MetricLatencyAggregate& agg = study.per_metric[mi];
      agg.packets += pool.packets;
      agg.mean_waiting_s += pool.waiting_sum;
      agg.mean_transmission_s += pool.transmission_sum;
      agg.mean_propagation_s += pool.propagation_sum;
      agg.latencies_s.insert(agg.latencies_s.end(), pool.latencies_s.begin(),
                             pool.latencies_s.end());
      agg.hop_waits_s.insert(agg.hop_waits_s.end(), pool.hop_waits_s.begin(),
                             pool.hop_waits_s.end());
    }
  }
  for (MetricLatencyAggregate& agg : study.per_metric) {
    if (agg.packets == 0)
      throw StatsError("latency study: every rotation failed (" +
                       std::to_string(study.failures.size()) + " failures)");
    double n = static_cast<double>(agg.packets);
    agg.mean_waiting_s /= n;
    agg.mean_transmission_s /= n;
    agg.mean_propagation_s /= n;
    agg.mean_latency_s = agg.mean_waiting_s + agg.mean_transmission_s + agg.mean_propagation_s;
  }
  return study;
}

// ---------------------------------------------------------------------------
// Output files.

inline void write_capacity_csv(const CapacityStudy& study, std::uint64_t seed,
                               std::ostream& os) {
  os << "rotation,seed,delta_t_s,metric,bandwidth_mhz,lambda_max_bps\n";
  char buf[192];
  for (const CapacitySample& s : study.samples) {
    std::snprintf(buf, sizeof buf, "%d,%llu,%.3f,%s,%g,%.3f\n", s.rotation,
                  static_cast<unsigned long long>(seed), s.dt_s, metric_name(s.metric),
                  s.bandwidth_mhz, s.lambda_max_bps);
    os << buf;
  }
}

namespace detail {

// Column names of the CDF tables (file format, distinct from the CLI
// metric names).
inline const char* cdf_column_name(Metric m) {
  switch (m) {
    case Metric::kHopCount: return "hopcount";
    case Metric::kLatency: return "latency";
    case Metric::kPathlossFull: return "pathloss_full";
    case Metric::kPathlossSimplified: return "pathloss";
  }
  return "unknown";
}

// Shared x-grid for CDF tables: per-thousand quantiles of every metric's
// sample pool, merged. At each x the table holds the exact empirical F of
// every metric, so curves can be compared row by row.
inline std::vector<double> merged_quantile_grid(const std::vector<Cdf>& cdfs) {
  std::vector<double> grid;
  for (const Cdf& cdf : cdfs) {
    grid.push_back(cdf.samples.front());
    for (int k = 1; k <= 1000; ++k) grid.push_back(cdf.quantile(k / 1000.0));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

inline void write_cdf_table(const std::vector<Cdf>& cdfs, const std::vector<Metric>& metrics,
                            std::ostream& os) {
  os << "value_ms";
  for (Metric m : metrics) os << ",F_" << cdf_column_name(m);
  os << "\n";
  char buf[64];
  for (double x : merged_quantile_grid(cdfs)) {
    std::snprintf(buf, sizeof buf, "%.9f", x * 1e3);
    os << buf;
    for (const Cdf& cdf : cdfs) {
      std::snprintf(buf, sizeof buf, ",%.6f", cdf.fraction_at_or_below(x));
      os << buf;
    }
    os << "\n";
  }
}

}  // namespace detail

inline void write_latency_cdf_csv(const LatencyStudy& study, std::ostream& os) {
  std::vector<Cdf> cdfs;
  std::vector<Metric> metrics;
  for (const MetricLatencyAggregate& agg : study.per_metric) {
    cdfs.push_back(agg.latency_cdf());
    metrics.push_back(agg.metric);
  }
  detail::write_cdf_table(cdfs, metrics, os);
}

inline void write_hop_wait_cdf_csv(const LatencyStudy& study, std::ostream& os) {
  std::vector<Cdf> cdfs;
  std::vector<Metric> metrics;
  for (const MetricLatencyAggregate& agg : study.per_metric) {
    cdfs.push_back(agg.hop_wait_cdf());
    metrics.push_back(agg.metric);
  }
  detail::write_cdf_table(cdfs, metrics, os);
}

inline void write_latency_breakdown_csv(const LatencyStudy& study, std::ostream& os) {
  os << "metric,packets,mean_waiting_ms,mean_transmission_ms,mean_propagation_ms,"
        "mean_latency_ms,p50_ms,p90_ms,p99_ms\n";
  char buf[256];
  for (const MetricLatencyAggregate& agg : study.per_metric) {
    Cdf cdf = agg.latency_cdf();
    std::snprintf(buf, sizeof buf, "%s,%ld,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                  metric_name(agg.metric), agg.packets, agg.mean_waiting_s * 1e3,
                  agg.mean_transmission_s * 1e3, agg.mean_propagation_s * 1e3,
                  agg.mean_latency_s * 1e3, cdf.quantile(0.50) * 1e3, cdf.quantile(0.90) * 1e3,
                  cdf.quantile(0.99) * 1e3);
    os << buf;
  }
}

// The manifest doubles as a config file: feeding it back reproduces the run.
inline void write_manifest(const AppConfig& config, const std::string& verb,
                           std::size_t station_count, std::size_t failure_count,
                           std::ostream& os) {
  const ConstellationConfig& c = config.constellation;
  const LinkBudgetParams& l = config.link;
  const TrafficConfig& t = config.traffic;
  const ExperimentSettings& e = config.experiment;
  os << "# walkernet run manifest (valid config file)\n";
  os << "# verb = " << verb << "\n";
  os << "# stations = " << station_count << "\n";
  os << "# failed rotations = " << failure_count << "\n\n";
  os << "[constellation]\n";
  os << "planes = " << c.num_planes << "\n";
  os << "sats_per_plane = " << c.sats_per_plane << "\n";
  os << "base_altitude_km = " << c.base_altitude_km << "\n";
  os << "altitude_step_km = " << c.altitude_step_km << "\n";
  os << "earth_radius_km = " << c.earth_radius_km << "\n\n";
  os << "[link]\n";
  os << "carrier_ghz = " << l.carrier_frequency_hz / 1e9 << "\n";
  os << "eirp_dbw_per_mhz = " << l.eirp_density_dbw_mhz << "\n";
  os << "tx_gain_db = " << l.tx_gain_db << "\n";
  os << "rx_gain_db = " << l.rx_gain_db << "\n";
  os << "bandwidth_mhz = ";
  for (std::size_t i = 0; i < e.bandwidths_mhz.size(); ++i)
    os << (i ? ", " : "") << e.bandwidths_mhz[i];
  os << "\n";
  os << "noise_temp_k = " << l.noise_temp_k << "\n";
  os << "snr_margin_db = " << l.snr_margin_db << "\n\n";
  os << "[traffic]\n";
  os << "arrival_mbps = " << t.arrival_bps / 1e6 << "\n";
  os << "packet_mbit = " << t.packet_bits / 1e6 << "\n";
  os << "burst_max_packets = " << t.burst_max_packets << "\n";
  os << "t_sim_s = " << t.t_sim_s << "\n";
  os << "warmup_s = " << t.warmup_s << "\n\n";
  os << "[experiment]\n";
  os << "rotations = " << e.rotations << "\n";
  os << "dt_min_s = " << e.dt_min_s << "\n";
  os << "dt_max_s = " << e.dt_max_s << "\n";
  os << "seed = " << e.seed << "\n";
  os << "metrics = ";
  for (std::size_t i = 0; i < e.metrics.size(); ++i)
    os << (i ? ", " : "") << metric_name(e.metrics[i]);
  os << "\n";
  if (!e.gs_file.empty()) os << "gs_file = " << e.gs_file << "\n";
  os << "out_dir = " << e.out_dir << "\n";
  os << "rotate_ground_stations = " << (e.rotate_ground_stations ? "true" : "false") << "\n";
  os << "enable_seam_links = " << (e.enable_seam_links ? "true" : "false") << "\n";
  os << "occlusion_margin_km = " << e.occlusion_margin_km << "\n";
  os << "threads = " << e.threads << "\n";
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write output file: " + path.string());
  return os;
}

}  // namespace detail

inline std::vector<std::filesystem::path> save_capacity_study(
    const CapacityStudy& study, const AppConfig& config, std::size_t station_count) {
  std::filesystem::path dir(config.experiment.out_dir);
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  {
    auto os = detail::open_output(dir / "capacity_samples.csv");
    write_capacity_csv(study, config.experiment.seed, os);
    written.push_back(dir / "capacity_samples.csv");
  }
  {
    auto os = detail::open_output(dir / "manifest.txt");
    write_manifest(config, "capacity", station_count, study.failures.size(), os);
    written.push_back(dir / "manifest.txt");
  }
  return written;
}

inline std::vector<std::filesystem::path> save_latency_study(
    const LatencyStudy& study, const AppConfig& config, std::size_t station_count) {
  std::filesystem::path dir(config.experiment.out_dir);
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  {
    auto os = detail::open_output(dir / "latency_cdf.csv");
    write_latency_cdf_csv(study, os);
    written.push_back(dir / "latency_cdf.csv");
  }
  {
    auto os = detail::open_output(dir / "hop_wait_cdf.csv");
    write_hop_wait_cdf_csv(study, os);
    written.push_back(dir / "hop_wait_cdf.csv");
  }
  {
    auto os = detail::open_output(dir / "latency_breakdown.csv");
    write_latency_breakdown_csv(study, os);
    written.push_back(dir / "latency_breakdown.csv");
  }
  {
    auto os = detail::open_output(dir / "manifest.txt");
    write_manifest(config, "latency", station_count, study.failures.size(), os);
    written.push_back(dir / "manifest.txt");
  }
  return written;
}

}  // namespace walkernet
