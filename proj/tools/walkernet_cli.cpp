// Command line front end: capacity and latency studies, topology snapshots,
// and a self-check battery, all driven by one config file plus overrides.

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "walkernet/walkernet.hpp"

namespace {

using namespace walkernet;

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int run_capacity(const AppConfig& config, const std::vector<GroundStation>& stations) {
  CapacityStudy study = run_capacity_study(config, stations);
  if (study.samples.empty()) {
    std::fprintf(stderr, "error: every rotation failed (%zu failures)\n",
                 study.failures.size());
    return 1;
  }
  std::printf("capacity study: %d rotations, %zu failed\n", study.rotations,
              study.failures.size());
  for (double bw : config.experiment.bandwidths_mhz) {
    for (Metric metric : config.experiment.metrics) {
      std::vector<double> samples = study.lambda_samples(metric, bw);
      if (samples.empty()) continue;
      double min = *std::min_element(samples.begin(), samples.end());
      std::printf("  %4g MHz  %-13s  n=%zu  min=%8.2f Mbps  median=%8.2f Mbps\n", bw,
                  metric_name(metric), samples.size(), min / 1e6,
                  median_of(samples) / 1e6);
    }
  }
  for (const auto& path : save_capacity_study(study, config, stations.size()))
    std::printf("wrote %s\n", path.c_str());
  return 0;
}

int run_latency(const AppConfig& config, const std::vector<GroundStation>& stations,
                bool dump_records) {
  LatencyStudy study = run_latency_study(config, stations);
  std::printf("latency study: %d rotations (%zu failed), %g MHz\n", study.rotations,
              study.failures.size(), study.bandwidth_mhz);
  for (const MetricLatencyAggregate& agg : study.per_metric) {
    Cdf cdf = agg.latency_cdf();
    std::printf("  %-13s  packets=%ld  mean=%7.2f ms  p50=%7.2f ms  p90=%7.2f ms\n",
                metric_name(agg.metric), agg.packets, agg.mean_latency_s * 1e3,
                cdf.quantile(0.5) * 1e3, cdf.quantile(0.9) * 1e3);
  }
  for (const auto& path : save_latency_study(study, config, stations.size()))
    std::printf("wrote %s\n", path.c_str());
  if (dump_records) {
    // Re-run the first rotation under the first metric and keep its packets.
    Constellation base = build_constellation(config.constellation);
    RotationContext ctx = make_rotation(config, base, stations, 1);
    LinkBudgetParams params = config.link;
    params.bandwidth_hz = config.experiment.bandwidths_mhz.front() * 1e6;
    TopologySnapshot snap = build_topology(ctx.constellation, ctx.stations, params,
                                           topology_options(config.experiment));
    std::mt19937_64 traffic_rng = substream(config.experiment.seed, 1, Stream::kTraffic);
    std::vector<BurstEvent> trace =
        generate_traffic(snap.num_stations(), config.traffic, traffic_rng);
    MetricSpec spec;
    spec.kind = config.experiment.metrics.front();
    spec.packet_bits = config.traffic.packet_bits;
    std::mt19937_64 tie = substream(config.experiment.seed, 1, Stream::kTieBreak, 0);
    RunResult run = run_snapshot(snap, spec, config.traffic, std::move(trace), tie);
    std::filesystem::path path =
        std::filesystem::path(config.experiment.out_dir) / "records_rotation1.csv";
    std::ofstream os(path);
    if (!os) {
      std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
      return 1;
    }
    write_records_csv(run, os);
    std::printf("wrote %s\n", path.c_str());
  }
  return 0;
}

int run_snapshot(const AppConfig& config, const std::vector<GroundStation>& base,
                 double dt_s, bool out_set) {
  Constellation constellation = propagate(build_constellation(config.constellation), dt_s);
  std::vector<GroundStation> stations =
      config.experiment.rotate_ground_stations ? rotate_ground_stations(base, dt_s) : base;
  LinkBudgetParams params = config.link;
  params.bandwidth_hz = config.experiment.bandwidths_mhz.front() * 1e6;
  TopologySnapshot snap = build_topology(constellation, stations, params,
                                         topology_options(config.experiment));
  int intra = 0, inter = 0, gsl = 0;
  for (const Edge& e : snap.edges) {
    if (e.kind == EdgeKind::kIntraIsl) ++intra;
    else if (e.kind == EdgeKind::kInterIsl) ++inter;
    else ++gsl;
  }
  std::fprintf(stderr, "snapshot at dt=%.1f s: %d satellites, %d stations, %d intra + %d inter + %d gsl edges\n",
               dt_s, snap.num_sats(), snap.num_stations(), intra, inter, gsl);
  if (out_set) {
    std::filesystem::path dir(config.experiment.out_dir);
    std::filesystem::create_directories(dir);
    std::ofstream os(dir / "snapshot_edges.csv");
    if (!os) {
      std::fprintf(stderr, "error: cannot write %s\n", (dir / "snapshot_edges.csv").c_str());
      return 1;
    }
    write_edge_table(snap, os);
    std::printf("wrote %s\n", (dir / "snapshot_edges.csv").c_str());
  } else {
    write_edge_table(snap, std::cout);
  }
  return 0;
}

int run_validate(const AppConfig& config, const std::vector<GroundStation>& stations) {
  int failures = 0;
  auto check = [&](const char* name, auto&& fn) {
    try {
      fn();
      std::printf("ok:   %s\n", name);
    } catch (const std::exception& err) {
      std::printf("FAIL: %s: %s\n", name, err.what());
      ++failures;
    }
  };
  auto expect = [](bool cond, const std::string& what) {
    if (!cond) throw std::runtime_error(what);
  };

  Constellation constellation = build_constellation(config.constellation);
  LinkBudgetParams params = config.link;
  params.bandwidth_hz = config.experiment.bandwidths_mhz.front() * 1e6;
  TopologySnapshot snap = build_topology(constellation, stations, params,
                                         topology_options(config.experiment));

  check("ring geometry: even in-plane spacing", [&] {
    const ConstellationConfig& c = config.constellation;
    for (int a = 0; a < c.num_planes; ++a) {
      double expected = 2.0 * c.plane_radius_km(a) *
                        std::sin(constants::kPi / c.sats_per_plane);
      for (int s = 0; s < c.sats_per_plane; ++s) {
        int i = constellation.sat_id(a, s);
        int j = constellation.sat_id(a, (s + 1) % c.sats_per_plane);
        double d = distance_km(satellite_position(constellation, i),
                               satellite_position(constellation, j));
        expect(std::abs(d - expected) < 1e-6 * expected,
               "plane " + std::to_string(a) + " spacing " + std::to_string(d) + " vs " +
                   std::to_string(expected));
      }
    }
  });

  check("orbits: one period closes the loop", [&] {
    double period = constants::kTwoPi / constellation.planes[0].angular_rate;
    Constellation later = propagate(constellation, period);
    Vec3 before = satellite_position(constellation, 0);
    Vec3 after = satellite_position(later, 0);
    expect(distance_km(before, after) < 1e-6, "plane 0 drifted after one period");
  });

  check("topology: one ring edge per satellite per plane", [&] {
    int intra = 0;
    for (const Edge& e : snap.edges)
      if (e.kind == EdgeKind::kIntraIsl) ++intra;
    expect(intra == constellation.num_sats(), std::to_string(intra) + " ring edges");
  });

  check("topology: inter-plane edges are mutual nearest with clear line of sight", [&] {
    for (const Edge& e : snap.edges) {
      if (e.kind != EdgeKind::kInterIsl) continue;
      expect(inter_plane_neighbor(constellation, e.a, e.plane_b) == e.b &&
                 inter_plane_neighbor(constellation, e.b, e.plane_a) == e.a,
             snap.vertex_label(e.a) + "-" + snap.vertex_label(e.b) + " not mutual nearest");
      double d = slant_range(satellite_position(constellation, e.a),
                             satellite_position(constellation, e.b),
                             config.constellation.earth_radius_km,
                             config.experiment.occlusion_margin_km);
      expect(!is_unreachable(d), snap.vertex_label(e.a) + "-" + snap.vertex_label(e.b) +
                                     " is occluded");
    }
  });

  check("topology: every station has exactly one uplink to its closest satellite", [&] {
    std::vector<int> degree(stations.size(), 0);
    for (const Edge& e : snap.edges)
      if (e.kind == EdgeKind::kGsl) ++degree[snap.gs_index(e.b)];
    for (std::size_t g = 0; g < stations.size(); ++g) {
      expect(degree[g] == 1, stations[g].name + " has " + std::to_string(degree[g]) +
                                 " uplinks");
      expect(snap.stations[g].gsl_sat == closest_satellite(constellation, stations[g]),
             stations[g].name + " not linked to its closest satellite");
    }
  });

  check("link budget: ISL rates positive, uplinks unconstrained", [&] {
    for (const Edge& e : snap.edges) {
      if (e.kind == EdgeKind::kGsl) {
        expect(std::isinf(e.rate_bps), "GSL with a finite rate");
      } else {
        expect(e.rate_bps > 0.0 && std::isfinite(e.rate_bps), "ISL with non-positive rate");
        double again = data_rate_bps(params, e.length_km);
        expect(std::abs(again - e.rate_bps) <= 1e-9 * e.rate_bps, "rate mismatch on rebuild");
      }
    }
  });

  check("routing: all station pairs reachable under every metric", [&] {
    for (std::size_t mi = 0; mi < config.experiment.metrics.size(); ++mi) {
      MetricSpec spec;
      spec.kind = config.experiment.metrics[mi];
      spec.packet_bits = config.traffic.packet_bits;
      std::mt19937_64 tie = substream(config.experiment.seed, 0, Stream::kTieBreak, mi);
      PathCensus counts = census(snap, spec, tie);
      long edge_total = 0;
      for (long c : counts.edge_path_count) edge_total += c;
      expect(edge_total == counts.total_path_edges(), "path census does not balance");
      double lambda = lambda_max(counts, snap);
      expect(lambda > 0.0 && std::isfinite(lambda), "lambda_max not positive");
    }
  });

  check("simulation: drains, conserves components, reproduces bit-identically", [&] {
    TrafficConfig traffic = config.traffic;
    traffic.t_sim_s = std::min(traffic.t_sim_s, 5.0);
    traffic.warmup_s = std::min(traffic.warmup_s, 0.5);
    MetricSpec spec;
    spec.kind = config.experiment.metrics.front();
    spec.packet_bits = traffic.packet_bits;
    RunResult a = run_snapshot(snap, spec, traffic, config.experiment.seed);
    RunResult b = run_snapshot(snap, spec, traffic, config.experiment.seed);
    expect(a.completed_packets == a.generated_packets, "packets left in the network");
    expect(!a.records.empty(), "no packets inside the measurement window");
    for (const PacketRecord& r : a.records)
      expect(r.latency_s == r.waiting_s + r.transmission_s + r.propagation_s,
             "latency != waiting + transmission + propagation");
    expect(a.records.size() == b.records.size(), "record count differs between reruns");
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      const PacketRecord& x = a.records[i];
      const PacketRecord& y = b.records[i];
      expect(x.burst_id == y.burst_id && x.packet_index == y.packet_index &&
                 x.latency_s == y.latency_s && x.waiting_s == y.waiting_s,
             "records differ between reruns");
    }
  });

  if (failures == 0) {
    std::printf("all checks passed\n");
    return 0;
  }
  std::printf("%d check(s) failed\n", failures);
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"routing studies on a Walker star constellation with adaptive multirate ISLs"};
  app.require_subcommand(1);

  std::string config_path, gs_file, out_dir;
  std::uint64_t seed = 0;
  int rotations = 0, threads = -1;
  std::vector<double> bandwidths;
  std::vector<std::string> metric_args;
  auto* opt_config = app.add_option("--config", config_path, "config file (sectioned key = value)");
  auto* opt_seed = app.add_option("--seed", seed, "master RNG seed");
  auto* opt_rotations = app.add_option("--rotations", rotations, "number of topology rotations");
  auto* opt_metric =
      app.add_option("--metric", metric_args, "routing metric(s): hop, latency, pathloss, pathloss-full")
          ->delimiter(',');
  auto* opt_bandwidth =
      app.add_option("--bandwidth-mhz", bandwidths, "ISL bandwidth(s) in MHz")->delimiter(',');
  auto* opt_out = app.add_option("--out", out_dir, "output directory");
  auto* opt_gs = app.add_option("--gs-file", gs_file, "ground station table (name, lat, lon)");
  auto* opt_threads = app.add_option("--threads", threads, "worker threads (0 = all cores)");

  auto* cmd_capacity =
      app.add_subcommand("capacity", "max supported per-station load across rotations");
  auto* cmd_latency =
      app.add_subcommand("latency", "packet latency distributions across rotations");
  auto* cmd_snapshot = app.add_subcommand("snapshot", "dump one topology edge table as CSV");
  auto* cmd_validate = app.add_subcommand("validate", "build everything once and self-check");
  double snapshot_dt = 0.0;
  cmd_snapshot->add_option("--dt", snapshot_dt, "seconds to propagate before the dump");
  bool dump_records = false;
  cmd_latency->add_flag("--dump-records", dump_records,
                        "also dump rotation 1's per-packet records as CSV");
  for (CLI::App* cmd : {cmd_capacity, cmd_latency, cmd_snapshot, cmd_validate})
    cmd->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    walkernet::AppConfig config;
    if (*opt_config) config = walkernet::load_config(config_path);
    if (*opt_seed) config.experiment.seed = seed;
    if (*opt_rotations) config.experiment.rotations = rotations;
    if (*opt_bandwidth) config.experiment.bandwidths_mhz = bandwidths;
    if (*opt_out) config.experiment.out_dir = out_dir;
    if (*opt_gs) config.experiment.gs_file = gs_file;
    if (*opt_threads) config.experiment.threads = threads;
    if (*opt_metric) {
      config.experiment.metrics.clear();
      for (const std::string& name : metric_args)
        config.experiment.metrics.push_back(walkernet::parse_metric(name));
    }
    config.validate();
    std::vector<walkernet::GroundStation> stations =
        walkernet::resolve_ground_stations(config.experiment);

    if (cmd_capacity->parsed()) return run_capacity(config, stations);
    if (cmd_latency->parsed()) return run_latency(config, stations, dump_records);
    if (cmd_snapshot->parsed())
      return run_snapshot(config, stations, snapshot_dt, static_cast<bool>(*opt_out));
    return run_validate(config, stations);
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
}
