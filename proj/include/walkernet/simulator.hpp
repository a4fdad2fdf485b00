#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <map>
#include <optional>
#include <ostream>
#include <queue>
#include <random>
#include <utility>
#include <vector>

#include "walkernet/capacity.hpp"
#include "walkernet/core.hpp"
#include "walkernet/routing.hpp"
#include "walkernet/stats.hpp"

namespace walkernet {

struct TrafficConfig {
  double arrival_bps = 10e6;   // offered load per station, lambda = lambda_burst * n_mean * p
  double packet_bits = 1e6;
  int burst_max_packets = 20;  // burst length ~ U{0..max}; empty bursts are dropped
  double t_sim_s = 60.0;
  double warmup_s = 6.0;

  double mean_burst_packets() const { return burst_max_packets / 2.0; }
  double burst_rate_hz() const {
    return arrival_bps / (mean_burst_packets() * packet_bits);
  }

  void validate() const {
    if (arrival_bps <= 0.0) throw ConfigError("traffic: arrival rate must be > 0");
    if (packet_bits <= 0.0) throw ConfigError("traffic: packet size must be > 0");
    if (burst_max_packets < 1) throw ConfigError("traffic: burst_max_packets must be >= 1");
    if (t_sim_s < 0.0) throw ConfigError("traffic: t_sim must be >= 0");
    if (warmup_s < 0.0 || warmup_s > t_sim_s)
      throw ConfigError("traffic: warmup must be in [0, t_sim]");
  }
};

struct BurstEvent {
  int id = -1;
  int src_gs = -1;
  int dst_gs = -1;
  double time_s = 0.0;
  int packet_count = 0;
  RoutePath path;  // frozen for the burst; assigned when the run injects it
};

struct PacketRecord {
  int burst_id = -1;
  int packet_index = 0;  // 1-based within the burst
  int src_gs = -1;
  int dst_gs = -1;
  int hop_count = 0;     // path edges traversed, GSLs included
  double waiting_s = 0.0;
  double transmission_s = 0.0;
  double propagation_s = 0.0;
  double latency_s = 0.0;  // always the exact sum of the three components
};

// Time-ordered burst trace: independent Poisson arrivals per station,
// uniform burst sizes, uniform destinations among the other stations.
inline std::vector<BurstEvent> generate_traffic(int n_gs, const TrafficConfig& cfg,
                                                std::mt19937_64& rng) {
  cfg.validate();
  if (n_gs < 2) throw ConfigError("generate_traffic: need at least 2 ground stations");
  std::exponential_distribution<double> gap(cfg.burst_rate_hz());
  std::uniform_int_distribution<int> size(0, cfg.burst_max_packets);
  std::uniform_int_distribution<int> other(0, n_gs - 2);
  std::vector<BurstEvent> trace;
  for (int src = 0; src < n_gs; ++src) {
    for (double t = gap(rng); t < cfg.t_sim_s; t += gap(rng)) {
      int n = size(rng);
      if (n == 0) continue;
      BurstEvent b;
      b.src_gs = src;
      b.dst_gs = other(rng);
      if (b.dst_gs >= src) ++b.dst_gs;
      b.time_s = t;
      b.packet_count = n;
      trace.push_back(b);
    }
  }
  std::stable_sort(trace.begin(), trace.end(), [](const BurstEvent& x, const BurstEvent& y) {
    if (x.time_s != y.time_s) return x.time_s < y.time_s;
    return x.src_gs < y.src_gs;
  });
  for (std::size_t i = 0; i < trace.size(); ++i) trace[i].id = static_cast<int>(i);
  return trace;
}

struct SimOptions {
  // Queue backlog sampling for stability analysis; 0 disables it.
  double backlog_sample_interval_s = 0.0;
};

struct BacklogTrace {
  std::vector<double> times_s;
  // bits waiting per directed ISL server (2*edge_id + direction), one row per edge
  std::vector<std::vector<double>> bits;
};

struct RunResult {
  std::vector<PacketRecord> records;  // packets completed in (warmup, t_sim)
  std::vector<double> hop_waits_s;    // per-ISL-hop waiting samples of recorded packets
  long generated_packets = 0;
  long completed_packets = 0;
  BacklogTrace backlog;
};

namespace detail {

struct SimPacket {
  int burst_id = -1;
  int packet_index = 0;
  int src_gs = -1;
  int dst_gs = -1;
  const RoutePath* path = nullptr;
  int hop = 0;
  double t_gen = 0.0;
  double waiting_s = 0.0;
  double transmission_s = 0.0;
  double propagation_s = 0.0;
  std::vector<double> hop_waits;
};

struct SimEvent {
  double t = 0.0;
  std::uint64_t seq = 0;
  int kind = 0;  // 0 = packet ready to cross path edge `hop`, 1 = server done
  int id = 0;    // packet id or directed server id

  bool operator>(const SimEvent& o) const {
    if (t != o.t) return t > o.t;
    return seq > o.seq;
  }
};

struct DirectedServer {
  std::deque<std::pair<int, double>> queue;  // (packet id, enqueue time)
  bool busy = false;
  int serving = -1;
};

}  // namespace detail

// Event-driven run of one burst trace through a static snapshot. Every
// direction of an ISL is a FIFO queue with a single server at the link rate;
// GSL hops are pure propagation delays. Paths are frozen per burst: computed
// fresh (with random tie-breaking) per burst under hop count, cached per
// station pair under the deterministic metrics.
inline RunResult run_snapshot(const TopologySnapshot& snap, const MetricSpec& spec,
                              const TrafficConfig& cfg, std::vector<BurstEvent> trace,
                              std::mt19937_64& tie_rng, const SimOptions& options = {}) {
  cfg.validate();
  const double prop_factor = 1e3 / constants::kSpeedOfLight;

  // Freeze a path per burst.
  std::map<std::pair<int, int>, RoutePath> cache;
  for (BurstEvent& burst : trace) {
    int u = snap.gs_vertex(burst.src_gs);
    int v = snap.gs_vertex(burst.dst_gs);
    if (spec.kind == Metric::kHopCount) {
      burst.path = shortest_path(snap, spec, u, v, tie_rng);
    } else {
      std::pair<int, int> key{std::min(u, v), std::max(u, v)};
      auto it = cache.find(key);
      if (it == cache.end())
        it = cache.emplace(key, shortest_path(snap, spec, key.first, key.second, tie_rng)).first;
      burst.path = (it->second.u == u) ? it->second : it->second.reversed();
    }
  }

  std::vector<detail::SimPacket> packets;
  std::priority_queue<detail::SimEvent, std::vector<detail::SimEvent>, std::greater<>> heap;
  std::uint64_t seq = 0;
  for (const BurstEvent& burst : trace) {
    for (int k = 1; k <= burst.packet_count; ++k) {
      detail::SimPacket pkt;
      pkt.burst_id = burst.id;
      pkt.packet_index = k;
      pkt.src_gs = burst.src_gs;
      pkt.dst_gs = burst.dst_gs;
      pkt.path = &burst.path;
      pkt.t_gen = burst.time_s;
      int pid = static_cast<int>(packets.size());
      packets.push_back(std::move(pkt));
      heap.push({burst.time_s, seq++, 0, pid});
    }
  }

  std::vector<detail::DirectedServer> servers(2 * snap.edges.size());
  std::vector<double> service_s(snap.edges.size(), 0.0);
  for (std::size_t e = 0; e < snap.edges.size(); ++e)
    if (snap.edges[e].kind != EdgeKind::kGsl)
      service_s[e] = cfg.packet_bits / snap.edges[e].rate_bps;

  RunResult result;
  result.generated_packets = static_cast<long>(packets.size());

  const bool sample_backlog = options.backlog_sample_interval_s > 0.0;
  double next_sample = 0.0;
  auto take_sample = [&](double upto) {
    while (sample_backlog && next_sample <= upto && next_sample <= cfg.t_sim_s) {
      result.backlog.times_s.push_back(next_sample);
      std::vector<double> row(servers.size(), 0.0);
      for (std::size_t s = 0; s < servers.size(); ++s)
        row[s] = static_cast<double>(servers[s].queue.size()) * cfg.packet_bits;
      result.backlog.bits.push_back(std::move(row));
      next_sample += options.backlog_sample_interval_s;
    }
  };

  auto start_service = [&](int sid, double now) {
    detail::DirectedServer& srv = servers[sid];
    auto [pid, t_enq] = srv.queue.front();
    srv.queue.pop_front();
    srv.busy = true;
    srv.serving = pid;
    detail::SimPacket& pkt = packets[pid];
    double wait = now - t_enq;
    pkt.waiting_s += wait;
    pkt.hop_waits.push_back(wait);
    heap.push({now + service_s[sid / 2], seq++, 1, sid});
  };

  auto finish = [&](int pid, double now) {
    detail::SimPacket& pkt = packets[pid];
    ++result.completed_packets;
    if (now <= cfg.warmup_s || now >= cfg.t_sim_s) return;
    PacketRecord rec;
    rec.burst_id = pkt.burst_id;
    rec.packet_index = pkt.packet_index;
    rec.src_gs = pkt.src_gs;
    rec.dst_gs = pkt.dst_gs;
    rec.hop_count = static_cast<int>(pkt.path->edges.size());
    rec.waiting_s = pkt.waiting_s;
    rec.transmission_s = pkt.transmission_s;
    rec.propagation_s = pkt.propagation_s;
    rec.latency_s = pkt.waiting_s + pkt.transmission_s + pkt.propagation_s;
    result.records.push_back(rec);
    result.hop_waits_s.insert(result.hop_waits_s.end(), pkt.hop_waits.begin(),
                              pkt.hop_waits.end());
  };

  while (!heap.empty()) {
    detail::SimEvent ev = heap.top();
    heap.pop();
    take_sample(ev.t);
    if (ev.kind == 0) {
      detail::SimPacket& pkt = packets[ev.id];
      if (pkt.hop == static_cast<int>(pkt.path->edges.size())) {
        finish(ev.id, ev.t);
        continue;
      }
      const PathEdge& pe = pkt.path->edges[pkt.hop];
      if (pe.kind == EdgeKind::kGsl) {
        double prop = pe.length_km * prop_factor;
        pkt.propagation_s += prop;
        ++pkt.hop;
        heap.push({ev.t + prop, seq++, 0, ev.id});
      } else {
        int sid = 2 * pe.edge_id + (pe.from < pe.to ? 0 : 1);
        servers[sid].queue.emplace_back(ev.id, ev.t);
        if (!servers[sid].busy) start_service(sid, ev.t);
      }
    } else {
      detail::DirectedServer& srv = servers[ev.id];
      int pid = srv.serving;
      detail::SimPacket& pkt = packets[pid];
      const PathEdge& pe = pkt.path->edges[pkt.hop];
      double prop = pe.length_km * prop_factor;
      pkt.transmission_s += service_s[ev.id / 2];
      pkt.propagation_s += prop;
      ++pkt.hop;
      heap.push({ev.t + prop, seq++, 0, pid});
      srv.busy = false;
      srv.serving = -1;
      if (!srv.queue.empty()) start_service(ev.id, ev.t);
    }
  }
  take_sample(cfg.t_sim_s);
  return result;
}

// Spec'd entry point: derives the trace and tie-break stream from one seed.
inline RunResult run_snapshot(const TopologySnapshot& snap, const MetricSpec& spec,
                              const TrafficConfig& cfg, std::uint64_t seed,
                              const SimOptions& options = {}) {
  std::mt19937_64 traffic_rng = substream(seed, 0, Stream::kTraffic);
  std::mt19937_64 tie_rng =
      substream(seed, 0, Stream::kTieBreak, static_cast<std::uint64_t>(spec.kind));
  std::vector<BurstEvent> trace = generate_traffic(snap.num_stations(), cfg, traffic_rng);
  return run_snapshot(snap, spec, cfg, std::move(trace), tie_rng, options);
}

struct RunStats {
  std::size_t packet_count = 0;
  double mean_waiting_s = 0.0;
  double mean_transmission_s = 0.0;
  double mean_propagation_s = 0.0;
  double mean_latency_s = 0.0;
  Cdf latency;                   // end-to-end latency per packet
  std::optional<Cdf> hop_waits;  // waiting per ISL hop; absent if no ISL was crossed
};

inline RunStats collect_stats(const RunResult& result) {
  if (result.records.empty())
    throw StatsError("collect_stats: no packet records in the measurement window");
  RunStats stats;
  stats.packet_count = result.records.size();
  std::vector<double> latency;
  latency.reserve(result.records.size());
  for (const PacketRecord& r : result.records) {
    stats.mean_waiting_s += r.waiting_s;
    stats.mean_transmission_s += r.transmission_s;
    stats.mean_propagation_s += r.propagation_s;
    latency.push_back(r.latency_s);
  }
  double n = static_cast<double>(result.records.size());
  stats.mean_waiting_s /= n;
  stats.mean_transmission_s /= n;
  stats.mean_propagation_s /= n;
  stats.mean_latency_s =
      stats.mean_waiting_s + stats.mean_transmission_s + stats.mean_propagation_s;
  stats.latency = Cdf::from_samples(std::move(latency));
  if (!result.hop_waits_s.empty()) stats.hop_waits = Cdf::from_samples(result.hop_waits_s);
  return stats;
}

inline void write_records_csv(const RunResult& result, std::ostream& os) {
  os << "burst_id,packet_index,src_gs,dst_gs,hops,waiting_s,transmission_s,"
        "propagation_s,latency_s\n";
  char buf[224];
  for (const PacketRecord& r : result.records) {
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%d,%.9f,%.9f,%.9f,%.9f\n", r.burst_id,
                  r.packet_index, r.src_gs, r.dst_gs, r.hop_count, r.waiting_s,
                  r.transmission_s, r.propagation_s, r.latency_s);
    os << buf;
  }
}

// Normalized backlog growth over the final half of the run: the slope of
// each directed server's queued bits divided by its service rate. Values
// near 0 mean a stable queue; a utilization-rho > 1 queue grows at about
// (rho - 1) * R and shows up as a slope of about rho - 1.
struct StabilityReport {
  double max_normalized_slope = 0.0;
  int worst_edge = -1;  // edge id of the worst directed server

  bool bounded(double eps = 0.02) const { return max_normalized_slope < eps; }
  bool diverging(double threshold = 0.05) const { return max_normalized_slope > threshold; }
};

inline StabilityReport stability_report(const TopologySnapshot& snap, const RunResult& result,
                                        double t_sim_s) {
  const BacklogTrace& trace = result.backlog;
  if (trace.times_s.size() < 4)
    throw StatsError("stability_report: run was not sampled (enable backlog sampling)");
  std::size_t begin = 0;
  while (begin < trace.times_s.size() && trace.times_s[begin] < 0.5 * t_sim_s) ++begin;
  if (trace.times_s.size() - begin < 2)
    throw StatsError("stability_report: too few samples in the final half");
  std::vector<double> t(trace.times_s.begin() + begin, trace.times_s.end());
  StabilityReport report;
  std::vector<double> y(t.size());
  for (std::size_t sid = 0; sid < 2 * snap.edges.size(); ++sid) {
    const Edge& edge = snap.edges[sid / 2];
    if (edge.kind == EdgeKind::kGsl) continue;
    for (std::size_t k = 0; k < t.size(); ++k) y[k] = trace.bits[begin + k][sid];
    double slope = linear_slope(t, y) / edge.rate_bps;
    if (slope > report.max_normalized_slope) {
      report.max_normalized_slope = slope;
      report.worst_edge = static_cast<int>(sid / 2);
    }
  }
  return report;
}

}  // namespace walkernet
