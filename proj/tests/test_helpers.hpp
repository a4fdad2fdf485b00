#pragma once

// Shared fixtures and independent oracles for the test suite. The oracles
// deliberately reimplement results from first principles (plain recursive
// definitions, exhaustive search) rather than calling back into the library.

#include <functional>
#include <map>
#include <vector>

#include "walkernet/walkernet.hpp"

namespace wtest {

using namespace walkernet;

// Hand-built chain topology: station A - s0 - s1 - ... - s{k-1} - station B,
// with one GSL on each end and the given ISL lengths/rates in between.
inline TopologySnapshot make_chain(const std::vector<double>& isl_lengths_km,
                                   const std::vector<double>& isl_rates_bps,
                                   double gsl_length_km = 1000.0) {
  TopologySnapshot snap;
  const int n_sats = static_cast<int>(isl_lengths_km.size()) + 1;
  snap.sats.resize(n_sats);
  for (int s = 0; s < n_sats; ++s) {
    snap.sats[s].plane = 0;
    snap.sats[s].slot = s;
  }
  snap.stations.resize(2);
  snap.stations[0].station = {"A", 0.0, 0.0};
  snap.stations[0].gsl_sat = 0;
  snap.stations[0].gsl_plane = 0;
  snap.stations[1].station = {"B", 0.0, 10.0};
  snap.stations[1].gsl_sat = n_sats - 1;
  snap.stations[1].gsl_plane = 0;

  for (int m = 0; m + 1 < n_sats; ++m) {
    Edge e;
    e.a = m;
    e.b = m + 1;
    e.kind = EdgeKind::kIntraIsl;
    e.length_km = isl_lengths_km[m];
    e.rate_bps = isl_rates_bps[m];
    e.plane_a = e.plane_b = 0;
    snap.edges.push_back(e);
  }
  for (int g = 0; g < 2; ++g) {
    Edge e;
    e.a = snap.stations[g].gsl_sat;
    e.b = snap.gs_vertex(g);
    e.kind = EdgeKind::kGsl;
    e.length_km = gsl_length_km;
    e.rate_bps = kInfiniteRate;
    e.plane_a = 0;
    snap.edges.push_back(e);
  }
  snap.rebuild_adjacency();
  return snap;
}

// Recursive, memoized evaluation of the burst-latency recursion straight
// from its definition: L(k, m) = 0 for k < 1 or m = 0, else
// max(L(k, m-1), L(k-1, m) - prop_m) + t_w + tx_m + prop_m.
inline double burst_latency_reference(const RoutePath& path, int n, double packet_bits) {
  const int len = static_cast<int>(path.edges.size());
  std::vector<double> tx(len), prop(len);
  for (int m = 0; m < len; ++m) {
    const PathEdge& e = path.edges[m];
    tx[m] = std::isinf(e.rate_bps) ? 0.0 : packet_bits / e.rate_bps;
    prop[m] = e.length_km * 1e3 / constants::kSpeedOfLight;
  }
  std::map<std::pair<int, int>, double> memo;
  std::function<double(int, int)> L = [&](int k, int m) -> double {
    if (k < 1 || m == 0) return 0.0;
    auto it = memo.find({k, m});
    if (it != memo.end()) return it->second;
    double blocked = std::max(L(k, m - 1), L(k - 1, m) - prop[m - 1]);
    double value = blocked + tx[m - 1] + prop[m - 1];
    memo[{k, m}] = value;
    return value;
  };
  return L(n, len);
}

// Exhaustive minimum path cost over all simple u-v paths under a metric.
// Returns +inf when no finite-cost path exists.
inline double brute_force_min_cost(const TopologySnapshot& snap, const MetricSpec& spec,
                                   int u, int v) {
  RouteQuery query = make_query(snap, u, v);
  std::vector<double> weight(snap.edges.size());
  for (std::size_t e = 0; e < snap.edges.size(); ++e)
    weight[e] = edge_weight(snap, snap.edges[e], spec, query);
  std::vector<char> visited(snap.num_vertices(), 0);
  double best = kUnreachable;
  std::function<void(int, double)> dfs = [&](int vtx, double cost) {
    if (cost >= best) return;
    if (vtx == v) {
      best = cost;
      return;
    }
    visited[vtx] = 1;
    for (auto [eid, next] : snap.adjacency[vtx]) {
      if (visited[next] || std::isinf(weight[eid])) continue;
      dfs(next, cost + weight[eid]);
    }
    visited[vtx] = 0;
  };
  dfs(u, 0.0);
  return best;
}

// Exhaustive per-edge path counting for the capacity bound: for every
// station pair, the min-cost path found by brute force (first one found on
// cost ties, which the callers avoid by using tie-free graphs).
inline std::vector<long> brute_force_edge_counts(const TopologySnapshot& snap,
                                                 const MetricSpec& spec) {
  std::vector<long> counts(snap.edges.size(), 0);
  for (int i = 0; i < snap.num_stations(); ++i) {
    for (int j = i + 1; j < snap.num_stations(); ++j) {
      int u = snap.gs_vertex(i), v = snap.gs_vertex(j);
      RouteQuery query = make_query(snap, u, v);
      std::vector<double> weight(snap.edges.size());
      for (std::size_t e = 0; e < snap.edges.size(); ++e)
        weight[e] = edge_weight(snap, snap.edges[e], spec, query);
      double best = kUnreachable;
      std::vector<int> best_edges, cur;
      std::vector<char> visited(snap.num_vertices(), 0);
      std::function<void(int, double)> dfs = [&](int vtx, double cost) {
        if (cost >= best) return;
        if (vtx == v) {
          best = cost;
          best_edges = cur;
          return;
        }
        visited[vtx] = 1;
        for (auto [eid, next] : snap.adjacency[vtx]) {
          if (visited[next] || std::isinf(weight[eid])) continue;
          cur.push_back(eid);
          dfs(next, cost + weight[eid]);
          cur.pop_back();
        }
        visited[vtx] = 0;
      };
      dfs(u, 0.0);
      for (int eid : best_edges) ++counts[eid];
    }
  }
  return counts;
}

}  // namespace wtest
