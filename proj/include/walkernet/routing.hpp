#pragma once

#include <algorithm>
#include <queue>
#include <random>
#include <utility>
#include <vector>

#include "walkernet/core.hpp"
#include "walkernet/metrics.hpp"
#include "walkernet/topology.hpp"

namespace walkernet {

struct PathEdge {
  int edge_id = -1;
  int from = -1;  // traversal direction
  int to = -1;
  EdgeKind kind = EdgeKind::kIntraIsl;
  double length_km = 0.0;
  double rate_bps = 0.0;
};

struct RoutePath {
  int u = -1;
  int v = -1;
  double cost = 0.0;
  std::vector<PathEdge> edges;

  std::size_t length() const { return edges.size(); }

  RoutePath reversed() const {
    RoutePath r;
    r.u = v;
    r.v = u;
    r.cost = cost;
    r.edges.reserve(edges.size());
    for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
      PathEdge pe = *it;
      std::swap(pe.from, pe.to);
      r.edges.push_back(pe);
    }
    return r;
  }
};

inline bool same_edge_sequence(const RoutePath& lhs, const RoutePath& rhs) {
  if (lhs.edges.size() != rhs.edges.size()) return false;
  for (std::size_t i = 0; i < lhs.edges.size(); ++i)
    if (lhs.edges[i].edge_id != rhs.edges[i].edge_id) return false;
  return true;
}

namespace detail {

// Core search over prepared undirected edge weights.
inline RoutePath dijkstra(const TopologySnapshot& snap, int u_vertex, int v_vertex,
                          const std::vector<double>& weight) {
  const int n = snap.num_vertices();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, kInf);
  std::vector<int> pred_edge(n, -1);
  std::vector<char> done(n, 0);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist[u_vertex] = 0.0;
  heap.emplace(0.0, u_vertex);

  while (!heap.empty()) {
    auto [d, vtx] = heap.top();
    heap.pop();
    if (done[vtx]) continue;
    done[vtx] = 1;
    if (vtx == v_vertex) break;
    for (auto [eid, next] : snap.adjacency[vtx]) {
      double w = weight[eid];
      if (std::isinf(w) || done[next]) continue;
      double nd = d + w;
      if (nd < dist[next]) {
        dist[next] = nd;
        pred_edge[next] = eid;
        heap.emplace(nd, next);
      }
    }
  }

  if (std::isinf(dist[v_vertex]))
    throw UnreachableError("no finite-cost path between " + snap.vertex_label(u_vertex) +
                           " and " + snap.vertex_label(v_vertex));

  RoutePath path;
  path.u = u_vertex;
  path.v = v_vertex;
  path.cost = dist[v_vertex];
  for (int vtx = v_vertex; vtx != u_vertex;) {
    const Edge& e = snap.edges[pred_edge[vtx]];
    int prev = e.other(vtx);
    PathEdge pe;
    pe.edge_id = pred_edge[vtx];
    pe.from = prev;
    pe.to = vtx;
    pe.kind = e.kind;
    pe.length_km = e.length_km;
    pe.rate_bps = e.rate_bps;
    path.edges.push_back(pe);
    vtx = prev;
  }
  std::reverse(path.edges.begin(), path.edges.end());
  return path;
}

}  // namespace detail

// Dijkstra between two stations under the selected metric. Hop count breaks
// cost ties uniformly at random through infinitesimal weight perturbations
// drawn fresh for each query; the other metrics break ties deterministically
// by vertex index (pop order is keyed on (distance, vertex)).
inline RoutePath shortest_path(const TopologySnapshot& snap, const MetricSpec& spec,
                               int u_vertex, int v_vertex, std::mt19937_64& rng) {
  spec.validate();
  RouteQuery query = make_query(snap, u_vertex, v_vertex);
  const int num_edges = static_cast<int>(snap.edges.size());
  std::vector<double> weight(num_edges);
  if (spec.kind == Metric::kHopCount) {
    std::uniform_real_distribution<double> jitter(0.0, 1e-9);
    for (int e = 0; e < num_edges; ++e)
      weight[e] = edge_weight(snap, snap.edges[e], spec, query) + jitter(rng);
  } else {
    for (int e = 0; e < num_edges; ++e)
      weight[e] = edge_weight(snap, snap.edges[e], spec, query);
  }
  return detail::dijkstra(snap, u_vertex, v_vertex, weight);
}

// Same search with a caller-held tie-break realization: `hop_jitter` holds
// one perturbation per edge, so several queries can share a single set of
// tie decisions. The deterministic metrics ignore it.
inline RoutePath shortest_path(const TopologySnapshot& snap, const MetricSpec& spec,
                               int u_vertex, int v_vertex,
                               const std::vector<double>& hop_jitter) {
  spec.validate();
  RouteQuery query = make_query(snap, u_vertex, v_vertex);
  const int num_edges = static_cast<int>(snap.edges.size());
  std::vector<double> weight(num_edges);
  if (spec.kind == Metric::kHopCount) {
    if (hop_jitter.size() != static_cast<std::size_t>(num_edges))
      throw DomainError("shortest_path: tie-break table must cover every edge");
    for (int e = 0; e < num_edges; ++e)
      weight[e] = edge_weight(snap, snap.edges[e], spec, query) + hop_jitter[e];
  } else {
    for (int e = 0; e < num_edges; ++e)
      weight[e] = edge_weight(snap, snap.edges[e], spec, query);
  }
  return detail::dijkstra(snap, u_vertex, v_vertex, weight);
}

namespace detail {
struct ZeroWaiting {
  double operator()(int, int) const { return 0.0; }
};
}  // namespace detail

// Burst latency recursion. Returns the latency of packets 1..n of a burst
// of equal p-bit packets sent back to back over `path`, measured from the
// injection instant. waiting(m, k) is the cross-traffic queueing delay of
// packet k (1-based) at path edge m (0-based); packets also implicitly queue
// behind their own burst, which the max term accounts for.
template <class WaitingFn>
std::vector<double> burst_latency_series(const RoutePath& path, int n, double packet_bits,
                                         WaitingFn&& waiting) {
  if (n < 1) throw DomainError("burst_latency: packet count must be >= 1");
  if (packet_bits <= 0.0) throw DomainError("burst_latency: packet size must be > 0");
  const std::size_t len = path.edges.size();
  std::vector<double> tx(len), prop(len);
  for (std::size_t m = 0; m < len; ++m) {
    const PathEdge& e = path.edges[m];
    if (e.kind != EdgeKind::kGsl && e.rate_bps <= 0.0)
      throw DomainError("burst_latency: nonpositive rate on an ISL edge");
    tx[m] = std::isinf(e.rate_bps) ? 0.0 : packet_bits / e.rate_bps;
    prop[m] = e.length_km * 1e3 / constants::kSpeedOfLight;
  }

  std::vector<double> series(n);
  std::vector<double> prev(len + 1, 0.0);  // packet k-1 over edge prefixes
  std::vector<double> cur(len + 1, 0.0);
  for (int k = 1; k <= n; ++k) {
    cur[0] = 0.0;
    for (std::size_t m = 1; m <= len; ++m) {
      double blocked = std::max(cur[m - 1], prev[m] - prop[m - 1]);
      cur[m] = blocked + waiting(static_cast<int>(m - 1), k) + tx[m - 1] + prop[m - 1];
    }
    series[k - 1] = cur[len];
    std::swap(prev, cur);
  }
  return series;
}

template <class WaitingFn>
double burst_latency(const RoutePath& path, int n, double packet_bits, WaitingFn&& waiting) {
  return burst_latency_series(path, n, packet_bits, std::forward<WaitingFn>(waiting)).back();
}

inline double burst_latency(const RoutePath& path, int n, double packet_bits) {
  return burst_latency(path, n, packet_bits, detail::ZeroWaiting{});
}

}  // namespace walkernet
