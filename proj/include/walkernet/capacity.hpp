#pragma once

#include <random>
#include <vector>

#include "walkernet/core.hpp"
#include "walkernet/routing.hpp"

namespace walkernet {

// Selected path of every unordered station pair and how many of those paths
// cross each edge.
struct PathCensus {
  int n_gs = 0;
  std::vector<RoutePath> paths;              // pair (i, j), i < j, in row-major order
  std::vector<long> edge_path_count;         // per edge id

  long total_path_edges() const {
    long sum = 0;
    for (const RoutePath& p : paths) sum += static_cast<long>(p.length());
    return sum;
  }
};

inline PathCensus census(const TopologySnapshot& snap, const MetricSpec& spec,
                         std::mt19937_64& rng) {
  const int n_gs = snap.num_stations();
  if (n_gs < 2) throw ConfigError("census: need at least 2 ground stations");
  PathCensus out;
  out.n_gs = n_gs;
  out.edge_path_count.assign(snap.edges.size(), 0);
  out.paths.reserve(static_cast<std::size_t>(n_gs) * (n_gs - 1) / 2);
  // A census models one realized routing configuration, so hop-count ties
  // are broken by a single perturbation table shared across all pairs.
  // Re-rolling the tie breaks per pair would let equal-length routes fan
  // out over parallel corridors and understate the contention that a fixed
  // set of forwarding decisions concentrates on shared links.
  std::vector<double> tie_jitter(snap.edges.size(), 0.0);
  if (spec.kind == Metric::kHopCount) {
    std::uniform_real_distribution<double> jitter(0.0, 1e-9);
    for (double& x : tie_jitter) x = jitter(rng);
  }
  for (int i = 0; i < n_gs; ++i) {
    for (int j = i + 1; j < n_gs; ++j) {
      RoutePath path =
          shortest_path(snap, spec, snap.gs_vertex(i), snap.gs_vertex(j), tie_jitter);
      for (const PathEdge& pe : path.edges) ++out.edge_path_count[pe.edge_id];
      out.paths.push_back(std::move(path));
    }
  }
  return out;
}

// Min-cut bound on the per-station traffic load: the tightest
// rate-to-path-count ratio over the loaded ISL edges. GSLs are
// capacity-unconstrained and unloaded edges impose no constraint.
inline double lambda_max(const PathCensus& cns, const TopologySnapshot& snap) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < snap.edges.size(); ++e) {
    if (snap.edges[e].kind == EdgeKind::kGsl) continue;
    if (cns.edge_path_count[e] == 0) continue;
    double bound = snap.edges[e].rate_bps * (cns.n_gs - 1) /
                   static_cast<double>(cns.edge_path_count[e]);
    if (bound < best) best = bound;
  }
  if (std::isinf(best))
    throw StatsError("lambda_max: no loaded ISL edge in the census");
  return best;
}

}  // namespace walkernet
