#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "walkernet/core.hpp"
#include "walkernet/geometry.hpp"
#include "walkernet/link_budget.hpp"

namespace walkernet {

enum class EdgeKind { kIntraIsl, kInterIsl, kGsl };

inline const char* edge_kind_name(EdgeKind k) {
  switch (k) {
    case EdgeKind::kIntraIsl: return "intra";
    case EdgeKind::kInterIsl: return "inter";
    case EdgeKind::kGsl: return "gsl";
  }
  return "?";
}

struct Edge {
  int a = -1;  // vertex ids with a < b
  int b = -1;
  EdgeKind kind = EdgeKind::kIntraIsl;
  double length_km = 0.0;
  double rate_bps = 0.0;  // kInfiniteRate on GSLs
  int plane_a = -1;       // plane of endpoint a (satellites only)
  int plane_b = -1;

  int other(int v) const { return v == a ? b : a; }
};

struct TopologyOptions {
  bool enable_seam_links = false;   // ISLs across the counter-rotating seam
  double occlusion_margin_km = 0.0;
};

struct SatelliteNode {
  int plane = -1;
  int slot = -1;
  double theta = 0.0;
  Vec3 position;
  double ring_spacing_km = 0.0;  // distance to the in-plane successor
};

struct StationNode {
  GroundStation station;
  Vec3 position;
  int gsl_sat = -1;    // satellite vertex of this station's single GSL
  int gsl_plane = -1;
};

// Weighted undirected multipartite graph of one constellation instant.
// Vertices are satellites (0 .. num_sats-1) followed by ground stations.
struct TopologySnapshot {
  Constellation constellation;
  LinkBudgetParams params;
  TopologyOptions options;
  std::vector<SatelliteNode> sats;
  std::vector<StationNode> stations;
  std::vector<Edge> edges;
  std::vector<std::vector<std::pair<int, int>>> adjacency;  // vertex -> (edge id, neighbor)

  int num_sats() const { return static_cast<int>(sats.size()); }
  int num_stations() const { return static_cast<int>(stations.size()); }
  int num_vertices() const { return num_sats() + num_stations(); }
  int gs_vertex(int gs_index) const { return num_sats() + gs_index; }
  bool is_gs_vertex(int v) const { return v >= num_sats(); }
  int gs_index(int v) const { return v - num_sats(); }

  std::string vertex_label(int v) const {
    if (is_gs_vertex(v)) return stations[gs_index(v)].station.name;
    return "S" + std::to_string(sats[v].plane) + "-" + std::to_string(sats[v].slot);
  }

  void rebuild_adjacency() {
    adjacency.assign(num_vertices(), {});
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
      adjacency[edges[e].a].emplace_back(e, edges[e].b);
      adjacency[edges[e].b].emplace_back(e, edges[e].a);
    }
  }
};

// Index of the satellite in `plane_b` with the smallest angular offset from
// sat_id, ties to the lower slot. Returns the global satellite id.
inline int inter_plane_neighbor(const Constellation& c, int sat_id, int plane_b) {
  double theta_i = c.theta_of(sat_id);
  const OrbitalPlane& pb = c.planes[plane_b];
  int best_slot = 0;
  double best = circular_distance(theta_i, pb.anomalies[0]);
  for (int k = 1; k < static_cast<int>(pb.anomalies.size()); ++k) {
    double d = circular_distance(theta_i, pb.anomalies[k]);
    if (d < best) {
      best = d;
      best_slot = k;
    }
  }
  return c.sat_id(plane_b, best_slot);
}

// Globally closest satellite to a station, ties to the lower satellite id.
inline int closest_satellite(const Constellation& c, const GroundStation& gs) {
  if (c.num_sats() == 0) throw ConfigError("closest_satellite: empty constellation");
  Vec3 p = ground_station_position(gs, c.config.earth_radius_km);
  int best = 0;
  double best_d2 = (satellite_position(c, 0) - p).norm2();
  for (int s = 1; s < c.num_sats(); ++s) {
    double d2 = (satellite_position(c, s) - p).norm2();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = s;
    }
  }
  return best;
}

// Builds the full snapshot: the intra-plane rings, mutual-nearest
// inter-plane ISLs between adjacent planes (line of sight permitting), and
// one GSL per station to its closest satellite.
inline TopologySnapshot build_topology(const Constellation& c,
                                       const std::vector<GroundStation>& stations,
                                       const LinkBudgetParams& params,
                                       const TopologyOptions& options = {}) {
  if (stations.empty()) throw ConfigError("build_topology: ground station list is empty");
  params.validate();

  TopologySnapshot snap;
  snap.constellation = c;
  snap.params = params;
  snap.options = options;

  const int M = c.config.num_planes;
  const int N = c.config.sats_per_plane;
  const double r_e = c.config.earth_radius_km;

  snap.sats.resize(c.num_sats());
  for (int s = 0; s < c.num_sats(); ++s) {
    SatelliteNode& node = snap.sats[s];
    node.plane = c.plane_of(s);
    node.slot = c.slot_of(s);
    node.theta = c.theta_of(s);
    node.position = satellite_position(c, s);
  }

  // Intra-plane rings: N edges per plane, kept regardless of occlusion since
  // the ring neighbors are the permanent links of the constellation.
  for (int a = 0; a < M; ++a) {
    for (int k = 0; k < N; ++k) {
      int i = c.sat_id(a, k);
      int j = c.sat_id(a, (k + 1) % N);
      double len = distance_km(snap.sats[i].position, snap.sats[j].position);
      snap.sats[i].ring_spacing_km = len;
      Edge e;
      e.a = std::min(i, j);
      e.b = std::max(i, j);
      e.kind = EdgeKind::kIntraIsl;
      e.length_km = len;
      e.rate_bps = data_rate_bps(params, len);
      e.plane_a = a;
      e.plane_b = a;
      snap.edges.push_back(e);
    }
  }

  // Inter-plane ISLs: plane pairs (a, a+1), plus the seam pair when enabled.
  // An edge is established only for mutual nearest neighbors within line of
  // sight, which caps the inter-plane degree at one per pitch side.
  std::vector<std::pair<int, int>> plane_pairs;
  for (int a = 0; a + 1 < M; ++a) plane_pairs.emplace_back(a, a + 1);
  if (options.enable_seam_links && M > 2) plane_pairs.emplace_back(M - 1, 0);
  for (auto [pa, pb] : plane_pairs) {
    for (int k = 0; k < N; ++k) {
      int i = c.sat_id(pa, k);
      int j = inter_plane_neighbor(c, i, pb);
      if (inter_plane_neighbor(c, j, pa) != i) continue;
      double len = slant_range(snap.sats[i].position, snap.sats[j].position, r_e,
                               options.occlusion_margin_km);
      // Coincident satellites (aligned planes crossing at the poles) are not
      // a usable link; established edges must have positive length.
      if (is_unreachable(len) || len <= 0.0) continue;
      Edge e;
      e.a = std::min(i, j);
      e.b = std::max(i, j);
      e.kind = EdgeKind::kInterIsl;
      e.length_km = len;
      e.rate_bps = data_rate_bps(params, len);
      e.plane_a = snap.sats[e.a].plane;
      e.plane_b = snap.sats[e.b].plane;
      snap.edges.push_back(e);
    }
  }

  // One GSL per station; treated as capacity-unconstrained.
  snap.stations.resize(stations.size());
  for (std::size_t g = 0; g < stations.size(); ++g) {
    stations[g].validate();
    StationNode& node = snap.stations[g];
    node.station = stations[g];
    node.position = ground_station_position(stations[g], r_e);
    node.gsl_sat = closest_satellite(c, stations[g]);
    node.gsl_plane = c.plane_of(node.gsl_sat);
    Edge e;
    e.a = node.gsl_sat;
    e.b = snap.gs_vertex(static_cast<int>(g));
    e.kind = EdgeKind::kGsl;
    e.length_km = distance_km(node.position, snap.sats[node.gsl_sat].position);
    e.rate_bps = kInfiniteRate;
    e.plane_a = node.gsl_plane;
    snap.edges.push_back(e);
  }

  snap.rebuild_adjacency();
  return snap;
}

inline void write_edge_table(const TopologySnapshot& snap, std::ostream& os) {
  os << "a,b,a_label,b_label,kind,length_km,rate_bps\n";
  char buf[64];
  for (const Edge& e : snap.edges) {
    os << e.a << ',' << e.b << ',' << snap.vertex_label(e.a) << ','
       << snap.vertex_label(e.b) << ',' << edge_kind_name(e.kind) << ',';
    std::snprintf(buf, sizeof buf, "%.6f,%.3f\n", e.length_km, e.rate_bps);
    os << buf;
  }
}

}  // namespace walkernet
