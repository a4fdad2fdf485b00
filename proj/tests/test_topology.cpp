#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "test_helpers.hpp"

using namespace walkernet;
using Catch::Approx;

namespace {
TopologySnapshot default_snapshot() {
  ConstellationConfig cfg;
  Constellation c = build_constellation(cfg);
  return build_topology(c, default_ground_stations(), LinkBudgetParams{});
}
}  // namespace

TEST_CASE("edge census of the default build", "[topology]") {
  TopologySnapshot snap = default_snapshot();
  int intra = 0, inter = 0, gsl = 0;
  for (const Edge& e : snap.edges) {
    if (e.kind == EdgeKind::kIntraIsl) ++intra;
    else if (e.kind == EdgeKind::kInterIsl) ++inter;
    else ++gsl;
  }
  CHECK(intra == 200);  // N edges per plane
  CHECK(gsl == 23);     // one per station
  CHECK(inter >= 1);
  CHECK(inter <= 160);  // at most N per adjacent plane pair

  SECTION("intra-plane degree is exactly two") {
    std::vector<int> deg(snap.num_sats(), 0);
    for (const Edge& e : snap.edges)
      if (e.kind == EdgeKind::kIntraIsl) {
        ++deg[e.a];
        ++deg[e.b];
      }
    for (int d : deg) CHECK(d == 2);
  }
  SECTION("inter-plane edges only join adjacent planes, no seam by default") {
    for (const Edge& e : snap.edges)
      if (e.kind == EdgeKind::kInterIsl)
        CHECK(std::abs(e.plane_a - e.plane_b) == 1);
  }
  SECTION("at most one inter-plane edge per satellite per side") {
    std::set<std::pair<int, int>> sides;  // (sat, other plane)
    for (const Edge& e : snap.edges) {
      if (e.kind != EdgeKind::kInterIsl) continue;
      CHECK(sides.emplace(e.a, e.plane_b).second);
      CHECK(sides.emplace(e.b, e.plane_a).second);
    }
  }
}

TEST_CASE("inter-plane edges are mutual nearest neighbors in sight", "[topology]") {
  ConstellationConfig cfg;
  Constellation c = propagate(build_constellation(cfg), 2.5e5);
  TopologySnapshot snap = build_topology(c, default_ground_stations(), LinkBudgetParams{});
  for (const Edge& e : snap.edges) {
    if (e.kind != EdgeKind::kInterIsl) continue;
    CHECK(inter_plane_neighbor(c, e.a, e.plane_b) == e.b);
    CHECK(inter_plane_neighbor(c, e.b, e.plane_a) == e.a);
    double d = slant_range(satellite_position(c, e.a), satellite_position(c, e.b), 6371.0);
    CHECK_FALSE(is_unreachable(d));
    CHECK(d == Approx(e.length_km));
  }
}

TEST_CASE("inter-plane neighbor selection", "[topology]") {
  ConstellationConfig cfg;
  cfg.altitude_step_km = 0.0;  // aligned grids
  Constellation c = build_constellation(cfg);

  SECTION("aligned grids pair identical slots") {
    for (int k = 0; k < cfg.sats_per_plane; ++k)
      CHECK(inter_plane_neighbor(c, c.sat_id(0, k), 1) == c.sat_id(1, k));
  }
  SECTION("half-slot offset ties break to the lower slot") {
    double step = constants::kTwoPi / cfg.sats_per_plane;
    Constellation offset = build_constellation(
        ConstellationConfig{2, cfg.sats_per_plane, 1000.0, 0.0, 6371.0},
        {0.0, step / 2.0});
    // satellite 0 of plane 0 sits exactly between slots N-1 and 0 of plane 1
    int j = inter_plane_neighbor(offset, 0, 1);
    int lower = std::min(offset.sat_id(1, 0), offset.sat_id(1, cfg.sats_per_plane - 1));
    CHECK(j == lower);
  }
  SECTION("the pick always lies within one slot pitch") {
    Constellation moved = propagate(build_constellation(ConstellationConfig{}), 7.7e5);
    for (int k = 0; k < 40; ++k) {
      int i = moved.sat_id(2, k);
      int j = inter_plane_neighbor(moved, i, 3);
      CHECK(circular_distance(moved.theta_of(i), moved.theta_of(j)) <=
            constants::kTwoPi / 40 + 1e-12);
    }
  }
}

TEST_CASE("closest satellite association", "[topology]") {
  ConstellationConfig cfg;
  Constellation c = build_constellation(cfg);

  SECTION("station under a sub-satellite point picks that satellite") {
    Vec3 p = satellite_position(c, c.sat_id(2, 7));
    double r = p.norm();
    double lat = std::asin(p.z / r) * 180.0 / constants::kPi;
    double lon = std::atan2(p.y, p.x) * 180.0 / constants::kPi;
    GroundStation gs{"sub", lat, lon};
    CHECK(closest_satellite(c, gs) == c.sat_id(2, 7));
  }
  SECTION("exact ties break to the lower satellite id") {
    ConstellationConfig two{2, 4, 1000.0, 0.0, 6371.0};
    Constellation cc = build_constellation(two);
    // slot 1 of both planes sits exactly over the north pole
    GroundStation np{"np", 90.0, 0.0};
    CHECK(closest_satellite(cc, np) == cc.sat_id(0, 1));
  }
  SECTION("argmin dominates every alternative") {
    GroundStation gs{"x", 37.4, -12.9};
    int best = closest_satellite(c, gs);
    Vec3 p = ground_station_position(gs, 6371.0);
    double d_best = distance_km(p, satellite_position(c, best));
    for (int s = 0; s < c.num_sats(); ++s)
      CHECK(d_best <= distance_km(p, satellite_position(c, s)) + 1e-12);
  }
}

TEST_CASE("GSLs: one per station, to the closest satellite, infinite rate", "[topology]") {
  TopologySnapshot snap = default_snapshot();
  std::vector<int> uplinks(snap.num_stations(), 0);
  for (const Edge& e : snap.edges) {
    if (e.kind != EdgeKind::kGsl) continue;
    REQUIRE(snap.is_gs_vertex(e.b));
    ++uplinks[snap.gs_index(e.b)];
    CHECK(std::isinf(e.rate_bps));
    CHECK(e.length_km > 0.0);
  }
  for (int u : uplinks) CHECK(u == 1);
  for (int g = 0; g < snap.num_stations(); ++g)
    CHECK(snap.stations[g].gsl_sat ==
          closest_satellite(snap.constellation, snap.stations[g].station));
}

TEST_CASE("ISL rates follow the link budget", "[topology]") {
  TopologySnapshot snap = default_snapshot();
  for (const Edge& e : snap.edges) {
    if (e.kind == EdgeKind::kGsl) continue;
    CHECK(e.length_km > 0.0);
    CHECK(std::isfinite(e.rate_bps));
    CHECK(e.rate_bps == Approx(data_rate_bps(snap.params, e.length_km)).epsilon(1e-12));
  }
}

TEST_CASE("single plane has no inter-plane edges", "[topology]") {
  ConstellationConfig cfg;
  cfg.num_planes = 1;
  Constellation c = build_constellation(cfg);
  TopologySnapshot snap = build_topology(c, default_ground_stations(), LinkBudgetParams{});
  for (const Edge& e : snap.edges) CHECK(e.kind != EdgeKind::kInterIsl);
}

TEST_CASE("seam links", "[topology]") {
  ConstellationConfig cfg;  // distinct altitudes avoid polar coincidences
  Constellation c = build_constellation(cfg);

  SECTION("disabled by default: no plane pair {0, M-1}") {
    TopologySnapshot snap = build_topology(c, default_ground_stations(), LinkBudgetParams{});
    for (const Edge& e : snap.edges)
      if (e.kind == EdgeKind::kInterIsl)
        CHECK_FALSE(((e.plane_a == 0 && e.plane_b == 4) ||
                     (e.plane_a == 4 && e.plane_b == 0)));
  }
  SECTION("enabled: seam edges appear") {
    TopologyOptions options;
    options.enable_seam_links = true;
    TopologySnapshot snap =
        build_topology(c, default_ground_stations(), LinkBudgetParams{}, options);
    int seam = 0;
    for (const Edge& e : snap.edges)
      if (e.kind == EdgeKind::kInterIsl &&
          ((e.plane_a == 0 && e.plane_b == 4) || (e.plane_a == 4 && e.plane_b == 0)))
        ++seam;
    CHECK(seam > 0);
  }
  SECTION("two planes gain nothing from the seam switch") {
    ConstellationConfig two = cfg;
    two.num_planes = 2;
    Constellation c2 = build_constellation(two);
    TopologyOptions options;
    options.enable_seam_links = true;
    TopologySnapshot with = build_topology(c2, default_ground_stations(),
                                           LinkBudgetParams{}, options);
    TopologySnapshot without =
        build_topology(c2, default_ground_stations(), LinkBudgetParams{});
    CHECK(with.edges.size() == without.edges.size());
  }
}

TEST_CASE("aligned equal-altitude planes build without degenerate edges", "[topology]") {
  ConstellationConfig cfg;
  cfg.altitude_step_km = 0.0;  // planes cross at the poles
  Constellation c = build_constellation(cfg);
  TopologySnapshot snap = build_topology(c, default_ground_stations(), LinkBudgetParams{});
  for (const Edge& e : snap.edges) CHECK(e.length_km > 0.0);
}

TEST_CASE("tiny constellation keeps its rings", "[topology]") {
  ConstellationConfig cfg{3, 4, 1000.0, 10.0, 6371.0};
  Constellation c = build_constellation(cfg);
  TopologySnapshot snap = build_topology(c, default_ground_stations(), LinkBudgetParams{});
  int intra = 0;
  for (const Edge& e : snap.edges)
    if (e.kind == EdgeKind::kIntraIsl) ++intra;
  CHECK(intra == 12);  // rings are unconditional even when chords graze the Earth
}

TEST_CASE("adjacency mirrors the edge list", "[topology]") {
  TopologySnapshot snap = default_snapshot();
  std::size_t total = 0;
  for (const auto& list : snap.adjacency) total += list.size();
  CHECK(total == 2 * snap.edges.size());
  for (int v = 0; v < snap.num_vertices(); ++v)
    for (auto [eid, nbr] : snap.adjacency[v]) {
      const Edge& e = snap.edges[eid];
      CHECK(e.other(v) == nbr);
      CHECK((e.a == v || e.b == v));
    }
}

TEST_CASE("deterministic rebuild and empty station list", "[topology]") {
  ConstellationConfig cfg;
  Constellation c = propagate(build_constellation(cfg), 4.2e5);
  TopologySnapshot s1 = build_topology(c, default_ground_stations(), LinkBudgetParams{});
  TopologySnapshot s2 = build_topology(c, default_ground_stations(), LinkBudgetParams{});
  REQUIRE(s1.edges.size() == s2.edges.size());
  for (std::size_t i = 0; i < s1.edges.size(); ++i) {
    CHECK(s1.edges[i].a == s2.edges[i].a);
    CHECK(s1.edges[i].b == s2.edges[i].b);
    CHECK(s1.edges[i].length_km == s2.edges[i].length_km);
    CHECK(s1.edges[i].rate_bps == s2.edges[i].rate_bps);
  }
  CHECK_THROWS_AS(build_topology(c, {}, LinkBudgetParams{}), ConfigError);
}

TEST_CASE("edge table dump", "[topology]") {
  TopologySnapshot snap = default_snapshot();
  std::ostringstream os;
  write_edge_table(snap, os);
  std::istringstream in(os.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "a,b,a_label,b_label,kind,length_km,rate_bps");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 6);
  }
  CHECK(rows == snap.edges.size());
}
