#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "spreadnet/dates.hpp"
#include "spreadnet/ingest.hpp"

namespace spreadnet {

inline constexpr double kEarthRadiusMiles = 3958.7613;

struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;
};

/// Great-circle distance in miles (haversine).
double haversine_miles(GeoPoint a, GeoPoint b);

/// One day's county-proximity graph. Simple and undirected; node indices
/// refer to `fips` order (sorted ascending, so construction is independent
/// of input ordering). Every node carries >= gamma new cases by construction.
struct SpreadGraph {
    Date date;
    std::vector<std::string> fips;
    std::vector<long long> new_cases;        // parallel to fips
    std::vector<std::pair<int, int>> edges;  // i < j, sorted
    std::vector<std::vector<int>> adjacency; // sorted neighbor lists

    int node_count() const { return static_cast<int>(fips.size()); }
    long long edge_count() const { return static_cast<long long>(edges.size()); }
};

struct NetworkFeatures {
    Date date;
    long long V = 0;
    long long E = 0;
    long long GC = 0;
};

struct GraphBuildStats {
    std::size_t missing_geo = 0; // counties above gamma lacking a centroid
};

/// Nodes: counties with new_cases >= gamma (and known coordinates).
/// Edge (i,j): both endpoints have new_cases >= lambda and their centroid
/// distance is < delta_miles.
SpreadGraph build_spread_graph(Date date, const std::map<std::string, long long>& day_new_cases,
                               const std::vector<CountyGeo>& geo, long long gamma, long long lambda,
                               double delta_miles, GraphBuildStats* stats = nullptr);

/// Node count of the largest connected component (0 for the empty graph).
int largest_component(const SpreadGraph& g);

NetworkFeatures network_features(const SpreadGraph& g);

/// Build adjacency lists from the edge list (sorted, no duplicates).
std::vector<std::vector<int>> adjacency_from_edges(int n, const std::vector<std::pair<int, int>>& edges);

// Graph dump: node file `fips,new_cases` and edge file `fips_i,fips_j`.
void write_graph_files(const SpreadGraph& g, const std::string& nodes_path,
                       const std::string& edges_path);
SpreadGraph read_graph_files(Date date, const std::string& nodes_path,
                             const std::string& edges_path);

} // namespace spreadnet
