#include "spreadnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>

#include "spreadnet/csv.hpp"
#include "spreadnet/errors.hpp"

namespace spreadnet {

double haversine_miles(GeoPoint a, GeoPoint b) {
    constexpr double deg = std::numbers::pi / 180.0;
    const double phi1 = a.lat * deg, phi2 = b.lat * deg;
    const double dphi = (b.lat - a.lat) * deg;
    const double dlam = (b.lon - a.lon) * deg;
    const double s1 = std::sin(dphi / 2.0), s2 = std::sin(dlam / 2.0);
    const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    return 2.0 * kEarthRadiusMiles * std::asin(std::min(1.0, std::sqrt(h)));
}

std::vector<std::vector<int>> adjacency_from_edges(int n,
                                                   const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> adj(n);
    for (const auto& [i, j] : edges) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    for (auto& nb : adj) std::sort(nb.begin(), nb.end());
    return adj;
}

SpreadGraph build_spread_graph(Date date, const std::map<std::string, long long>& day_new_cases,
                               const std::vector<CountyGeo>& geo, long long gamma, long long lambda,
                               double delta_miles, GraphBuildStats* stats) {
    SpreadGraph g;
    g.date = date;

    std::map<std::string, GeoPoint> coords;
    for (const auto& c : geo) coords.emplace(c.fips, GeoPoint{c.latitude, c.longitude});

    std::vector<GeoPoint> pts;
    for (const auto& [fips, count] : day_new_cases) { // std::map: fips ascending
        if (count < gamma) continue;
        auto it = coords.find(fips);
        if (it == coords.end()) {
            if (stats) ++stats->missing_geo;
            continue;
        }
        g.fips.push_back(fips);
        g.new_cases.push_back(count);
        pts.push_back(it->second);
    }

    const int n = g.node_count();

    // Candidate pruning by latitude band: the central angle between two
    // points is at least their latitude difference, so any pair further
    // apart than delta in latitude alone cannot form an edge.
    constexpr double miles_per_lat_degree = kEarthRadiusMiles * std::numbers::pi / 180.0;
    const double max_dlat = delta_miles / miles_per_lat_degree + 1e-9;

    std::vector<int> by_lat(n);
    std::iota(by_lat.begin(), by_lat.end(), 0);
    std::sort(by_lat.begin(), by_lat.end(),
              [&](int a, int b) { return pts[a].lat < pts[b].lat; });

    for (int a = 0; a < n; ++a) {
        const int i = by_lat[a];
        if (g.new_cases[i] < lambda) continue;
        for (int b = a + 1; b < n; ++b) {
            const int j = by_lat[b];
            if (pts[j].lat - pts[i].lat > max_dlat) break;
            if (g.new_cases[j] < lambda) continue;
            if (haversine_miles(pts[i], pts[j]) < delta_miles) {
                g.edges.emplace_back(std::min(i, j), std::max(i, j));
            }
        }
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.adjacency = adjacency_from_edges(n, g.edges);
    return g;
}

int largest_component(const SpreadGraph& g) {
    const int n = g.node_count();
    std::vector<char> seen(n, 0);
    std::vector<int> stack;
    int best = 0;
    for (int s = 0; s < n; ++s) {
        if (seen[s]) continue;
        int size = 0;
        stack.push_back(s);
        seen[s] = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            ++size;
            for (int u : g.adjacency[v]) {
                if (!seen[u]) {
                    seen[u] = 1;
                    stack.push_back(u);
                }
            }
        }
        best = std::max(best, size);
    }
    return best;
}

NetworkFeatures network_features(const SpreadGraph& g) {
    return {g.date, g.node_count(), g.edge_count(), largest_component(g)};
}

void write_graph_files(const SpreadGraph& g, const std::string& nodes_path,
                       const std::string& edges_path) {
    std::ofstream nodes(nodes_path);
    if (!nodes) throw Error("cannot write " + nodes_path);
    nodes << "fips,new_cases\n";
    for (int i = 0; i < g.node_count(); ++i) {
        nodes << g.fips[i] << ',' << g.new_cases[i] << '\n';
    }
    std::ofstream edges(edges_path);
    if (!edges) throw Error("cannot write " + edges_path);
    edges << "fips_i,fips_j\n";
    for (const auto& [i, j] : g.edges) {
        edges << g.fips[i] << ',' << g.fips[j] << '\n';
    }
}

SpreadGraph read_graph_files(Date date, const std::string& nodes_path,
                             const std::string& edges_path) {
    SpreadGraph g;
    g.date = date;
    std::map<std::string, int> index;
    for_each_csv_row(nodes_path, {"fips", "new_cases"},
                     [&](const std::vector<std::string>& f, std::size_t line) {
                         if (f.size() != 2) throw MalformedRow(nodes_path, line, "expected 2 fields");
                         index.emplace(f[0], g.node_count());
                         g.fips.push_back(f[0]);
                         g.new_cases.push_back(std::stoll(f[1]));
                     });
    for_each_csv_row(edges_path, {"fips_i", "fips_j"},
                     [&](const std::vector<std::string>& f, std::size_t line) {
                         if (f.size() != 2) throw MalformedRow(edges_path, line, "expected 2 fields");
                         auto a = index.find(f[0]), b = index.find(f[1]);
                         if (a == index.end() || b == index.end()) {
                             throw MalformedRow(edges_path, line, "edge endpoint not in node file");
                         }
                         g.edges.emplace_back(std::min(a->second, b->second),
                                              std::max(a->second, b->second));
                     });
    std::sort(g.edges.begin(), g.edges.end());
    g.adjacency = adjacency_from_edges(g.node_count(), g.edges);
    return g;
}

} // namespace spreadnet
