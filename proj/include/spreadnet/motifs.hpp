#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "spreadnet/dates.hpp"
#include "spreadnet/network.hpp"

namespace spreadnet {

/// Induced connected 3- and 4-node subgraph counts for one day's graph.
/// M1..M6 follow canonical edge-count order:
///   M1 path P4 (3 edges), M2 star K1,3 (3), M3 cycle C4 (4),
///   M4 paw (4), M5 diamond (5), M6 clique K4 (6).
struct MotifCensus {
    Date date;
    long long T1 = 0; // induced 3-path
    long long T2 = 0; // triangle
    std::array<long long, 6> M{};

    long long tot_m() const { return M[0] + M[1] + M[2] + M[3] + M[4] + M[5]; }
};

enum class CensusBackend {
    fast,     // adjacency-intersection triangles + combinatorial identities
    enumerate // explicit connected-subgraph enumeration (validation fallback)
};

std::pair<long long, long long> census_triads(const SpreadGraph& g,
                                              CensusBackend backend = CensusBackend::fast);
std::array<long long, 6> census_tetrads(const SpreadGraph& g,
                                        CensusBackend backend = CensusBackend::fast);
MotifCensus census_graph(const SpreadGraph& g, CensusBackend backend = CensusBackend::fast);

/// One output row per day: network features joined with the motif census.
struct DailySpreadFeatures {
    Date date;
    long long V = 0, E = 0, GC = 0;
    long long T1 = 0, T2 = 0;
    std::array<long long, 6> M{};
    long long TotM = 0;
};

std::vector<DailySpreadFeatures> census_series(const std::vector<SpreadGraph>& graphs,
                                               CensusBackend backend = CensusBackend::fast,
                                               int jobs = 1);

} // namespace spreadnet
