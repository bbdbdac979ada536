#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "spreadnet/network.hpp"
#include "spreadnet/rng.hpp"

namespace testutil {

inline std::string fixture_path(const std::string& name) {
    return std::string(SPREADNET_FIXTURE_DIR) + "/" + name;
}

/// Fresh scratch directory under the build tree.
inline std::string temp_dir(const std::string& tag) {
    const auto dir = std::filesystem::path("spreadnet_test_tmp") / tag;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

inline std::string write_file(const std::string& dir, const std::string& name,
                              const std::string& content) {
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path.string();
}

/// Synthetic graph over n nodes with the given undirected edges.
inline spreadnet::SpreadGraph make_graph(int n, std::vector<std::pair<int, int>> edges) {
    spreadnet::SpreadGraph g;
    g.date = spreadnet::Date::from_ymd(2020, 4, 11);
    for (int i = 0; i < n; ++i) {
        g.fips.push_back("f" + std::to_string(100 + i));
        g.new_cases.push_back(5);
    }
    for (auto& [a, b] : edges) {
        if (a > b) std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end());
    g.edges = std::move(edges);
    g.adjacency = spreadnet::adjacency_from_edges(n, g.edges);
    return g;
}

inline spreadnet::SpreadGraph erdos_renyi(int n, double p, spreadnet::SplitMix64& rng) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (rng.uniform01() < p) edges.emplace_back(i, j);
        }
    }
    return make_graph(n, std::move(edges));
}

/// Random graph with exactly m distinct edges.
inline spreadnet::SpreadGraph gnm_graph(int n, long long m, spreadnet::SplitMix64& rng) {
    std::vector<std::pair<int, int>> edges;
    std::vector<char> used(std::size_t(n) * n, 0);
    while ((long long)edges.size() < m) {
        const int a = int(rng.bounded(std::uint64_t(n)));
        const int b = int(rng.bounded(std::uint64_t(n)));
        if (a == b) continue;
        const int lo = std::min(a, b), hi = std::max(a, b);
        if (used[std::size_t(lo) * n + hi]) continue;
        used[std::size_t(lo) * n + hi] = 1;
        edges.emplace_back(lo, hi);
    }
    return make_graph(n, std::move(edges));
}

} // namespace testutil
