#include "spreadnet/motifs.hpp"

#include <algorithm>
#include <bit>
#include <thread>

namespace spreadnet {

namespace {

/// Fixed-width bitset adjacency rows; intersections drive all common-
/// neighborhood counting below.
struct BitRows {
    int n = 0;
    int words = 0;
    std::vector<std::uint64_t> bits; // n rows of `words` words

    explicit BitRows(const SpreadGraph& g) : n(g.node_count()) {
        words = (n + 63) / 64;
        bits.assign(std::size_t(n) * words, 0);
        for (const auto& [i, j] : g.edges) {
            set(i, j);
            set(j, i);
        }
    }
    void set(int row, int col) {
        bits[std::size_t(row) * words + col / 64] |= (1ULL << (col % 64));
    }
    bool get(int row, int col) const {
        return bits[std::size_t(row) * words + col / 64] >> (col % 64) & 1;
    }
    const std::uint64_t* row(int r) const { return bits.data() + std::size_t(r) * words; }

    long long intersect_count(int a, int b) const {
        const std::uint64_t* ra = row(a);
        const std::uint64_t* rb = row(b);
        long long c = 0;
        for (int w = 0; w < words; ++w) c += std::popcount(ra[w] & rb[w]);
        return c;
    }
};

long long choose2(long long k) { return k < 2 ? 0 : k * (k - 1) / 2; }
long long choose3(long long k) { return k < 3 ? 0 : k * (k - 1) * (k - 2) / 6; }

struct TetradNonInduced {
    long long p4 = 0;      // paths on 4 vertices (3 edges), as subgraphs
    long long claw = 0;    // K1,3
    long long c4 = 0;      // 4-cycles
    long long paw = 0;     // triangle + pendant
    long long diamond = 0; // two triangles sharing an edge
    long long k4 = 0;      // 4-cliques
};

std::array<long long, 6> induced_from_non_induced(const TetradNonInduced& s) {
    // Peel supergraph embeddings from each non-induced count, densest first.
    const long long m6 = s.k4;
    const long long m5 = s.diamond - 6 * m6;
    const long long m3 = s.c4 - m5 - 3 * m6;
    const long long m4 = s.paw - 4 * m5 - 12 * m6;
    const long long m2 = s.claw - m4 - 2 * m5 - 4 * m6;
    const long long m1 = s.p4 - 4 * m3 - 2 * m4 - 6 * m5 - 12 * m6;
    return {m1, m2, m3, m4, m5, m6};
}

struct FastCounts {
    long long triangles = 0;
    long long wedges = 0;
    TetradNonInduced tet;
};

FastCounts fast_counts(const SpreadGraph& g) {
    FastCounts out;
    const int n = g.node_count();
    if (n == 0) return out;
    const BitRows rows(g);

    std::vector<long long> deg(n);
    for (int v = 0; v < n; ++v) deg[v] = (long long)g.adjacency[v].size();
    for (int v = 0; v < n; ++v) out.wedges += choose2(deg[v]);

    // Per-edge common neighborhoods: triangles, P4s, paws, diamonds.
    std::vector<long long> tri_incidence(n, 0); // 2 * (#triangles at v)
    long long tri_edge_sum = 0;
    for (const auto& [u, v] : g.edges) {
        const long long t = rows.intersect_count(u, v);
        tri_edge_sum += t;
        tri_incidence[u] += t;
        tri_incidence[v] += t;
        out.tet.p4 += (deg[u] - 1) * (deg[v] - 1);
        out.tet.diamond += choose2(t);
    }
    out.triangles = tri_edge_sum / 3;
    out.tet.p4 -= 3 * out.triangles;
    for (int v = 0; v < n; ++v) {
        out.tet.claw += choose3(deg[v]);
        out.tet.paw += (tri_incidence[v] / 2) * (deg[v] - 2);
    }

    // 4-cycles via co-degrees: each cycle is counted once per diagonal pair.
    long long codeg_pairs = 0;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            codeg_pairs += choose2(rows.intersect_count(u, v));
        }
    }
    out.tet.c4 = codeg_pairs / 2;

    // K4: for each edge (u,v), adjacent pairs among common neighbors above v.
    std::vector<std::uint64_t> mask(rows.words);
    for (const auto& [u, v] : g.edges) {
        const std::uint64_t* ru = rows.row(u);
        const std::uint64_t* rv = rows.row(v);
        for (int w = 0; w < rows.words; ++w) mask[w] = ru[w] & rv[w];
        // keep only indices > v
        mask[v / 64] &= ~((v % 64 == 63) ? ~0ULL : ((1ULL << (v % 64 + 1)) - 1));
        for (int w = 0; w < v / 64; ++w) mask[w] = 0;
        for (int w = 0; w < rows.words; ++w) {
            std::uint64_t bitsw = mask[w];
            while (bitsw) {
                const int x = w * 64 + std::countr_zero(bitsw);
                bitsw &= bitsw - 1;
                const std::uint64_t* rx = rows.row(x);
                // adjacent partners within the masked set, above x
                for (int w2 = w; w2 < rows.words; ++w2) {
                    std::uint64_t m2 = mask[w2] & rx[w2];
                    if (w2 == w) {
                        m2 &= (x % 64 == 63) ? 0ULL : ~((1ULL << (x % 64 + 1)) - 1);
                    }
                    out.tet.k4 += std::popcount(m2);
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Enumeration backend: ESU-style connected induced subgraph enumeration.
// Each connected k-subset is visited exactly once; subsets are classified by
// induced edge count (plus max degree to split the two 4-edge classes).
// ---------------------------------------------------------------------------

struct EnumCounts {
    long long t1 = 0, t2 = 0;
    std::array<long long, 6> m{};
};

class EsuEnumerator {
public:
    EsuEnumerator(const SpreadGraph& g, int k) : g_(g), k_(k), rows_(g), in_sub_(g.node_count(), 0) {}

    EnumCounts run() {
        const int n = g_.node_count();
        for (int v = 0; v < n; ++v) {
            sub_.assign(1, v);
            in_sub_[v] = 1;
            std::vector<int> ext;
            for (int u : g_.adjacency[v]) {
                if (u > v) ext.push_back(u);
            }
            extend(ext, v);
            in_sub_[v] = 0;
        }
        return counts_;
    }

private:
    // Every ext member is adjacent to the current subgraph, so the exclusive
    // neighborhood test below also keeps extension candidates unique.
    void extend(std::vector<int> ext, int root) {
        if ((int)sub_.size() == k_) {
            classify();
            return;
        }
        while (!ext.empty()) {
            const int w = ext.back();
            ext.pop_back();

            std::vector<int> next_ext = ext;
            for (int u : g_.adjacency[w]) {
                if (u <= root || in_sub_[u]) continue;
                bool adjacent_to_sub = false;
                for (int s : sub_) {
                    if (rows_.get(s, u)) {
                        adjacent_to_sub = true;
                        break;
                    }
                }
                if (!adjacent_to_sub) next_ext.push_back(u);
            }

            sub_.push_back(w);
            in_sub_[w] = 1;
            extend(std::move(next_ext), root);
            in_sub_[w] = 0;
            sub_.pop_back();
        }
    }

    void classify() {
        int edges = 0, maxdeg = 0;
        for (std::size_t a = 0; a < sub_.size(); ++a) {
            int d = 0;
            for (std::size_t b = 0; b < sub_.size(); ++b) {
                if (a != b && rows_.get(sub_[a], sub_[b])) ++d;
            }
            edges += d;
            maxdeg = std::max(maxdeg, d);
        }
        edges /= 2;
        if (k_ == 3) {
            if (edges == 2) ++counts_.t1;
            else ++counts_.t2; // connected 3-set with 3 edges
        } else {
            switch (edges) {
                case 3: ++(maxdeg == 3 ? counts_.m[1] : counts_.m[0]); break; // star vs path
                case 4: ++(maxdeg == 3 ? counts_.m[3] : counts_.m[2]); break; // paw vs cycle
                case 5: ++counts_.m[4]; break;
                default: ++counts_.m[5]; break;
            }
        }
    }

    const SpreadGraph& g_;
    int k_;
    BitRows rows_;
    std::vector<char> in_sub_;
    std::vector<int> sub_;
    EnumCounts counts_;
};

} // namespace

std::pair<long long, long long> census_triads(const SpreadGraph& g, CensusBackend backend) {
    if (backend == CensusBackend::enumerate) {
        const EnumCounts c = EsuEnumerator(g, 3).run();
        return {c.t1, c.t2};
    }
    const FastCounts c = fast_counts(g);
    return {c.wedges - 3 * c.triangles, c.triangles};
}

std::array<long long, 6> census_tetrads(const SpreadGraph& g, CensusBackend backend) {
    if (backend == CensusBackend::enumerate) {
        return EsuEnumerator(g, 4).run().m;
    }
    return induced_from_non_induced(fast_counts(g).tet);
}

MotifCensus census_graph(const SpreadGraph& g, CensusBackend backend) {
    MotifCensus out;
    out.date = g.date;
    if (backend == CensusBackend::enumerate) {
        const EnumCounts c3 = EsuEnumerator(g, 3).run();
        out.T1 = c3.t1;
        out.T2 = c3.t2;
        out.M = EsuEnumerator(g, 4).run().m;
        return out;
    }
    const FastCounts c = fast_counts(g);
    out.T1 = c.wedges - 3 * c.triangles;
    out.T2 = c.triangles;
    out.M = induced_from_non_induced(c.tet);
    return out;
}

std::vector<DailySpreadFeatures> census_series(const std::vector<SpreadGraph>& graphs,
                                               CensusBackend backend, int jobs) {
    std::vector<DailySpreadFeatures> out(graphs.size());
    auto work = [&](std::size_t i) {
        const SpreadGraph& g = graphs[i];
        const MotifCensus c = census_graph(g, backend);
        DailySpreadFeatures& row = out[i];
        row.date = g.date;
        row.V = g.node_count();
        row.E = g.edge_count();
        row.GC = largest_component(g);
        row.T1 = c.T1;
        row.T2 = c.T2;
        row.M = c.M;
        row.TotM = c.tot_m();
    };
    if (jobs <= 1 || graphs.size() < 2) {
        for (std::size_t i = 0; i < graphs.size(); ++i) work(i);
        return out;
    }
    const int workers = std::min<int>(jobs, (int)graphs.size());
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < graphs.size(); i += workers) work(i);
        });
    }
    for (auto& t : pool) t.join();
    return out;
}

} // namespace spreadnet
