#include "spreadnet/random_forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "spreadnet/errors.hpp"

namespace spreadnet {

double RegressionTree::predict(std::span<const double> row) const {
    int i = 0;
    while (nodes[i].feature >= 0) {
        i = (row[nodes[i].feature] < nodes[i].cutpoint) ? nodes[i].left : nodes[i].right;
    }
    return nodes[i].value;
}

SplitChoice best_split(const DataView& data, std::span<const std::size_t> rows,
                       std::span<const int> features, int min_leaf) {
    SplitChoice best;
    const std::size_t n = rows.size();
    if (n < 2 * std::size_t(min_leaf)) return best;

    std::vector<std::size_t> order(rows.begin(), rows.end());
    std::vector<double> prefix_y(n + 1), prefix_y2(n + 1);

    for (int f : features) {
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double xa = data.at(a, f), xb = data.at(b, f);
            return xa != xb ? xa < xb : a < b;
        });
        prefix_y[0] = prefix_y2[0] = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double yi = data.y[order[i]];
            prefix_y[i + 1] = prefix_y[i] + yi;
            prefix_y2[i + 1] = prefix_y2[i] + yi * yi;
        }
        const double total_y = prefix_y[n], total_y2 = prefix_y2[n];

        for (std::size_t i = std::size_t(min_leaf); i + std::size_t(min_leaf) <= n; ++i) {
            const double xl = data.at(order[i - 1], f);
            const double xr = data.at(order[i], f);
            if (xl == xr) continue;
            const double nl = double(i), nr = double(n - i);
            const double sse_l = prefix_y2[i] - prefix_y[i] * prefix_y[i] / nl;
            const double sy_r = total_y - prefix_y[i];
            const double sse_r = (total_y2 - prefix_y2[i]) - sy_r * sy_r / nr;
            const double rss = sse_l + sse_r;
            if (!best.found || rss < best.rss - 1e-12) {
                best.found = true;
                best.feature = f;
                best.cutpoint = 0.5 * (xl + xr);
                best.rss = rss;
            }
        }
    }
    return best;
}

namespace {

struct BuildContext {
    const DataView& data;
    int mtry;
    int min_leaf;
    SplitMix64& rng;
    std::vector<TreeNode>& nodes;
};

double mean_y(const DataView& data, std::span<const std::size_t> rows) {
    double s = 0.0;
    for (std::size_t r : rows) s += data.y[r];
    return s / double(rows.size());
}

double node_sse(const DataView& data, std::span<const std::size_t> rows, double mean) {
    double s = 0.0;
    for (std::size_t r : rows) {
        const double d = data.y[r] - mean;
        s += d * d;
    }
    return s;
}

int build_node(BuildContext& ctx, std::vector<std::size_t>& rows) {
    const int index = int(ctx.nodes.size());
    ctx.nodes.emplace_back();
    const double mean = mean_y(ctx.data, rows);
    ctx.nodes[index].value = mean;

    if (rows.size() < 2 * std::size_t(ctx.min_leaf)) return index;

    // Sample mtry distinct features; evaluate them in ascending order so the
    // tie-break is deterministic.
    const int p = int(ctx.data.n_features);
    const int m = std::min(ctx.mtry, p);
    std::vector<int> all(p);
    std::iota(all.begin(), all.end(), 0);
    for (int i = 0; i < m; ++i) {
        const int j = i + int(ctx.rng.bounded(std::uint64_t(p - i)));
        std::swap(all[i], all[j]);
    }
    std::vector<int> chosen(all.begin(), all.begin() + m);
    std::sort(chosen.begin(), chosen.end());

    const SplitChoice split = best_split(ctx.data, rows, chosen, ctx.min_leaf);
    if (!split.found) return index;

    const double parent_sse = node_sse(ctx.data, rows, mean);
    if (parent_sse - split.rss <= 1e-12 * std::max(1.0, parent_sse)) return index;

    std::vector<std::size_t> left, right;
    left.reserve(rows.size());
    right.reserve(rows.size());
    for (std::size_t r : rows) {
        (ctx.data.at(r, split.feature) < split.cutpoint ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    ctx.nodes[index].feature = split.feature;
    ctx.nodes[index].cutpoint = split.cutpoint;
    const int l = build_node(ctx, left);
    ctx.nodes[index].left = l;
    const int r = build_node(ctx, right);
    ctx.nodes[index].right = r;
    return index;
}

} // namespace

RegressionTree fit_tree(const DataView& data, std::span<const std::size_t> rows, int mtry,
                        int min_leaf, SplitMix64& rng) {
    if (rows.empty()) throw EmptyFrame("fit_tree: no rows");
    RegressionTree tree;
    BuildContext ctx{data, mtry, min_leaf, rng, tree.nodes};
    std::vector<std::size_t> all(rows.begin(), rows.end());
    build_node(ctx, all);
    return tree;
}

ForestModel fit_forest(const DataView& data, const ForestConfig& config, int jobs) {
    if (config.n_trees < 1) throw Error("fit_forest: n_trees must be >= 1");
    if (data.n_rows == 0) throw EmptyFrame("fit_forest: empty training data");

    ForestModel model;
    model.config = config;
    if (model.config.mtry <= 0) {
        model.config.mtry = int((data.n_features + 2) / 3);
    }
    model.trees.resize(config.n_trees);

    auto fit_one = [&](int t) {
        SplitMix64 rng(mix_seed(config.seed, std::uint64_t(t)));
        std::vector<std::size_t> sample(data.n_rows);
        for (auto& s : sample) s = rng.bounded(data.n_rows);
        model.trees[t] = fit_tree(data, sample, model.config.mtry, model.config.min_leaf, rng);
    };

    if (jobs <= 1 || config.n_trees < 2) {
        for (int t = 0; t < config.n_trees; ++t) fit_one(t);
    } else {
        const int workers = std::min(jobs, config.n_trees);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (int t = w; t < config.n_trees; t += workers) fit_one(t);
            });
        }
        for (auto& th : pool) th.join();
    }
    return model;
}

double ForestModel::predict(std::span<const double> row) const {
    double s = 0.0;
    for (const auto& tree : trees) s += tree.predict(row);
    return s / double(trees.size());
}

} // namespace spreadnet
