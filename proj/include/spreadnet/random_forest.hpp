#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spreadnet/rng.hpp"

namespace spreadnet {

/// Row-major design matrix view used by the tree learner.
struct DataView {
    const double* x = nullptr; // n_rows * n_features, row-major
    const double* y = nullptr;
    std::size_t n_rows = 0;
    std::size_t n_features = 0;

    double at(std::size_t row, std::size_t col) const { return x[row * n_features + col]; }
};

struct TreeNode {
    int feature = -1; // -1: leaf
    double cutpoint = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0; // leaf mean
};

struct RegressionTree {
    std::vector<TreeNode> nodes;
    double predict(std::span<const double> row) const;
};

struct SplitChoice {
    bool found = false;
    int feature = -1;
    double cutpoint = 0.0;
    double rss = 0.0; // sum of the two children's SSE
};

/// Best (feature, midpoint cutpoint) over the candidate features, minimizing
/// Eq.-style child RSS; both children must keep at least min_leaf rows.
/// Ties resolve to the lowest feature index, then the lowest cutpoint.
SplitChoice best_split(const DataView& data, std::span<const std::size_t> rows,
                       std::span<const int> features, int min_leaf);

/// CART with midpoint cutpoints: split while node size >= 2*min_leaf and the
/// best split strictly reduces RSS; leaves predict their training mean.
RegressionTree fit_tree(const DataView& data, std::span<const std::size_t> rows, int mtry,
                        int min_leaf, SplitMix64& rng);

struct ForestConfig {
    int n_trees = 500;
    int mtry = 0; // 0 => ceil(n_features / 3)
    int min_leaf = 5;
    std::uint64_t seed = 0;
};

struct ForestModel {
    std::vector<RegressionTree> trees;
    ForestConfig config;

    /// Mean of per-tree predictions, summed in tree-index order.
    double predict(std::span<const double> row) const;
};

/// Each tree trains on a bootstrap resample (with replacement, same size)
/// with its own RNG stream derived from (seed, tree index), so serial and
/// parallel fits are bit-identical.
ForestModel fit_forest(const DataView& data, const ForestConfig& config, int jobs = 1);

} // namespace spreadnet
