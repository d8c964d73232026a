#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace modeswitch {

/// Flat binary tree. Internal nodes send x[feature] < threshold left.
/// Leaves (feature < 0) carry a score: a class-1 probability for
/// classification trees, an additive log-odds step for boosting trees.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;

    bool is_leaf() const { return feature < 0; }
};

struct Tree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    double predict(std::span<const double> row) const {
        int n = 0;
        while (!nodes[static_cast<std::size_t>(n)].is_leaf()) {
            const auto& node = nodes[static_cast<std::size_t>(n)];
            n = row[static_cast<std::size_t>(node.feature)] < node.threshold ? node.left : node.right;
        }
        return nodes[static_cast<std::size_t>(n)].value;
    }

    std::size_t n_leaves() const;
    std::size_t n_splits() const { return nodes.size() - n_leaves(); }
    std::size_t depth() const;
};

} // namespace modeswitch
