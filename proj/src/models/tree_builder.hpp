#pragma once

#include "modeswitch/data.hpp"
#include "modeswitch/rng.hpp"
#include "modeswitch/tree.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace modeswitch::detail {

/// Column-major copy of a dataset plus, per feature, the row indices sorted
/// by value (ties by row index). Built once per fit and shared read-only by
/// every tree grown from it.
struct PresortedData {
    std::size_t n_rows = 0;
    std::size_t n_features = 0;
    std::vector<std::vector<double>> columns;
    std::vector<std::vector<std::uint32_t>> sorted_rows;

    explicit PresortedData(const Dataset& data);
};

enum class SplitCriterion {
    gini,           // classification; target is y in {0, 1}, leaf = class-1 fraction
    least_squares,  // regression on target; leaf = sum(target) / sum(hessian)
};

struct GrowOptions {
    SplitCriterion criterion = SplitCriterion::gini;
    int min_obs_leaf = 1;
    int max_leaves = 0;  // 0: unlimited
    int mtry = 0;        // 0 or >= p: every feature at every split
};

/// Greedy binary tree grower.
///
/// Each node owns the same contiguous range [lo, hi) in every per-feature
/// sorted array, so a split scans one range per feature and stably
/// partitions it in place. Nodes are expanded best-gain first; with no leaf
/// cap the result equals depth-first growth. Candidate thresholds are
/// midpoints between consecutive distinct values, scanned by ascending
/// feature then ascending threshold, and only a strictly larger gain
/// replaces the incumbent.
class TreeGrower {
public:
    explicit TreeGrower(const PresortedData& data);

    // counts[r] is the multiplicity of row r in the training sample (0
    // excludes it). hessian is only read for least_squares. rng is required
    // when options.mtry restricts the candidate features.
    Tree grow(std::span<const std::uint32_t> counts, std::span<const double> target,
              std::span<const double> hessian, const GrowOptions& options, Rng* rng);

    // Leaf node index of every row after the last grow() call (-1 for rows
    // with zero multiplicity). Boosting uses it to update training scores.
    const std::vector<int>& row_leaf() const { return row_leaf_; }

private:
    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double gain = 0.0;
        std::size_t n_left = 0;
    };

    Split best_split(std::size_t lo, std::size_t hi, double n, double sum,
                     const GrowOptions& options, Rng* rng);

    const PresortedData& data_;
    std::vector<std::vector<std::uint32_t>> order_;  // per feature, sample rows
    std::vector<std::uint32_t> scratch_;
    std::vector<char> goes_left_;
    std::vector<int> feature_pool_;
    std::vector<int> row_leaf_;
    std::span<const double> target_;
    std::span<const double> hessian_;
};

// Bootstrap multiplicities: n draws of uniform_index(n).
std::vector<std::uint32_t> bootstrap_counts(std::size_t n, Rng& rng);

} // namespace modeswitch::detail
