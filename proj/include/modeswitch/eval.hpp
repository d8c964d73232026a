#pragma once

#include "modeswitch/data.hpp"
#include "modeswitch/models.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace modeswitch {

// Market shares (Q0, Q1) of the two outcomes.
struct Shares {
    double q0 = 1.0;
    double q1 = 0.0;
};

// Fraction of positions where truth and predicted agree. Throws
// std::invalid_argument on a length mismatch or empty input.
double accuracy(std::span<const int> truth, std::span<const int> predicted);

// Q1 = mean(probs), Q0 = 1 - Q1. Throws std::invalid_argument for an empty
// vector or an entry outside [0, 1].
Shares market_share(std::span<const double> probs);

// |Q*0 - Q0| + |Q*1 - Q1|. Both pairs must sum to 1 within 1e-9.
double l1_norm(const Shares& observed, const Shares& predicted);

/// Scores of one segment. A segment without instances is reported with
/// present == false and every metric empty.
struct MetricReport {
    std::string segment;
    std::size_t n_instances = 0;
    bool present = false;
    std::optional<double> overall_accuracy;
    std::optional<double> true_positive_rate;  // accuracy on switchers
    std::optional<double> true_negative_rate;  // accuracy on non-switchers
    std::optional<Shares> market_share_pred;
    std::optional<Shares> market_share_obs;
    std::optional<double> l1_norm;
};

MetricReport metric_report(std::string segment, std::span<const int> truth,
                           std::span<const double> probs);

// "All" followed by one report per current-mode segment.
std::vector<MetricReport> segment_report(const Dataset& data, std::span<const double> probs);
std::vector<MetricReport> segment_report(const SoftClassifier& model, const Dataset& data);

struct CVModelResult {
    ModelKind kind = ModelKind::logit;
    std::vector<double> fold_accuracy;
    double mean_accuracy = 0.0;
};

struct CVReport {
    std::size_t k = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<std::size_t>> folds;  // held-out row indices per fold
    std::vector<CVModelResult> models;
    ModelKind selected_model = ModelKind::boost;
};

// Accuracy of `kind` fitted on every fold but `fold` and scored on `fold`.
// A fit that fails with ModelError (e.g. a class missing from the training
// folds) falls back to predicting the training majority class, with a
// warning.
double fold_accuracy(const Dataset& data, const std::vector<std::vector<std::size_t>>& folds,
                     std::size_t fold, ModelKind kind, const Hyperparams& hp,
                     std::uint64_t seed, int threads = 1);

// Plain random k-fold cross-validation. The partition comes from
// kfold_partition(N, k, seed) and is shared by every kind; every fit uses
// `seed` as its model seed. Fold fits run on up to `threads` workers.
CVReport cross_validate(const Dataset& data, std::size_t k, std::span<const ModelKind> kinds,
                        std::uint64_t seed, const Hyperparams& hp = {}, int threads = 1);

// Highest mean accuracy. Ties go to the first kind in the order boost, rf,
// bag, nn, logit, nb, cart.
ModelKind select_model(const CVReport& report);

// ---------------------------------------------------------------------------
// Export

std::string cv_report_to_json(const CVReport& report);
// model,fold,accuracy rows per model and fold, then one "mean" row per
// model and a final "selected" row.
void write_cv_csv(std::ostream& out, const CVReport& report);

std::string metric_reports_to_json(const std::vector<MetricReport>& reports);
void write_metric_csv(std::ostream& out, const std::vector<MetricReport>& reports);

} // namespace modeswitch
