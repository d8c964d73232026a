#include "modeswitch/error.hpp"
#include "modeswitch/eval.hpp"
#include "modeswitch/parallel.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace modeswitch {

double fold_accuracy(const Dataset& data, const std::vector<std::vector<std::size_t>>& folds,
                     std::size_t fold, ModelKind kind, const Hyperparams& hp,
                     std::uint64_t seed, int threads) {
    if (fold >= folds.size()) throw std::invalid_argument("fold index out of range");
    std::vector<std::size_t> train_rows;
    for (std::size_t f = 0; f < folds.size(); ++f)
        if (f != fold) train_rows.insert(train_rows.end(), folds[f].begin(), folds[f].end());
    std::sort(train_rows.begin(), train_rows.end());
    const Dataset train = data.subset(train_rows);
    const Dataset held_out = data.subset(folds[fold]);

    std::vector<int> predicted;
    try {
        predicted = fit_model(kind, train, hp, seed, threads).predict_class(held_out);
    } catch (const ModelError& e) {
        warn("cv: " + std::string(to_string(kind)) + " fold " + std::to_string(fold + 1) +
             " failed (" + e.what() + "); using the majority class");
        std::size_t ones = 0;
        for (int y : train.responses()) ones += static_cast<std::size_t>(y);
        const int majority = 2 * ones >= train.n_rows() ? 1 : 0;
        predicted.assign(held_out.n_rows(), majority);
    }
    return accuracy(held_out.responses(), predicted);
}

CVReport cross_validate(const Dataset& data, std::size_t k, std::span<const ModelKind> kinds,
                        std::uint64_t seed, const Hyperparams& hp, int threads) {
    if (k < 2) throw std::invalid_argument("cross_validate: k must be at least 2");
    if (kinds.empty()) throw std::invalid_argument("cross_validate: no model kinds given");
    if (data.n_rows() < k) throw std::invalid_argument("cross_validate: fewer rows than folds");
    validate(hp);

    CVReport report;
    report.k = k;
    report.seed = seed;
    report.folds = kfold_partition(data.n_rows(), k, seed);

    // One slot per (kind, fold); concurrency is across slots, each fit is serial.
    const std::size_t jobs = kinds.size() * k;
    std::vector<double> scores(jobs, 0.0);
    parallel_for(jobs, threads, [&](std::size_t j) {
        scores[j] = fold_accuracy(data, report.folds, j % k, kinds[j / k], hp, seed, 1);
    });

    for (std::size_t m = 0; m < kinds.size(); ++m) {
        CVModelResult r;
        r.kind = kinds[m];
        r.fold_accuracy.assign(scores.begin() + static_cast<std::ptrdiff_t>(m * k),
                               scores.begin() + static_cast<std::ptrdiff_t>((m + 1) * k));
        double sum = 0.0;
        for (double a : r.fold_accuracy) sum += a;
        r.mean_accuracy = sum / static_cast<double>(k);
        report.models.push_back(std::move(r));
    }
    report.selected_model = select_model(report);
    return report;
}

ModelKind select_model(const CVReport& report) {
    if (report.models.empty()) throw std::invalid_argument("select_model: empty report");
    constexpr std::array<ModelKind, 7> preference{ModelKind::boost, ModelKind::rf,    ModelKind::bag,
                                                  ModelKind::nn,    ModelKind::logit, ModelKind::nb,
                                                  ModelKind::cart};
    auto rank = [&](ModelKind kind) {
        return std::find(preference.begin(), preference.end(), kind) - preference.begin();
    };
    const CVModelResult* best = &report.models.front();
    for (const auto& r : report.models)
        if (r.mean_accuracy > best->mean_accuracy ||
            (r.mean_accuracy == best->mean_accuracy && rank(r.kind) < rank(best->kind)))
            best = &r;
    return best->kind;
}

} // namespace modeswitch
