#pragma once

#include "modeswitch/data.hpp"
#include "modeswitch/error.hpp"
#include "modeswitch/models.hpp"
#include "modeswitch/rng.hpp"

#include <string>
#include <vector>

namespace testutil {

using namespace modeswitch;

inline FeatureSpec spec(std::string name, FeatureKind kind = FeatureKind::continuous) {
    return FeatureSpec{std::move(name), kind, "", 0.0, 0.0};
}

// Model that returns the same probability everywhere.
inline SoftClassifier constant_model(double p, std::size_t n_features) {
    Tree tree;
    tree.nodes.push_back(TreeNode{-1, 0.0, -1, -1, p});
    std::vector<FeatureSpec> specs;
    for (std::size_t t = 0; t < n_features; ++t) specs.push_back(spec("x" + std::to_string(t)));
    return SoftClassifier(ModelKind::cart, Hyperparams{}, ForestParams{{tree}}, specs);
}

// lo when x[feature] < threshold, hi otherwise.
inline SoftClassifier stump_model(std::size_t feature, double threshold, double lo, double hi,
                                  std::vector<FeatureSpec> specs) {
    Tree tree;
    tree.nodes.push_back(TreeNode{static_cast<int>(feature), threshold, 1, 2, 0.0});
    tree.nodes.push_back(TreeNode{-1, 0.0, -1, -1, lo});
    tree.nodes.push_back(TreeNode{-1, 0.0, -1, -1, hi});
    return SoftClassifier(ModelKind::cart, Hyperparams{}, ForestParams{{tree}}, std::move(specs));
}

// Logistic model with the given intercept and coefficients.
inline SoftClassifier logit_model(double intercept, std::vector<double> coef, std::vector<FeatureSpec> specs) {
    LogitParams p;
    p.intercept = intercept;
    p.coef = std::move(coef);
    p.converged = true;
    return SoftClassifier(ModelKind::logit, Hyperparams{}, p, std::move(specs));
}

// Random dataset with n rows, p continuous features on [0, 10] rounded to
// one decimal, and labels from a noisy linear rule.
inline Dataset random_dataset(std::size_t n, std::size_t p, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<FeatureSpec> specs;
    for (std::size_t t = 0; t < p; ++t) specs.push_back(spec("x" + std::to_string(t)));
    std::vector<double> rows(n * p);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double u = 0.0;
        for (std::size_t t = 0; t < p; ++t) {
            rows[i * p + t] = std::round(rng.uniform() * 100.0) / 10.0;
            u += (t % 2 == 0 ? 1.0 : -0.5) * (rows[i * p + t] - 5.0);
        }
        y[i] = rng.uniform() < 1.0 / (1.0 + std::exp(-0.6 * u)) ? 1 : 0;
    }
    if (n >= 2) {
        y[0] = 0;
        y[1] = 1;
    }
    return Dataset(specs, rows, y);
}

// Silences warnings for the lifetime of the object and counts them.
struct WarningCapture {
    std::vector<std::string> messages;
    WarningHandler previous;
    WarningCapture() {
        previous = set_warning_handler([this](const std::string& m) { messages.push_back(m); });
    }
    ~WarningCapture() { set_warning_handler(previous); }
};

} // namespace testutil
