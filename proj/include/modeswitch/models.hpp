#pragma once

#include "modeswitch/data.hpp"
#include "modeswitch/tree.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace modeswitch {

enum class ModelKind { logit, nb, cart, bag, rf, boost, nn };

inline constexpr std::array<ModelKind, 7> kAllModelKinds{
    ModelKind::logit, ModelKind::nb, ModelKind::cart, ModelKind::bag,
    ModelKind::rf,    ModelKind::boost, ModelKind::nn};

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view text);

struct Hyperparams {
    struct Boost {
        int n_trees = 500;
        double shrinkage = 0.062;
        int interaction_depth = 45;  // maximum number of splits per tree
        int min_obs_leaf = 10;
    } boost;
    struct Bag {
        int n_trees = 500;
        int min_obs_leaf = 1;
        bool bootstrap = true;  // false fits every tree on the training set as-is
    } bag;
    struct Rf {
        int n_trees = 600;
        int mtry = 14;
        int min_obs_leaf = 1;
        bool bootstrap = true;
    } rf;
    struct Nn {
        int hidden_units = 14;
        double weight_decay = 0.1;
        int max_iter = 1000;
        double tol = 1e-6;           // gradient-norm stopping threshold
        double initial_step = 1.0;
    } nn;
    struct Cart {
        int min_obs_leaf = 10;
        int max_leaves = 8;
    } cart;
    struct Logit {
        int max_iter = 100;
        double tol = 1e-8;
    } logit;
    struct Nb {
        double variance_floor = 1e-9;
    } nb;
};

// Throws std::invalid_argument for a non-positive count, shrinkage outside
// (0, 1], or other out-of-range settings.
void validate(const Hyperparams& hp);

// ---------------------------------------------------------------------------
// Fitted parameters, one bundle per model family

struct LogitParams {
    double intercept = 0.0;
    std::vector<double> coef;
    int iterations = 0;
    bool converged = false;
};

struct NbFeature {
    FeatureKind kind = FeatureKind::continuous;
    std::array<double, 2> mean{};      // continuous: per-class mean
    std::array<double, 2> variance{};  // continuous: per-class floored variance
    std::vector<double> levels;        // binary / discrete: observed values
    std::array<std::vector<double>, 2> level_prob;  // P(level | class)
};

struct NbParams {
    double prior1 = 0.5;
    std::vector<NbFeature> features;
};

// CART (one tree), BAG and RF (many). Prediction is the mean leaf probability.
struct ForestParams {
    std::vector<Tree> trees;
};

struct BoostParams {
    double init_score = 0.0;  // log-odds of the training base rate
    double shrinkage = 0.1;
    std::vector<Tree> trees;
    std::vector<double> train_deviance;  // after 0, 1, ..., n_trees stages
};

struct NnParams {
    int hidden_units = 0;
    std::vector<double> input_mean;
    std::vector<double> input_scale;
    // Layout: hidden weights (hidden x p, row-major), hidden biases (hidden),
    // output weights (hidden), output bias.
    std::vector<double> weights;
    std::vector<double> train_loss;  // penalized loss after each accepted step
    int iterations = 0;
};

using ModelParams = std::variant<LogitParams, NbParams, ForestParams, BoostParams, NnParams>;

/// A fitted soft classifier: class-1 probability for a feature row.
class SoftClassifier {
public:
    SoftClassifier(ModelKind kind, Hyperparams hp, ModelParams params,
                   std::vector<FeatureSpec> feature_specs);

    ModelKind kind() const { return kind_; }
    const Hyperparams& hyperparams() const { return hp_; }
    const ModelParams& params() const { return params_; }
    const std::vector<FeatureSpec>& feature_specs() const { return specs_; }
    std::size_t n_features() const { return specs_.size(); }

    // Throws std::invalid_argument when row.size() != n_features().
    double predict_proba(std::span<const double> row) const;
    double predict_proba_class0(std::span<const double> row) const { return 1.0 - predict_proba(row); }
    // Argmax of (1 - p, p); p == 0.5 resolves to class 1.
    int predict_class(std::span<const double> row) const;

    std::vector<double> predict_proba(const Dataset& data) const;
    std::vector<int> predict_class(const Dataset& data) const;

private:
    ModelKind kind_;
    Hyperparams hp_;
    ModelParams params_;
    std::vector<FeatureSpec> specs_;
};

inline int class_from_probability(double p1) { return p1 >= 0.5 ? 1 : 0; }

// ---------------------------------------------------------------------------
// Learners

SoftClassifier fit_logit(const Dataset& train, const Hyperparams& hp = {});
SoftClassifier fit_nb(const Dataset& train, const Hyperparams& hp = {});
SoftClassifier fit_cart(const Dataset& train, const Hyperparams& hp = {});
// Tree t draws its bootstrap sample from Rng(derive_seed(seed, t)): N calls to
// uniform_index(N). RF then draws per-node feature subsets from the same stream.
SoftClassifier fit_bag(const Dataset& train, const Hyperparams& hp, std::uint64_t seed,
                       int threads = 1);
SoftClassifier fit_rf(const Dataset& train, const Hyperparams& hp, std::uint64_t seed,
                      int threads = 1);
SoftClassifier fit_boost(const Dataset& train, const Hyperparams& hp = {});
SoftClassifier fit_nn(const Dataset& train, const Hyperparams& hp, std::uint64_t seed);

// Dispatch on kind. Learners without randomness ignore seed.
SoftClassifier fit_model(ModelKind kind, const Dataset& train, const Hyperparams& hp,
                         std::uint64_t seed, int threads = 1);

// Log-odds of a boosted model after the first `stages` trees.
double boost_log_odds(const BoostParams& params, std::span<const double> row, std::size_t stages);

// Mean binomial deviance, -2/N * sum(y log p + (1 - y) log(1 - p)).
double binomial_deviance(std::span<const int> y, std::span<const double> log_odds);

/// Penalized network objective on standardized inputs:
/// (1/N) * [sum_i cross_entropy_i + decay * ||weights||^2].
struct NnObjective {
    std::vector<double> inputs;  // N x p, row-major, already standardized
    std::vector<int> targets;
    std::size_t n_inputs = 0;
    int hidden_units = 0;
    double decay = 0.0;

    std::size_t n_weights() const {
        const auto h = static_cast<std::size_t>(hidden_units);
        return h * n_inputs + 2 * h + 1;
    }
    // Returns the objective; writes its gradient when grad is non-empty.
    double evaluate(std::span<const double> weights, std::span<double> grad) const;
};

// ---------------------------------------------------------------------------
// Serialization (versioned JSON)

std::string model_to_json(const SoftClassifier& model);
SoftClassifier model_from_json(const std::string& text);

} // namespace modeswitch
