#include "modeswitch/error.hpp"
#include "modeswitch/models.hpp"
#include "modeswitch/rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace modeswitch {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double softplus(double f) { return f > 0 ? f + std::log1p(std::exp(-f)) : std::log1p(std::exp(f)); }

double sigmoid(double u) {
    return u >= 0 ? 1.0 / (1.0 + std::exp(-u)) : std::exp(u) / (1.0 + std::exp(u));
}

} // namespace

double NnObjective::evaluate(std::span<const double> weights, std::span<double> grad) const {
    const auto n = static_cast<Eigen::Index>(targets.size());
    const auto p = static_cast<Eigen::Index>(n_inputs);
    const auto h = static_cast<Eigen::Index>(hidden_units);
    if (weights.size() != n_weights()) throw std::invalid_argument("nn: weight vector has wrong length");

    const Eigen::Map<const RowMatrix> z(inputs.data(), n, p);
    const Eigen::Map<const RowMatrix> w1(weights.data(), h, p);
    const Eigen::Map<const Eigen::VectorXd> b1(weights.data() + h * p, h);
    const Eigen::Map<const Eigen::VectorXd> w2(weights.data() + h * p + h, h);
    const double b2 = weights[static_cast<std::size_t>(h * p + 2 * h)];

    Eigen::MatrixXd hidden = (z * w1.transpose()).rowwise() + b1.transpose();
    hidden = hidden.unaryExpr([](double a) { return sigmoid(a); });
    const Eigen::VectorXd out = (hidden * w2).array() + b2;

    double loss = 0.0;
    Eigen::VectorXd d_out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double y = targets[static_cast<std::size_t>(i)];
        loss += softplus(out[i]) - y * out[i];
        d_out[i] = sigmoid(out[i]) - y;
    }
    const Eigen::Map<const Eigen::VectorXd> all(weights.data(), static_cast<Eigen::Index>(weights.size()));
    const double inv_n = 1.0 / static_cast<double>(n);
    const double objective = (loss + decay * all.squaredNorm()) * inv_n;

    if (!grad.empty()) {
        const Eigen::MatrixXd d_hidden =
            ((d_out * w2.transpose()).array() * hidden.array() * (1.0 - hidden.array())).matrix();
        Eigen::Map<RowMatrix> g_w1(grad.data(), h, p);
        Eigen::Map<Eigen::VectorXd> g_b1(grad.data() + h * p, h);
        Eigen::Map<Eigen::VectorXd> g_w2(grad.data() + h * p + h, h);
        g_w1 = d_hidden.transpose() * z;
        g_b1 = d_hidden.colwise().sum().transpose();
        g_w2 = hidden.transpose() * d_out;
        grad[static_cast<std::size_t>(h * p + 2 * h)] = d_out.sum();
        Eigen::Map<Eigen::VectorXd> g(grad.data(), static_cast<Eigen::Index>(grad.size()));
        g = (g + 2.0 * decay * all) * inv_n;
    }
    return objective;
}

// Full-batch gradient descent. A step that does not decrease the objective
// is halved and retried; an accepted step grows the next one by 10%.
SoftClassifier fit_nn(const Dataset& train, const Hyperparams& hp, std::uint64_t seed) {
    validate(hp);
    const std::size_t n = train.n_rows(), p = train.n_features();
    if (n == 0) throw ModelError("nn: empty training set");

    NnParams params;
    params.hidden_units = hp.nn.hidden_units;
    params.input_mean.assign(p, 0.0);
    params.input_scale.assign(p, 1.0);
    for (std::size_t t = 0; t < p; ++t) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += train.at(i, t);
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) ss += (train.at(i, t) - mean) * (train.at(i, t) - mean);
        const double sd = std::sqrt(ss / static_cast<double>(n));
        params.input_mean[t] = mean;
        params.input_scale[t] = sd > 0.0 ? sd : 1.0;
    }

    NnObjective objective;
    objective.n_inputs = p;
    objective.hidden_units = hp.nn.hidden_units;
    objective.decay = hp.nn.weight_decay;
    objective.targets = train.responses();
    objective.inputs.resize(n * p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < p; ++t)
            objective.inputs[i * p + t] = (train.at(i, t) - params.input_mean[t]) / params.input_scale[t];

    Rng rng(seed);
    std::vector<double> w(objective.n_weights());
    for (auto& v : w) v = rng.uniform() - 0.5;

    std::vector<double> grad(w.size()), trial(w.size()), trial_grad(w.size());
    double loss = objective.evaluate(w, grad);
    if (!std::isfinite(loss)) {
        std::ostringstream msg;
        msg << "nn: non-finite initial loss (" << loss << ") with " << n << " rows, " << p << " inputs";
        throw ModelError(msg.str());
    }
    params.train_loss.push_back(loss);

    double step = hp.nn.initial_step;
    for (int iter = 0; iter < hp.nn.max_iter; ++iter) {
        double gnorm = 0.0;
        for (double g : grad) gnorm += g * g;
        if (std::sqrt(gnorm) < hp.nn.tol) break;

        bool accepted = false;
        for (int halving = 0; halving < 60; ++halving) {
            for (std::size_t k = 0; k < w.size(); ++k) trial[k] = w[k] - step * grad[k];
            const double trial_loss = objective.evaluate(trial, trial_grad);
            if (std::isfinite(trial_loss) && trial_loss <= loss) {
                w.swap(trial);
                grad.swap(trial_grad);
                loss = trial_loss;
                step *= 1.1;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        params.train_loss.push_back(loss);
        params.iterations = iter + 1;
    }
    if (!std::isfinite(loss)) throw ModelError("nn: non-finite loss after training");
    params.weights = std::move(w);
    return SoftClassifier(ModelKind::nn, hp, std::move(params), train.specs());
}

} // namespace modeswitch
