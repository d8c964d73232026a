#include "modeswitch/error.hpp"
#include "modeswitch/models.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace modeswitch {

namespace {

double log_likelihood(const Eigen::VectorXd& eta, const Eigen::VectorXd& y) {
    double ll = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        const double f = eta[i];
        const double softplus = f > 0 ? f + std::log1p(std::exp(-f)) : std::log1p(std::exp(f));
        ll += y[i] * f - softplus;
    }
    return ll;
}

Eigen::VectorXd sigmoid(const Eigen::VectorXd& eta) {
    Eigen::VectorXd p(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        const double u = eta[i];
        p[i] = u >= 0 ? 1.0 / (1.0 + std::exp(-u)) : std::exp(u) / (1.0 + std::exp(u));
    }
    return p;
}

} // namespace

// Newton-Raphson (IRLS) on the binomial log-likelihood with step halving.
SoftClassifier fit_logit(const Dataset& train, const Hyperparams& hp) {
    validate(hp);
    const auto n = static_cast<Eigen::Index>(train.n_rows());
    const auto p = static_cast<Eigen::Index>(train.n_features());
    if (n == 0) throw ModelError("logit: empty training set");

    Eigen::MatrixXd x(n, p + 1);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        const auto row = train.row(static_cast<std::size_t>(i));
        for (Eigen::Index t = 0; t < p; ++t) x(i, t + 1) = row[static_cast<std::size_t>(t)];
        y[i] = train.response(static_cast<std::size_t>(i));
    }

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p + 1);
    Eigen::VectorXd eta = x * beta;
    double ll = log_likelihood(eta, y);
    LogitParams params;
    bool stalled = false;
    for (int iter = 0; iter < hp.logit.max_iter; ++iter) {
        const Eigen::VectorXd prob = sigmoid(eta);
        const Eigen::VectorXd grad = x.transpose() * (y - prob);
        if (grad.lpNorm<Eigen::Infinity>() == 0.0) {
            params.converged = true;
            break;
        }
        const Eigen::VectorXd w = prob.array() * (1.0 - prob.array());
        const Eigen::MatrixXd hessian = x.transpose() * w.asDiagonal() * x;
        Eigen::VectorXd step;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(hessian);
        if (ldlt.info() == Eigen::Success && ldlt.isPositive() &&
            ldlt.vectorD().minCoeff() > 1e-12 * std::max(1.0, ldlt.vectorD().maxCoeff())) {
            step = ldlt.solve(grad);
        } else {
            step = hessian.completeOrthogonalDecomposition().solve(grad);
        }

        bool accepted = false;
        double scale = 1.0;
        for (int halving = 0; halving < 50; ++halving, scale *= 0.5) {
            const Eigen::VectorXd candidate = beta + scale * step;
            const Eigen::VectorXd candidate_eta = x * candidate;
            const double candidate_ll = log_likelihood(candidate_eta, y);
            if (std::isfinite(candidate_ll) && candidate_ll >= ll) {
                // relative deviance change, as in glm
                params.converged = (candidate_ll - ll) / (2.0 * std::fabs(candidate_ll) + 0.1) < hp.logit.tol;
                beta = candidate;
                eta = candidate_eta;
                ll = candidate_ll;
                accepted = true;
                break;
            }
        }
        params.iterations = iter + 1;
        if (!accepted) {
            stalled = true;
            break;
        }
        if (params.converged) break;
    }
    if (!params.converged)
        warn(std::string("logit: no convergence after ") +
             std::to_string(params.iterations) + " iterations" +
             (stalled ? " (line search stalled)" : " (possible separation)"));

    params.intercept = beta[0];
    params.coef.assign(beta.data() + 1, beta.data() + beta.size());
    return SoftClassifier(ModelKind::logit, hp, std::move(params), train.specs());
}

} // namespace modeswitch
