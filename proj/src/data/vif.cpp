#include "modeswitch/data.hpp"
#include "modeswitch/error.hpp"

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>

namespace modeswitch {

std::vector<double> vif(const Dataset& data) {
    const auto n = static_cast<Eigen::Index>(data.n_rows());
    const auto p = static_cast<Eigen::Index>(data.n_features());
    if (p < 2) throw std::invalid_argument("VIF needs at least two features");

    Eigen::MatrixXd x(n, p);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index t = 0; t < p; ++t)
            x(i, t) = data.at(static_cast<std::size_t>(i), static_cast<std::size_t>(t));

    for (Eigen::Index t = 0; t < p; ++t) {
        const double first = x(0, t);
        if ((x.col(t).array() == first).all())
            throw DataError("VIF undefined: column " + data.spec(static_cast<std::size_t>(t)).name +
                            " is constant");
    }

    std::vector<double> out(static_cast<std::size_t>(p));
    Eigen::MatrixXd design(n, p);  // intercept + the other p - 1 columns
    design.col(0).setOnes();
    for (Eigen::Index t = 0; t < p; ++t) {
        Eigen::Index c = 1;
        for (Eigen::Index s = 0; s < p; ++s)
            if (s != t) design.col(c++) = x.col(s);

        const Eigen::VectorXd y = x.col(t);
        const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(y);
        const double ssr = (y - design * beta).squaredNorm();
        const double sst = (y.array() - y.mean()).matrix().squaredNorm();
        const double r2 = 1.0 - ssr / sst;
        out[static_cast<std::size_t>(t)] =
            r2 >= 1.0 - 1e-12 ? std::numeric_limits<double>::infinity() : 1.0 / (1.0 - r2);
    }
    return out;
}

} // namespace modeswitch
