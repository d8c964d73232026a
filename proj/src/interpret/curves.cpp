#include "modeswitch/interpret.hpp"
#include "modeswitch/parallel.hpp"

#include <algorithm>
#include <stdexcept>

namespace modeswitch {

Grid make_grid(const Dataset& data, std::string_view feature, int points) {
    const std::size_t t = data.feature_index(feature);
    const FeatureSpec& spec = data.spec(t);
    Grid grid{spec.name, {}};
    if (data.n_rows() == 0) throw std::invalid_argument("make_grid: empty dataset");
    if (spec.kind != FeatureKind::continuous) {
        grid.values = data.column(t);
        std::sort(grid.values.begin(), grid.values.end());
        grid.values.erase(std::unique(grid.values.begin(), grid.values.end()), grid.values.end());
        return grid;
    }
    if (points < 2) throw std::invalid_argument("make_grid: need at least 2 grid points");
    const double lo = spec.observed_min, hi = spec.observed_max;
    if (lo == hi) {
        grid.values = {lo};
        return grid;
    }
    grid.values.resize(static_cast<std::size_t>(points));
    for (int j = 0; j < points; ++j)
        grid.values[static_cast<std::size_t>(j)] = lo + (hi - lo) * j / (points - 1);
    grid.values.back() = hi;
    return grid;
}

namespace {

CurveFamily evaluate(const SoftClassifier& model, const Dataset& data, const Grid& grid,
                     const std::optional<Condition>& condition, bool keep_curves, int threads) {
    const std::size_t t = data.feature_index(grid.feature);
    if (grid.values.empty()) throw std::invalid_argument("grid for '" + grid.feature + "' is empty");
    CurveFamily family;
    family.grid = grid;
    family.condition = condition;
    family.instance_ids = condition ? data.select(*condition) : data.select(Condition{});
    if (family.instance_ids.empty()) throw std::invalid_argument("no instances satisfy condition");

    const std::size_t n = family.instance_ids.size(), m = grid.values.size();
    std::vector<std::vector<double>> curves(n, std::vector<double>(m));
    parallel_for(n, threads, [&](std::size_t k) {
        const auto src = data.row(family.instance_ids[k]);
        std::vector<double> row(src.begin(), src.end());
        for (std::size_t j = 0; j < m; ++j) {
            row[t] = grid.values[j];
            curves[k][j] = model.predict_proba(row);
        }
    });

    family.average.assign(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) sum += curves[k][j];
        family.average[j] = sum / static_cast<double>(n);
    }
    if (keep_curves) family.curves = std::move(curves);
    return family;
}

} // namespace

CurveFamily ice(const SoftClassifier& model, const Dataset& data, const Grid& grid,
                const std::optional<Condition>& condition, int threads) {
    return evaluate(model, data, grid, condition, true, threads);
}

CurveFamily cipdp(const SoftClassifier& model, const Dataset& data, const Grid& grid,
                  const Condition& condition, int threads) {
    return evaluate(model, data, grid, condition, true, threads);
}

CurveFamily pdp(const SoftClassifier& model, const Dataset& data, const Grid& grid, int threads) {
    return evaluate(model, data, grid, std::nullopt, false, threads);
}

CurveFamily cpdp(const SoftClassifier& model, const Dataset& data, const Grid& grid,
                 const Condition& condition, int threads) {
    return evaluate(model, data, grid, condition, false, threads);
}

CurveFamily center_curves(const CurveFamily& family, std::size_t anchor) {
    if (anchor >= family.grid.values.size())
        throw std::invalid_argument("center_curves: anchor index " + std::to_string(anchor) + " outside grid");
    CurveFamily out = family;
    for (auto& curve : out.curves) {
        const double base = curve[anchor];
        for (double& v : curve) v -= base;
    }
    const double base = out.average[anchor];
    for (double& v : out.average) v -= base;
    out.centered = true;
    out.anchor = anchor;
    return out;
}

double global_slope(const CurveFamily& family) {
    if (family.centered) throw std::invalid_argument("global_slope: family is centered");
    const auto& x = family.grid.values;
    if (x.size() < 2 || x.back() == x.front())
        throw std::invalid_argument("global_slope: grid for '" + family.grid.feature + "' has zero width");
    return (family.average.back() - family.average.front()) / (x.back() - x.front());
}

} // namespace modeswitch
