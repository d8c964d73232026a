#include "modeswitch/data.hpp"
#include "modeswitch/error.hpp"
#include "modeswitch/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace modeswitch {

namespace {

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.uniform_index(i)]);
}

} // namespace

SplitResult stratified_split_indices(const Dataset& data, double test_fraction,
                                     std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw std::invalid_argument("test fraction must lie in (0, 1)");

    const auto segments = mode_segments(data);
    const auto assignment = segment_assignment(data);
    std::vector<std::vector<std::size_t>> strata(segments.size());
    for (std::size_t i = 0; i < data.n_rows(); ++i) strata[assignment[i]].push_back(i);

    Rng rng(seed);
    std::vector<char> in_test(data.n_rows(), 0);
    for (std::size_t s = 0; s < strata.size(); ++s) {
        auto& stratum = strata[s];
        if (stratum.empty()) throw DataError("stratum " + segments[s].name + " is empty");
        const double share = static_cast<double>(stratum.size()) * test_fraction;
        if (share < 1.0)
            warn("stratum " + segments[s].name + " has " + std::to_string(stratum.size()) +
                 " rows, fewer than 1/test_fraction");
        // Round half up.
        const auto take = static_cast<std::size_t>(std::floor(share + 0.5));
        shuffle(stratum, rng);
        for (std::size_t j = 0; j < take && j < stratum.size(); ++j) in_test[stratum[j]] = 1;
    }

    SplitResult out;
    for (std::size_t i = 0; i < data.n_rows(); ++i)
        (in_test[i] ? out.test_indices : out.train_indices).push_back(i);
    if (out.test_indices.empty()) warn("stratified split produced an empty test set");
    return out;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& data, double test_fraction,
                                             std::uint64_t seed) {
    const auto split = stratified_split_indices(data, test_fraction, seed);
    return {data.subset(split.train_indices), data.subset(split.test_indices)};
}

std::vector<std::vector<std::size_t>> kfold_partition(std::size_t n_rows, std::size_t k,
                                                      std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("k-fold partition needs k >= 2");
    if (k > n_rows)
        throw std::invalid_argument("k-fold partition needs k <= N (k=" + std::to_string(k) +
                                    ", N=" + std::to_string(n_rows) + ")");
    std::vector<std::size_t> order(n_rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    shuffle(order, rng);

    std::vector<std::vector<std::size_t>> folds(k);
    const std::size_t base = n_rows / k, extra = n_rows % k;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t size = base + (f < extra ? 1 : 0);
        folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                        order.begin() + static_cast<std::ptrdiff_t>(pos + size));
        std::sort(folds[f].begin(), folds[f].end());
        pos += size;
    }
    return folds;
}

} // namespace modeswitch
