#include "modeswitch/data.hpp"
#include "modeswitch/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace modeswitch {

std::string_view to_string(FeatureKind kind) {
    switch (kind) {
    case FeatureKind::continuous: return "continuous";
    case FeatureKind::discrete_ordinal: return "discrete-ordinal";
    case FeatureKind::binary: return "binary";
    }
    return "continuous";
}

FeatureKind feature_kind_from_string(std::string_view text) {
    if (text == "continuous") return FeatureKind::continuous;
    if (text == "discrete-ordinal" || text == "discrete_ordinal") return FeatureKind::discrete_ordinal;
    if (text == "binary") return FeatureKind::binary;
    throw std::invalid_argument("unknown feature kind '" + std::string(text) + "'");
}

std::string Condition::label() const {
    if (terms.empty()) return "All";
    std::string out;
    for (const auto& [feature, value] : terms) {
        if (!out.empty()) out += '&';
        out += feature + '=' + format_double(value);
    }
    return out;
}

Dataset::Dataset(std::vector<FeatureSpec> specs, std::vector<double> rows,
                 std::vector<int> response, std::vector<std::string> segment_keys,
                 std::string reference_segment)
    : specs_(std::move(specs)), rows_(std::move(rows)), response_(std::move(response)),
      segment_keys_(std::move(segment_keys)), reference_segment_(std::move(reference_segment)) {
    const std::size_t p = specs_.size();
    if (p == 0) throw DataError("dataset has no features");
    if (rows_.size() != response_.size() * p)
        throw DataError("feature matrix size does not match N x p");
    for (std::size_t i = 0; i < response_.size(); ++i)
        if (response_[i] != 0 && response_[i] != 1)
            throw DataError("response not binary at row " + std::to_string(i + 1));
    for (const auto& key : segment_keys_) {
        auto it = std::find_if(specs_.begin(), specs_.end(),
                               [&](const FeatureSpec& s) { return s.name == key; });
        if (it == specs_.end()) throw DataError("segment key '" + key + "' is not a feature");
    }

    for (std::size_t t = 0; t < p; ++t) {
        FeatureSpec& spec = specs_[t];
        double lo = INFINITY, hi = -INFINITY;
        for (std::size_t i = 0; i < response_.size(); ++i) {
            const double v = rows_[i * p + t];
            if (!std::isfinite(v))
                throw DataError("non-finite value at row " + std::to_string(i + 1) + ", column " +
                                spec.name);
            if (spec.kind == FeatureKind::binary && v != 0.0 && v != 1.0)
                throw DataError("binary feature " + spec.name + " has value " + format_double(v) +
                                " at row " + std::to_string(i + 1));
            if (spec.kind == FeatureKind::discrete_ordinal && v != std::floor(v))
                throw DataError("discrete feature " + spec.name + " has non-integer value " +
                                format_double(v) + " at row " + std::to_string(i + 1));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (spec.kind == FeatureKind::binary) {
            spec.observed_min = 0.0;
            spec.observed_max = 1.0;
        } else if (response_.empty()) {
            spec.observed_min = spec.observed_max = 0.0;
        } else {
            spec.observed_min = lo;
            spec.observed_max = hi;
        }
    }
}

Schema Dataset::schema() const { return Schema{specs_, segment_keys_, reference_segment_}; }

std::optional<std::size_t> Dataset::find_feature(std::string_view name) const {
    for (std::size_t t = 0; t < specs_.size(); ++t)
        if (specs_[t].name == name) return t;
    return std::nullopt;
}

std::size_t Dataset::feature_index(std::string_view name) const {
    if (auto t = find_feature(name)) return *t;
    throw std::invalid_argument("unknown feature '" + std::string(name) + "'");
}

std::vector<double> Dataset::column(std::size_t t) const {
    std::vector<double> out(n_rows());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i, t);
    return out;
}

bool Dataset::matches(const Condition& condition, std::size_t i) const {
    for (const auto& [feature, value] : condition.terms)
        if (at(i, feature_index(feature)) != value) return false;
    return true;
}

std::vector<std::size_t> Dataset::select(const Condition& condition) const {
    std::vector<std::pair<std::size_t, double>> resolved;
    for (const auto& [feature, value] : condition.terms)
        resolved.emplace_back(feature_index(feature), value);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n_rows(); ++i) {
        bool ok = true;
        for (const auto& [t, value] : resolved)
            if (at(i, t) != value) {
                ok = false;
                break;
            }
        if (ok) out.push_back(i);
    }
    return out;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    const std::size_t p = n_features();
    std::vector<double> rows;
    rows.reserve(indices.size() * p);
    std::vector<int> response;
    response.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= n_rows()) throw std::out_of_range("subset index out of range");
        auto r = row(i);
        rows.insert(rows.end(), r.begin(), r.end());
        response.push_back(response_[i]);
    }
    return Dataset(specs_, std::move(rows), std::move(response), segment_keys_, reference_segment_);
}

std::vector<Segment> mode_segments(const Dataset& data) {
    if (data.segment_keys().empty())
        throw std::invalid_argument("dataset has no segment keys");
    std::vector<Segment> out;
    Condition reference;
    for (const auto& key : data.segment_keys()) {
        const auto cut = key.find_last_of('_');
        std::string name = cut == std::string::npos ? key : key.substr(cut + 1);
        out.push_back(Segment{std::move(name), Condition::on(key, 1.0)});
        reference.terms.emplace_back(key, 0.0);
    }
    out.push_back(Segment{data.reference_segment(), std::move(reference)});
    return out;
}

std::vector<std::size_t> segment_assignment(const Dataset& data) {
    if (data.segment_keys().empty())
        throw std::invalid_argument("dataset has no segment keys");
    std::vector<std::size_t> keys;
    for (const auto& k : data.segment_keys()) keys.push_back(data.feature_index(k));
    const std::size_t reference = keys.size();
    std::vector<std::size_t> out(data.n_rows(), reference);
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        int active = 0;
        for (std::size_t s = 0; s < keys.size(); ++s) {
            if (data.at(i, keys[s]) == 1.0) {
                ++active;
                out[i] = s;
            }
        }
        if (active > 1)
            throw DataError("row " + std::to_string(i + 1) + " has " + std::to_string(active) +
                            " active mode indicators");
    }
    return out;
}

std::int64_t CrossTab::total() const {
    std::int64_t sum = 0;
    for (const auto& c : counts) sum += c[0] + c[1];
    return sum;
}

CrossTab crosstab(const Dataset& data) {
    CrossTab tab;
    for (const auto& s : mode_segments(data)) tab.modes.push_back(s.name);
    tab.counts.assign(tab.modes.size(), {0, 0});
    const auto assignment = segment_assignment(data);
    for (std::size_t i = 0; i < data.n_rows(); ++i) ++tab.counts[assignment[i]][data.response(i)];
    return tab;
}

} // namespace modeswitch
