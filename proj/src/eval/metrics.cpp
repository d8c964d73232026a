#include "modeswitch/eval.hpp"

#include <cmath>
#include <stdexcept>

namespace modeswitch {

double accuracy(std::span<const int> truth, std::span<const int> predicted) {
    if (truth.size() != predicted.size())
        throw std::invalid_argument("accuracy: " + std::to_string(truth.size()) + " labels vs " +
                                    std::to_string(predicted.size()) + " predictions");
    if (truth.empty()) throw std::invalid_argument("accuracy: empty input");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += truth[i] == predicted[i];
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

Shares market_share(std::span<const double> probs) {
    if (probs.empty()) throw std::invalid_argument("market_share: empty input");
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("market_share: probability outside [0, 1]");
        sum += p;
    }
    const double q1 = sum / static_cast<double>(probs.size());
    return {1.0 - q1, q1};
}

double l1_norm(const Shares& observed, const Shares& predicted) {
    for (const Shares* s : {&observed, &predicted})
        if (!(std::fabs(s->q0 + s->q1 - 1.0) <= 1e-9) || s->q0 < -1e-9 || s->q1 < -1e-9)
            throw std::invalid_argument("l1_norm: shares must be a point of the simplex");
    return std::fabs(observed.q0 - predicted.q0) + std::fabs(observed.q1 - predicted.q1);
}

MetricReport metric_report(std::string segment, std::span<const int> truth,
                           std::span<const double> probs) {
    if (truth.size() != probs.size())
        throw std::invalid_argument("metric_report: labels and probabilities differ in length");
    MetricReport r;
    r.segment = std::move(segment);
    r.n_instances = truth.size();
    if (truth.empty()) return r;
    r.present = true;

    std::vector<int> predicted(probs.size());
    std::vector<double> observed(truth.size());
    std::size_t pos = 0, neg = 0, pos_hit = 0, neg_hit = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        predicted[i] = class_from_probability(probs[i]);
        observed[i] = truth[i];
        if (truth[i] == 1) {
            ++pos;
            pos_hit += predicted[i] == 1;
        } else {
            ++neg;
            neg_hit += predicted[i] == 0;
        }
    }
    r.overall_accuracy = accuracy(truth, predicted);
    if (pos > 0) r.true_positive_rate = static_cast<double>(pos_hit) / static_cast<double>(pos);
    if (neg > 0) r.true_negative_rate = static_cast<double>(neg_hit) / static_cast<double>(neg);
    r.market_share_pred = market_share(probs);
    r.market_share_obs = market_share(observed);
    r.l1_norm = l1_norm(*r.market_share_obs, *r.market_share_pred);
    return r;
}

std::vector<MetricReport> segment_report(const Dataset& data, std::span<const double> probs) {
    if (probs.size() != data.n_rows())
        throw std::invalid_argument("segment_report: one probability per row required");
    if (data.segment_keys().empty()) throw std::invalid_argument("segment_report: dataset has no segment keys");
    std::vector<MetricReport> out;
    out.push_back(metric_report("All", data.responses(), probs));
    for (const auto& seg : mode_segments(data)) {
        std::vector<int> y;
        std::vector<double> p;
        for (auto i : data.select(seg.condition)) {
            y.push_back(data.response(i));
            p.push_back(probs[i]);
        }
        out.push_back(metric_report(seg.name, y, p));
    }
    return out;
}

std::vector<MetricReport> segment_report(const SoftClassifier& model, const Dataset& data) {
    const auto probs = model.predict_proba(data);
    return segment_report(data, probs);
}

} // namespace modeswitch
