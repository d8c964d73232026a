#pragma once

#include "modeswitch/data.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace modeswitch {

/// Marginal target for one generated feature.
///
/// Continuous features are drawn from a normal truncated to [min, max] whose
/// location and scale are solved so the truncated distribution has the
/// target mean and SD; values are rounded to two decimals.
/// Discrete-ordinal features use the maximum-entropy distribution over
/// `support` (default: the integers min..max) matching the target mean and
/// SD. Binary features are Bernoulli(mean).
struct FeatureTarget {
    std::string name;
    FeatureKind kind = FeatureKind::continuous;
    std::string unit;
    double mean = 0.0;
    double sd = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::vector<double> support;
};

// coef * max(0, x - knot)
struct HingeTerm {
    std::string feature;
    double knot = 0.0;
    double coef = 0.0;
};

struct Threshold {
    std::string feature;
    double knot = 0.0;
    bool above = true;  // x > knot when true, x < knot otherwise
};

// coef when every threshold holds
struct StepTerm {
    std::vector<Threshold> when;
    double coef = 0.0;
};

// coef * x_a * x_b
struct InteractionTerm {
    std::string a;
    std::string b;
    double coef = 0.0;
};

struct UtilityTerms {
    double intercept = 0.0;
    std::map<std::string, double> linear;
    std::vector<HingeTerm> hinges;
    std::vector<StepTerm> steps;
    std::vector<InteractionTerm> interactions;
};

/// Planted switching utility: common terms plus the terms of the row's
/// current-mode segment. The switching probability is logistic(utility).
struct UtilitySpec {
    UtilityTerms common;
    std::map<std::string, UtilityTerms> segments;
};

struct SynthConfig {
    std::size_t n_rows = 8141;
    std::uint64_t seed = 42;
    std::vector<FeatureTarget> features;
    // Mode name -> share. The last mode in `mode_order` is the reference
    // (all indicators zero); the others get a Current_Mode_<name> column.
    std::vector<std::string> mode_order{"Car", "Walk", "Bike", "Bus"};
    std::map<std::string, double> mode_shares;
    UtilitySpec utility;
};

// Table-of-marginals defaults for the mode-switching survey analog.
SynthConfig default_synth_config();

// Schema produced by synthesize(config): the configured features followed by
// one indicator per non-reference mode.
Schema synth_schema(const SynthConfig& config);
Schema default_schema();

void validate(const SynthConfig& config);
Dataset synthesize(const SynthConfig& config);

// Planted utility and probability for a row laid out per synth_schema(config).
double planted_utility(const SynthConfig& config, std::span<const double> row);
double planted_probability(const SynthConfig& config, std::span<const double> row);

std::string synth_config_to_json(const SynthConfig& config);
SynthConfig synth_config_from_json(const std::string& text);

// Moment fitting used by the generator; exposed for testing.
struct TruncatedNormal {
    double mu = 0.0;
    double sigma = 1.0;
    double lo = 0.0;
    double hi = 0.0;
    double mean() const;
    double sd() const;
};
TruncatedNormal fit_truncated_normal(double mean, double sd, double lo, double hi);

// Probabilities over `support` of the max-entropy law with the given mean and SD.
std::vector<double> fit_categorical(std::span<const double> support, double mean, double sd);

} // namespace modeswitch
