#pragma once

#include "modeswitch/data.hpp"
#include "modeswitch/models.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace modeswitch {

/// Evaluation points for one feature, ascending.
struct Grid {
    std::string feature;
    std::vector<double> values;
};

// Continuous features: `points` equally spaced values spanning the observed
// range (one value when the range is degenerate). Discrete and binary
// features: the sorted distinct observed values.
Grid make_grid(const Dataset& data, std::string_view feature, int points = 50);

/// ICE / CIPDP curves and their PDP / CPDP average.
struct CurveFamily {
    Grid grid;
    std::optional<Condition> condition;
    std::vector<std::size_t> instance_ids;    // rows of the selected population
    std::vector<std::vector<double>> curves;  // one per instance; empty for pdp/cpdp
    std::vector<double> average;
    bool centered = false;
    std::size_t anchor = 0;
};

// One curve per selected instance: the model's class-1 probability with the
// grid feature set to each grid value and every other feature left at the
// instance's own values. average[j] is the mean of curves[.][j], summed in
// instance order. Throws std::invalid_argument when the condition selects
// nothing ("no instances satisfy condition") or the grid feature is unknown.
CurveFamily ice(const SoftClassifier& model, const Dataset& data, const Grid& grid,
                const std::optional<Condition>& condition = std::nullopt, int threads = 1);
// ice() restricted to the condition; CIPDP.
CurveFamily cipdp(const SoftClassifier& model, const Dataset& data, const Grid& grid,
                  const Condition& condition, int threads = 1);
// Same computation, keeping only the average.
CurveFamily pdp(const SoftClassifier& model, const Dataset& data, const Grid& grid, int threads = 1);
CurveFamily cpdp(const SoftClassifier& model, const Dataset& data, const Grid& grid,
                 const Condition& condition, int threads = 1);

// Subtracts each curve's (and the average's) value at grid index `anchor`.
CurveFamily center_curves(const CurveFamily& family, std::size_t anchor = 0);

// (average at x_max - average at x_min) / (x_max - x_min) on an uncentered
// family.
double global_slope(const CurveFamily& family);

enum class DeltaMode {
    unit,      // x + delta
    fraction,  // x * (1 + delta)
};

// Rows whose perturbed value of `feature` stays inside the feature's
// observed range, ascending.
std::vector<std::size_t> in_range_filter(const Dataset& data, std::string_view feature, double delta,
                                         DeltaMode mode);

enum class EffectKind { marginal, elasticity };
std::string_view to_string(EffectKind kind);

struct EffectRow {
    std::string feature;
    double delta = 0.0;
    std::string segment;  // "All" or a current-mode name
    EffectKind kind = EffectKind::marginal;
    std::optional<double> value;  // raw fraction; empty when nothing is in range
    std::size_t n_in_range = 0;
};

// [Q1(x_t + delta) - Q1(x)] / |delta| over rows matching the condition and
// the unit in-range filter.
EffectRow marginal_effect(const SoftClassifier& model, const Dataset& data, std::string_view feature,
                          double delta, const std::optional<Condition>& condition = std::nullopt,
                          int threads = 1);

// ([Q1(x_t (1 + delta)) - Q1(x)] / Q1(x)) / |delta| over rows matching the
// condition and the fractional in-range filter. Continuous features only;
// the value is empty when Q1(x) is 0.
EffectRow elasticity(const SoftClassifier& model, const Dataset& data, std::string_view feature,
                     double delta, const std::optional<Condition>& condition = std::nullopt,
                     int threads = 1);

struct EffectSpec {
    std::string feature;
    double delta = 0.0;
    EffectKind kind = EffectKind::marginal;
};

// Wait_Time +1/-2, Transfer +-1, Rideshare +-1 and TT_MOD +-1 as marginal
// effects, TT_MOD +-10% as elasticities.
std::vector<EffectSpec> default_effect_specs();

// Every spec for segment "All" and each current-mode segment, in spec
// order then segment order. A segment without rows gives n_in_range 0.
std::vector<EffectRow> effects_suite(const SoftClassifier& model, const Dataset& data,
                                     const std::vector<EffectSpec>& specs = default_effect_specs(),
                                     int threads = 1);

// ---------------------------------------------------------------------------
// Export

struct CurveExportOptions {
    std::size_t max_curves = 100;  // seeded subsample above this many instances
    std::uint64_t seed = 42;
};

// Instance rows exported as curves: every instance, or a seeded subsample of
// `max_curves` of them, ascending.
std::vector<std::size_t> exported_curve_rows(const CurveFamily& family, const CurveExportOptions& options);

// grid_value,instance_id,probability; curve rows first, then AVG rows.
void write_curves_csv(std::ostream& out, const CurveFamily& family, const CurveExportOptions& options = {});
std::string curves_to_json(const CurveFamily& family, const CurveExportOptions& options = {});

// feature,delta,segment,kind,value,n_in_range; marginal effects as
// percentages with two decimals, elasticities with four.
void write_effects_csv(std::ostream& out, const std::vector<EffectRow>& rows);
std::string effects_to_json(const std::vector<EffectRow>& rows);

// Global slope per segment, e.g. for the slopes table.
struct SlopeRow {
    std::string feature;
    std::string segment;
    double slope = 0.0;
    std::size_t n_instances = 0;
};
void write_slopes_csv(std::ostream& out, const std::vector<SlopeRow>& rows);
std::string slopes_to_json(const std::vector<SlopeRow>& rows);

} // namespace modeswitch
