#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace modeswitch {

enum class FeatureKind { continuous, discrete_ordinal, binary };

std::string_view to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(std::string_view text);

struct FeatureSpec {
    std::string name;
    FeatureKind kind = FeatureKind::continuous;
    std::string unit;
    double observed_min = 0.0;
    double observed_max = 0.0;
};

/// Column layout of a dataset plus the indicator columns that define the
/// current-mode segmentation. A row whose indicators are all zero belongs to
/// `reference_segment`.
struct Schema {
    std::vector<FeatureSpec> features;
    std::vector<std::string> segment_keys;
    std::string reference_segment = "Bus";
};

/// Conjunction of feature == value tests. An empty condition selects
/// every row.
struct Condition {
    std::vector<std::pair<std::string, double>> terms;

    static Condition on(std::string feature, double value) {
        return Condition{{{std::move(feature), value}}};
    }
    std::string label() const;
};

struct Segment {
    std::string name;
    Condition condition;
};

/// Immutable N x p feature matrix with a binary response.
///
/// Construction validates the data and recomputes each feature's observed
/// range from the rows. Binary features always report the range [0, 1].
class Dataset {
public:
    Dataset(std::vector<FeatureSpec> specs, std::vector<double> rows,
            std::vector<int> response, std::vector<std::string> segment_keys = {},
            std::string reference_segment = "Bus");

    std::size_t n_rows() const { return response_.size(); }
    std::size_t n_features() const { return specs_.size(); }

    std::span<const double> row(std::size_t i) const {
        return {rows_.data() + i * specs_.size(), specs_.size()};
    }
    double at(std::size_t i, std::size_t t) const { return rows_[i * specs_.size() + t]; }
    int response(std::size_t i) const { return response_[i]; }

    const std::vector<double>& values() const { return rows_; }
    const std::vector<int>& responses() const { return response_; }
    const std::vector<FeatureSpec>& specs() const { return specs_; }
    const FeatureSpec& spec(std::size_t t) const { return specs_[t]; }
    const std::vector<std::string>& segment_keys() const { return segment_keys_; }
    const std::string& reference_segment() const { return reference_segment_; }
    Schema schema() const;

    std::optional<std::size_t> find_feature(std::string_view name) const;
    // Throws std::invalid_argument naming the feature when absent.
    std::size_t feature_index(std::string_view name) const;

    std::vector<double> column(std::size_t t) const;
    bool matches(const Condition& condition, std::size_t i) const;
    std::vector<std::size_t> select(const Condition& condition) const;

    // Rows in the given order (duplicates allowed). Ranges are recomputed.
    Dataset subset(std::span<const std::size_t> indices) const;

private:
    std::vector<FeatureSpec> specs_;
    std::vector<double> rows_;
    std::vector<int> response_;
    std::vector<std::string> segment_keys_;
    std::string reference_segment_;
};

// ---------------------------------------------------------------------------
// Segmentation by current mode

// One segment per segment key (named by the text after the key's last '_'),
// followed by the reference segment whose condition sets every key to 0.
std::vector<Segment> mode_segments(const Dataset& data);

// Segment index (into mode_segments) for every row. Throws DataError for a
// row with more than one active indicator.
std::vector<std::size_t> segment_assignment(const Dataset& data);

// ---------------------------------------------------------------------------
// CSV

// Reads a comma-separated file whose header is the schema's feature names
// followed by a `switch` response column.
Dataset load_csv(const std::string& path, const Schema& schema);
Dataset read_csv(std::istream& in, const Schema& schema);
void write_csv(std::ostream& out, const Dataset& data);

// Shortest decimal text that round-trips the double exactly.
std::string format_double(double value);

// ---------------------------------------------------------------------------
// Splitting

struct SplitResult {
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
};

// Per current-mode stratum, round-half-up(stratum_size * test_fraction)
// randomly chosen rows go to the test set. A stratum with fewer than
// 1/test_fraction rows triggers a warning. Index lists are ascending.
SplitResult stratified_split_indices(const Dataset& data, double test_fraction,
                                     std::uint64_t seed);
std::pair<Dataset, Dataset> stratified_split(const Dataset& data, double test_fraction,
                                             std::uint64_t seed);

// k disjoint folds covering 0..N-1; the first N mod k folds hold one extra
// row. Each fold's indices are ascending.
std::vector<std::vector<std::size_t>> kfold_partition(std::size_t n_rows, std::size_t k,
                                                      std::uint64_t seed);

// ---------------------------------------------------------------------------
// Diagnostics

// Variance inflation factor per feature. Perfectly collinear columns report
// +infinity.
std::vector<double> vif(const Dataset& data);

struct CrossTab {
    std::vector<std::string> modes;               // row labels, segment order
    std::vector<std::array<std::int64_t, 2>> counts;  // [mode][switch decision]
    std::int64_t total() const;
};

CrossTab crosstab(const Dataset& data);

} // namespace modeswitch
