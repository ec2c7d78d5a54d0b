#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairscore/dataset.hpp"
#include "fairscore/empirical.hpp"

namespace fairscore {

/// Which rate curve is compared across groups: DP uses the positive rate, EO
/// the true-positive rate, FPRGap the false-positive rate; EOD is EO + FPRGap.
enum class BiasMetricKind { DP, EO, FPRGap, EOD };

std::string_view to_string(BiasMetricKind kind) noexcept;
std::optional<BiasMetricKind> parse_metric(std::string_view name) noexcept;

inline bool needs_labels(BiasMetricKind kind) noexcept { return kind != BiasMetricKind::DP; }

struct GroupCurves {
    StepCurve minority;
    StepCurve majority;
};

/// Minority/majority curves for a single-curve metric (DP, EO or FPRGap).
GroupCurves metric_curves(const ScoreDataset& d, BiasMetricKind kind);

/// Threshold-integrated bias: the exact integral over theta in [0,1] of the
/// absolute gap between the groups' rate curves.
double score_bias(const ScoreDataset& d, BiasMetricKind kind);

/// The same gap evaluated at one threshold.
double threshold_bias(const ScoreDataset& d, BiasMetricKind kind, double theta);

/// Mean absolute difference between aligned original and calibrated scores.
double risk_estimate(std::span<const double> original, std::span<const double> calibrated);

struct EodComponents {
    double eo = 0.0;
    double fpr_gap = 0.0;
};

struct ThresholdGap {
    double theta = 0.0;
    double before = 0.0;
    std::optional<double> after;
};

struct BiasReport {
    BiasMetricKind metric = BiasMetricKind::DP;
    double before = 0.0;
    std::optional<double> after;
    std::optional<double> auc_before;
    std::optional<double> auc_after;
    std::optional<double> risk;
    std::optional<EodComponents> components_before;
    std::optional<EodComponents> components_after;
    std::vector<ThresholdGap> thresholds;
    /// Keyed `<curve>_<group>_<stage>`, e.g. `dp_minority_before`.
    std::map<std::string, StepCurve> curves;
};

}  // namespace fairscore
