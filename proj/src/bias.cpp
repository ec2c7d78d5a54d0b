#include "fairscore/bias.hpp"

#include <cmath>

#include "fairscore/error.hpp"

namespace fairscore {

namespace {

void require_groups(const ScoreDataset& d) {
    for (GroupId g : {GroupId::Minority, GroupId::Majority}) {
        if (d.count(g) == 0) {
            throw Error(ErrorCode::EmptyGroup, std::string(to_string(g)) + " group has no pairs");
        }
    }
}

// Fraction of the (group, label) stratum scoring at least theta.
double stratum_rate(const ScoreDataset& d, GroupId group, std::optional<int> label, double theta) {
    std::size_t total = 0;
    std::size_t above = 0;
    for (const auto& p : d.pairs()) {
        if (p.group != group || (label && *p.label != *label)) continue;
        ++total;
        if (p.score >= theta) ++above;
    }
    if (total == 0) {
        throw Error(ErrorCode::EmptyStratum, "no " + std::string(to_string(group)) +
                                                 " pairs with label " +
                                                 std::to_string(label.value_or(-1)));
    }
    return static_cast<double>(above) / static_cast<double>(total);
}

void require_labels(const ScoreDataset& d, BiasMetricKind kind) {
    if (needs_labels(kind) && !d.labeled()) {
        throw Error(ErrorCode::UnlabeledDataset,
                    std::string(to_string(kind)) + " bias needs a labeled dataset");
    }
}

}  // namespace

std::string_view to_string(BiasMetricKind kind) noexcept {
    switch (kind) {
        case BiasMetricKind::DP: return "dp";
        case BiasMetricKind::EO: return "eo";
        case BiasMetricKind::FPRGap: return "fprgap";
        case BiasMetricKind::EOD: return "eod";
    }
    return "unknown";
}

std::optional<BiasMetricKind> parse_metric(std::string_view name) noexcept {
    if (name == "dp") return BiasMetricKind::DP;
    if (name == "eo") return BiasMetricKind::EO;
    if (name == "fprgap") return BiasMetricKind::FPRGap;
    if (name == "eod") return BiasMetricKind::EOD;
    return std::nullopt;
}

GroupCurves metric_curves(const ScoreDataset& d, BiasMetricKind kind) {
    require_labels(d, kind);
    require_groups(d);
    switch (kind) {
        case BiasMetricKind::DP:
            return {pr_curve(d.scores(GroupId::Minority)), pr_curve(d.scores(GroupId::Majority))};
        case BiasMetricKind::EO:
            return {conditional_curve(d, GroupId::Minority, 1),
                    conditional_curve(d, GroupId::Majority, 1)};
        case BiasMetricKind::FPRGap:
            return {conditional_curve(d, GroupId::Minority, 0),
                    conditional_curve(d, GroupId::Majority, 0)};
        case BiasMetricKind::EOD: break;
    }
    throw Error(ErrorCode::InvalidArgument, "EOD is a sum of two curve gaps, not a single curve");
}

double score_bias(const ScoreDataset& d, BiasMetricKind kind) {
    if (kind == BiasMetricKind::EOD) {
        return score_bias(d, BiasMetricKind::EO) + score_bias(d, BiasMetricKind::FPRGap);
    }
    const auto curves = metric_curves(d, kind);
    return integrate_abs_difference(curves.minority, curves.majority);
}

double threshold_bias(const ScoreDataset& d, BiasMetricKind kind, double theta) {
    if (!(theta >= 0.0 && theta <= 1.0)) {
        throw Error(ErrorCode::ThetaOutOfRange, "threshold must lie in [0,1]");
    }
    require_labels(d, kind);
    require_groups(d);
    auto gap = [&](std::optional<int> label) {
        return std::abs(stratum_rate(d, GroupId::Majority, label, theta) -
                        stratum_rate(d, GroupId::Minority, label, theta));
    };
    switch (kind) {
        case BiasMetricKind::DP: return gap(std::nullopt);
        case BiasMetricKind::EO: return gap(1);
        case BiasMetricKind::FPRGap: return gap(0);
        case BiasMetricKind::EOD: return gap(1) + gap(0);
    }
    return 0.0;
}

double risk_estimate(std::span<const double> original, std::span<const double> calibrated) {
    if (original.size() != calibrated.size()) {
        throw Error(ErrorCode::LengthMismatch, "original and calibrated score counts differ");
    }
    if (original.empty()) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < original.size(); ++i) {
        total += std::abs(calibrated[i] - original[i]);
    }
    return total / static_cast<double>(original.size());
}

}  // namespace fairscore
