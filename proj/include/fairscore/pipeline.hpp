#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fairscore/bias.hpp"
#include "fairscore/cond_calib.hpp"
#include "fairscore/dataset.hpp"

namespace fairscore {

enum class Algorithm { None, Calib, CCalib };

std::string_view to_string(Algorithm a) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept;

struct RunOptions {
    std::vector<BiasMetricKind> metrics{BiasMetricKind::DP};
    std::vector<double> thresholds{0.1, 0.5, 0.95};
    Algorithm algorithm = Algorithm::Calib;
    double sigma = 0.05;
    std::uint64_t seed = 0;
    std::optional<double> gamma;
    MeanshiftConfig meanshift;
    PartitionSource partition = PartitionSource::PredictedLabels;
    /// Echoed into the report: "self" or the fit file name.
    std::string fit_name = "self";
};

struct GroupAuc {
    std::optional<double> minority;
    std::optional<double> majority;
};

struct MeasureResult {
    std::size_t n_minority = 0;
    std::size_t n_majority = 0;
    bool labeled = false;
    std::optional<double> auc;
    GroupAuc group_auc;
    std::vector<BiasReport> reports;
};

struct CalibrationResult {
    ScoreDataset calibrated;
    std::string model_json;  // empty for Algorithm::None
    std::optional<double> gamma;
    double risk = 0.0;
    MeasureResult before;
    MeasureResult after;
    /// Before/after merged per metric.
    std::vector<BiasReport> reports;
};

/// Score bias for every requested metric plus the pointwise gaps at the
/// requested thresholds and, for labeled data, overall and per-group AUC.
MeasureResult measure(const ScoreDataset& d, const RunOptions& opts);

/// Fits on `fit_set` (the query set itself when null), calibrates `query`
/// and measures both sides.
CalibrationResult run_calibration(const ScoreDataset& query, const ScoreDataset* fit_set,
                                  const RunOptions& opts);

std::string report_json(const MeasureResult& r, const RunOptions& opts);
std::string report_json(const CalibrationResult& r, const RunOptions& opts);

/// One `<name>.csv` per curve held by the reports.
void write_curves(const std::filesystem::path& dir, const std::vector<BiasReport>& reports);

}  // namespace fairscore
