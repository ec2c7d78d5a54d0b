#include "fairscore/pipeline.hpp"

#include <fstream>

#include "fairscore/calib.hpp"
#include "fairscore/empirical.hpp"
#include "fairscore/error.hpp"
#include "json.hpp"

namespace fairscore {

namespace {

using ordered_json = nlohmann::ordered_json;

std::optional<double> try_auc(const ScoreDataset& d, std::optional<GroupId> group) {
    if (!d.labeled()) return std::nullopt;
    std::vector<double> pos;
    std::vector<double> neg;
    for (const auto& p : d.pairs()) {
        if (group && p.group != *group) continue;
        (*p.label == 1 ? pos : neg).push_back(p.score);
    }
    if (pos.empty() || neg.empty()) return std::nullopt;
    return auc(pos, neg);
}

// Curve families behind a metric; EOD is drawn as its two components.
std::vector<BiasMetricKind> curve_kinds(BiasMetricKind kind) {
    if (kind == BiasMetricKind::EOD) return {BiasMetricKind::EO, BiasMetricKind::FPRGap};
    return {kind};
}

void add_curves(BiasReport& report, const ScoreDataset& d, const std::string& stage) {
    for (auto kind : curve_kinds(report.metric)) {
        const auto curves = metric_curves(d, kind);
        const std::string prefix(to_string(kind));
        report.curves.insert_or_assign(prefix + "_minority_" + stage, curves.minority);
        report.curves.insert_or_assign(prefix + "_majority_" + stage, curves.majority);
    }
}

void check_options(const ScoreDataset& d, const RunOptions& opts) {
    for (double t : opts.thresholds) {
        if (!(t >= 0.0 && t <= 1.0)) {
            throw Error(ErrorCode::ThetaOutOfRange, "threshold " + format_double(t) +
                                                        " is outside [0,1]");
        }
    }
    for (auto kind : opts.metrics) {
        if (needs_labels(kind) && !d.labeled()) {
            throw Error(ErrorCode::UnlabeledDataset,
                        "metric " + std::string(to_string(kind)) + " needs a labeled dataset");
        }
    }
}

ordered_json opt(const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json components(const std::optional<EodComponents>& c) {
    if (!c) return nullptr;
    return {{"eo", c->eo}, {"fpr_gap", c->fpr_gap}};
}

ordered_json report_entry(const BiasReport& r) {
    ordered_json j;
    j["metric"] = std::string(to_string(r.metric));
    j["before"] = r.before;
    j["after"] = opt(r.after);
    j["auc_before"] = opt(r.auc_before);
    j["auc_after"] = opt(r.auc_after);
    j["risk"] = opt(r.risk);
    j["components"] = components(r.components_before);
    if (r.after) j["components_after"] = components(r.components_after);
    ordered_json gaps = ordered_json::array();
    for (const auto& g : r.thresholds) {
        ordered_json e{{"theta", g.theta}, {"before", g.before}};
        if (r.after) e["after"] = opt(g.after);
        gaps.push_back(std::move(e));
    }
    j["thresholds"] = std::move(gaps);
    return j;
}

ordered_json dataset_summary(const MeasureResult& r) {
    return {{"n_pairs", r.n_minority + r.n_majority},
            {"n_minority", r.n_minority},
            {"n_majority", r.n_majority},
            {"labeled", r.labeled}};
}

}  // namespace

std::string_view to_string(Algorithm a) noexcept {
    switch (a) {
        case Algorithm::None: return "none";
        case Algorithm::Calib: return "calib";
        case Algorithm::CCalib: return "ccalib";
    }
    return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept {
    if (name == "none") return Algorithm::None;
    if (name == "calib") return Algorithm::Calib;
    if (name == "ccalib") return Algorithm::CCalib;
    return std::nullopt;
}

MeasureResult measure(const ScoreDataset& d, const RunOptions& opts) {
    check_options(d, opts);
    MeasureResult r;
    r.n_minority = d.count(GroupId::Minority);
    r.n_majority = d.count(GroupId::Majority);
    r.labeled = d.labeled();
    r.auc = try_auc(d, std::nullopt);
    r.group_auc = {try_auc(d, GroupId::Minority), try_auc(d, GroupId::Majority)};
    for (auto kind : opts.metrics) {
        BiasReport report;
        report.metric = kind;
        report.before = score_bias(d, kind);
        report.auc_before = r.auc;
        if (kind == BiasMetricKind::EOD) {
            report.components_before =
                EodComponents{score_bias(d, BiasMetricKind::EO),
                              score_bias(d, BiasMetricKind::FPRGap)};
        }
        for (double t : opts.thresholds) {
            report.thresholds.push_back({t, threshold_bias(d, kind, t), std::nullopt});
        }
        add_curves(report, d, "before");
        r.reports.push_back(std::move(report));
    }
    return r;
}

CalibrationResult run_calibration(const ScoreDataset& query, const ScoreDataset* fit_set,
                                  const RunOptions& opts) {
    check_options(query, opts);
    const ScoreDataset& fit = fit_set ? *fit_set : query;

    CalibrationResult out;
    switch (opts.algorithm) {
        case Algorithm::None:
            out.calibrated = query;
            break;
        case Algorithm::Calib: {
            const auto model = fit_calib(fit, opts.sigma, opts.seed);
            out.calibrated = calibrate_dataset(model, query);
            out.model_json = calib_model_to_json(model);
            break;
        }
        case Algorithm::CCalib: {
            const auto model = fit_conditional(fit, opts.sigma, opts.seed, opts.gamma,
                                               opts.meanshift, opts.partition);
            out.calibrated = cond_calibrate_dataset(model, query);
            out.model_json = cond_model_to_json(model);
            out.gamma = model.gamma;
            break;
        }
    }
    out.risk = risk_estimate(query.scores(), out.calibrated.scores());
    out.before = measure(query, opts);
    out.after = measure(out.calibrated, opts);

    for (std::size_t i = 0; i < out.before.reports.size(); ++i) {
        BiasReport merged = out.before.reports[i];
        const BiasReport& after = out.after.reports[i];
        merged.after = after.before;
        merged.auc_after = after.auc_before;
        merged.risk = out.risk;
        merged.components_after = after.components_before;
        for (std::size_t t = 0; t < merged.thresholds.size(); ++t) {
            merged.thresholds[t].after = after.thresholds[t].before;
        }
        for (const auto& [name, curve] : after.curves) {
            merged.curves.insert_or_assign(name.substr(0, name.size() - 6) + "after", curve);
        }
        out.reports.push_back(std::move(merged));
    }
    return out;
}

std::string report_json(const MeasureResult& r, const RunOptions& opts) {
    ordered_json j;
    j["command"] = "measure";
    j["dataset"] = dataset_summary(r);
    j["auc"] = opt(r.auc);
    j["auc_by_group"] = {{"minority", opt(r.group_auc.minority)},
                         {"majority", opt(r.group_auc.majority)}};
    j["thresholds"] = opts.thresholds;
    ordered_json metrics = ordered_json::array();
    for (const auto& rep : r.reports) metrics.push_back(report_entry(rep));
    j["metrics"] = std::move(metrics);
    return j.dump(2) + "\n";
}

std::string report_json(const CalibrationResult& r, const RunOptions& opts) {
    ordered_json j;
    j["command"] = "calibrate";
    j["algorithm"] = std::string(to_string(opts.algorithm));
    j["fit"] = opts.fit_name;
    j["sigma"] = opts.sigma;
    j["seed"] = opts.seed;
    j["gamma"] = opt(r.gamma);
    j["dataset"] = dataset_summary(r.before);
    j["risk"] = r.risk;
    j["auc_before"] = opt(r.before.auc);
    j["auc_after"] = opt(r.after.auc);
    j["auc_by_group"] = {
        {"minority", {{"before", opt(r.before.group_auc.minority)},
                      {"after", opt(r.after.group_auc.minority)}}},
        {"majority", {{"before", opt(r.before.group_auc.majority)},
                      {"after", opt(r.after.group_auc.majority)}}}};
    j["thresholds"] = opts.thresholds;
    ordered_json metrics = ordered_json::array();
    for (const auto& rep : r.reports) metrics.push_back(report_entry(rep));
    j["metrics"] = std::move(metrics);
    return j.dump(2) + "\n";
}

void write_curves(const std::filesystem::path& dir, const std::vector<BiasReport>& reports) {
    for (const auto& report : reports) {
        for (const auto& [name, curve] : report.curves) {
            const auto path = dir / (name + ".csv");
            std::ofstream out(path, std::ios::binary);
            if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
            write_curve(out, curve);
        }
    }
}

}  // namespace fairscore
