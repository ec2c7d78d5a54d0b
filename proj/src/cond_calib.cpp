#include "fairscore/cond_calib.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fairscore/error.hpp"
#include "json.hpp"
#include "json_util.hpp"

namespace fairscore {

namespace {

struct WeightedPoint {
    double value;
    double mass;
};

class MeanShift {
public:
    MeanShift(std::vector<WeightedPoint> points, const MeanshiftConfig& cfg)
        : points_(std::move(points)), cfg_(cfg),
          inv_two_h2_(1.0 / (2.0 * cfg.bandwidth * cfg.bandwidth)) {}

    double converge(double start) const {
        double y = start;
        for (int it = 0; it < cfg_.max_iterations; ++it) {
            const double next = step(y);
            const double moved = std::abs(next - y);
            y = next;
            if (moved < cfg_.convergence_tol) break;
        }
        return y;
    }

private:
    double step(double y) const {
        double num = 0.0;
        double den = 0.0;
        for (const auto& p : points_) {
            const double d = y - p.value;
            const double w = p.mass * std::exp(-d * d * inv_two_h2_);
            num += w * p.value;
            den += w;
        }
        // Every kernel underflowed; the point is isolated and is its own mode.
        return den > 0.0 ? num / den : y;
    }

    std::vector<WeightedPoint> points_;
    MeanshiftConfig cfg_;
    double inv_two_h2_;
};

struct Mode {
    double center;
    double mass;
};

std::vector<Mode> find_modes(std::span<const double> scores, const MeanshiftConfig& cfg) {
    std::vector<double> sorted(scores.begin(), scores.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<WeightedPoint> unique;
    for (double s : sorted) {
        if (!unique.empty() && unique.back().value == s) {
            unique.back().mass += 1.0;
        } else {
            unique.push_back({s, 1.0});
        }
    }
    const MeanShift ms(unique, cfg);

    // The Gaussian mean-shift map is non-decreasing in its argument, so
    // converged positions keep the order of their starting points. If the two
    // ends of a sorted range land within merge_radius of each other, every
    // start in between lands in that same interval and joins the same
    // cluster; only ranges whose ends diverge need to be split.
    const std::size_t n = unique.size();
    std::vector<double> landed(n);
    std::vector<bool> done(n, false);
    auto land = [&](std::size_t i) {
        if (!done[i]) {
            landed[i] = ms.converge(unique[i].value);
            done[i] = true;
        }
        return landed[i];
    };
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, n - 1}};
    while (!stack.empty()) {
        const auto [lo, hi] = stack.back();
        stack.pop_back();
        const double y_lo = land(lo);
        const double y_hi = land(hi);
        if (hi - lo <= 1) continue;
        if (std::abs(y_hi - y_lo) <= cfg.merge_radius) {
            const double mid = 0.5 * (y_lo + y_hi);
            for (std::size_t i = lo + 1; i < hi; ++i) {
                landed[i] = mid;
                done[i] = true;
            }
            continue;
        }
        const std::size_t mid = lo + (hi - lo) / 2;
        stack.emplace_back(mid, hi);
        stack.emplace_back(lo, mid);
    }

    std::vector<WeightedPoint> ends(n);
    for (std::size_t i = 0; i < n; ++i) ends[i] = {landed[i], unique[i].mass};
    std::stable_sort(ends.begin(), ends.end(),
                     [](const WeightedPoint& a, const WeightedPoint& b) { return a.value < b.value; });

    // Single-linkage merge of converged positions.
    std::vector<Mode> modes;
    double weighted_sum = 0.0;
    double mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && ends[i].value - ends[i - 1].value > cfg.merge_radius) {
            modes.push_back({weighted_sum / mass, mass});
            weighted_sum = 0.0;
            mass = 0.0;
        }
        weighted_sum += ends[i].value * ends[i].mass;
        mass += ends[i].mass;
    }
    modes.push_back({weighted_sum / mass, mass});
    return modes;
}

}  // namespace

void MeanshiftConfig::validate() const {
    if (!(bandwidth > 0.0) || !(convergence_tol > 0.0) || !(merge_radius > 0.0) ||
        max_iterations <= 0) {
        throw Error(ErrorCode::InvalidArgument, "meanshift settings must all be positive");
    }
    if (merge_radius > bandwidth) {
        throw Error(ErrorCode::InvalidArgument, "meanshift merge radius exceeds the bandwidth");
    }
}

double meanshift_threshold(std::span<const double> scores, const MeanshiftConfig& cfg) {
    cfg.validate();
    if (scores.empty()) throw Error(ErrorCode::EmptyInput, "meanshift needs scores");
    auto modes = find_modes(scores, cfg);
    if (modes.size() < 2) {
        throw Error(ErrorCode::SingleMode,
                    "scores form a single meanshift mode; supply gamma explicitly");
    }
    // Heaviest first; ties go to the lower center so the choice is deterministic.
    std::stable_sort(modes.begin(), modes.end(),
                     [](const Mode& a, const Mode& b) { return a.mass > b.mass; });
    return 0.5 * (modes[0].center + modes[1].center);
}

CondCalibModel fit_conditional(const ScoreDataset& d, double sigma, std::uint64_t seed,
                               std::optional<double> gamma_override, const MeanshiftConfig& cfg,
                               PartitionSource partition) {
    cfg.validate();
    if (gamma_override && !(*gamma_override >= 0.0 && *gamma_override <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "gamma must lie in [0,1]");
    }
    if (partition == PartitionSource::TrueLabels && !d.labeled()) {
        throw Error(ErrorCode::UnlabeledDataset,
                    "partitioning by true labels needs a labeled dataset");
    }
    const double gamma = gamma_override ? *gamma_override : meanshift_threshold(d.scores(), cfg);

    // Partition on the raw scores; the noise stream runs over the whole
    // dataset so every pair gets the same jitter it would under plain Calib.
    const auto jittered = add_jitter(d.scores(), sigma, seed);
    std::vector<double> lists[2][2];  // [matched][group]
    for (std::size_t i = 0; i < d.size(); ++i) {
        const bool matched = partition == PartitionSource::TrueLabels ? *d[i].label == 1
                                                                      : d[i].score >= gamma;
        lists[matched ? 1 : 0][d[i].group == GroupId::Minority ? 0 : 1].push_back(jittered[i]);
    }
    for (int m = 0; m < 2; ++m) {
        for (int g = 0; g < 2; ++g) {
            if (lists[m][g].empty()) {
                throw Error(ErrorCode::EmptyGroupInPartition,
                            std::string(m ? "matched" : "unmatched") + " partition has no " +
                                (g == 0 ? "minority" : "majority") + " pairs (gamma = " +
                                format_double(gamma) + ")");
            }
        }
    }
    auto model = [&](int m) {
        return CalibModel(
            make_group_scores(std::move(lists[m][0]), std::move(lists[m][1]), sigma, seed));
    };
    return CondCalibModel{gamma, model(1), model(0), cfg};
}

double cond_calibrate(const CondCalibModel& model, double score, GroupId group) {
    if (!(score >= 0.0 && score <= 1.0)) {
        throw Error(ErrorCode::ScoreOutOfRange, "query score outside [0,1]: " + format_double(score));
    }
    return calibrate(score >= model.gamma ? model.matched : model.unmatched, score, group);
}

ScoreDataset cond_calibrate_dataset(const CondCalibModel& model, const ScoreDataset& d) {
    std::vector<double> out;
    out.reserve(d.size());
    for (const auto& p : d.pairs()) out.push_back(cond_calibrate(model, p.score, p.group));
    return d.with_scores(out);
}

std::string cond_model_to_json(const CondCalibModel& model) {
    nlohmann::json j;
    j["gamma"] = model.gamma;
    j["matched"] = detail::calib_to_json(model.matched);
    j["unmatched"] = detail::calib_to_json(model.unmatched);
    j["meanshift"] = {{"bandwidth", model.meanshift.bandwidth},
                      {"tol", model.meanshift.convergence_tol},
                      {"max_iter", model.meanshift.max_iterations},
                      {"merge_radius", model.meanshift.merge_radius}};
    return j.dump();
}

CondCalibModel cond_model_from_json(std::string_view json) {
    const auto j = detail::parse_json(json);
    try {
        MeanshiftConfig cfg;
        const auto& ms = j.at("meanshift");
        cfg.bandwidth = ms.at("bandwidth").get<double>();
        cfg.convergence_tol = ms.at("tol").get<double>();
        cfg.max_iterations = ms.at("max_iter").get<int>();
        cfg.merge_radius = ms.at("merge_radius").get<double>();
        cfg.validate();
        return CondCalibModel{j.at("gamma").get<double>(), detail::calib_from_json(j.at("matched")),
                              detail::calib_from_json(j.at("unmatched")), cfg};
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("bad conditional model: ") + e.what());
    }
}

}  // namespace fairscore
