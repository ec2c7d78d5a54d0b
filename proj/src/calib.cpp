#include "fairscore/calib.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include "json.hpp"

#include "fairscore/error.hpp"
#include "json_util.hpp"

namespace fairscore {

namespace {

void check_list(const std::vector<double>& list, std::string_view name) {
    if (list.empty()) {
        throw Error(ErrorCode::EmptyGroup, std::string(name) + " score list is empty");
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (!(list[i] >= 0.0 && list[i] <= 1.0)) {
            throw Error(ErrorCode::ScoreOutOfRange,
                        std::string(name) + " score list has a value outside [0,1]");
        }
        if (i > 0 && list[i] > list[i - 1]) {
            throw Error(ErrorCode::InvalidArgument,
                        std::string(name) + " score list is not sorted descending");
        }
    }
}

}  // namespace

CalibModel::CalibModel(GroupScores gs) : gs_(std::move(gs)) {
    check_list(gs_.scores_a, "minority");
    check_list(gs_.scores_b, "majority");
    const double share = static_cast<double>(gs_.scores_a.size()) /
                         static_cast<double>(gs_.scores_a.size() + gs_.scores_b.size());
    if (std::abs(gs_.alpha - share) > 1e-12) {
        throw Error(ErrorCode::InvalidArgument, "alpha does not match the minority share");
    }
    gs_.alpha = share;
}

std::size_t CalibModel::own_position(double score, GroupId group) const {
    const auto& list = gs_.list(group);
    // Descending list: the strictly-greater entries form a prefix.
    const auto greater = std::partition_point(list.begin(), list.end(),
                                              [score](double x) { return x > score; }) -
                         list.begin();
    return std::min(list.size(), static_cast<std::size_t>(greater) + 1);
}

std::size_t CalibModel::cross_position(std::size_t own_pos, GroupId group) const noexcept {
    const std::size_t n_own = gs_.list(group).size();
    const std::size_t n_other = gs_.list(other(group)).size();
    // Integer ceiling avoids 6/9*6 landing just above 4.
    const std::size_t pos = (own_pos * n_other + n_own - 1) / n_own;
    return std::clamp<std::size_t>(pos, 1, n_other);
}

CalibModel fit_calib(const ScoreDataset& d, double sigma, std::uint64_t seed) {
    return CalibModel(build_group_scores(d, sigma, seed));
}

double calibrate(const CalibModel& model, double score, GroupId group) {
    if (!(score >= 0.0 && score <= 1.0)) {
        throw Error(ErrorCode::ScoreOutOfRange, "query score outside [0,1]: " + format_double(score));
    }
    const auto& gs = model.group_scores();
    const std::size_t own = model.own_position(score, group);
    const std::size_t cross = model.cross_position(own, group);
    const std::size_t pos_a = group == GroupId::Minority ? own : cross;
    const std::size_t pos_b = group == GroupId::Minority ? cross : own;
    return gs.alpha * gs.scores_a[pos_a - 1] + (1.0 - gs.alpha) * gs.scores_b[pos_b - 1];
}

ScoreDataset calibrate_dataset(const CalibModel& model, const ScoreDataset& d) {
    std::vector<double> out;
    out.reserve(d.size());
    for (const auto& p : d.pairs()) out.push_back(calibrate(model, p.score, p.group));
    return d.with_scores(out);
}

std::string calib_model_to_json(const CalibModel& model) {
    return detail::calib_to_json(model).dump();
}

CalibModel calib_model_from_json(std::string_view json) {
    return detail::calib_from_json(detail::parse_json(json));
}

namespace detail {

nlohmann::json calib_to_json(const CalibModel& model) {
    const auto& gs = model.group_scores();
    nlohmann::json j;
    j["alpha"] = gs.alpha;
    j["sigma"] = gs.sigma;
    j["seed"] = gs.seed;
    j["scores_a"] = gs.scores_a;
    j["scores_b"] = gs.scores_b;
    return j;
}

CalibModel calib_from_json(const nlohmann::json& j) {
    try {
        GroupScores gs;
        gs.alpha = j.at("alpha").get<double>();
        gs.sigma = j.at("sigma").get<double>();
        gs.seed = j.at("seed").get<std::uint64_t>();
        gs.scores_a = j.at("scores_a").get<std::vector<double>>();
        gs.scores_b = j.at("scores_b").get<std::vector<double>>();
        return CalibModel(std::move(gs));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("bad calibration model: ") + e.what());
    }
}

nlohmann::json parse_json(std::string_view text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace detail

}  // namespace fairscore
