#include "fairscore/empirical.hpp"

#include <algorithm>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <charconv>
#include <cmath>
#include <functional>
#include <istream>
#include <ostream>
#include <string>

#include "fairscore/error.hpp"

namespace fairscore {

StepCurve::StepCurve(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (values_.size() != breakpoints_.size() + 1) {
        throw Error(ErrorCode::MalformedCurve, "a step curve needs one more value than breakpoints");
    }
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        const double b = breakpoints_[i];
        if (!(b >= 0.0 && b < 1.0) || (i > 0 && !(breakpoints_[i - 1] < b))) {
            throw Error(ErrorCode::MalformedCurve,
                        "breakpoints must be strictly increasing within [0,1)");
        }
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw Error(ErrorCode::MalformedCurve, "non-finite curve value");
    }
}

double StepCurve::operator()(double theta) const noexcept {
    const auto k = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), theta) -
                   breakpoints_.begin();
    return values_[static_cast<std::size_t>(k)];
}

double StepCurve::max_jump() const noexcept {
    double jump = 0.0;
    for (std::size_t i = 1; i < values_.size(); ++i) {
        jump = std::max(jump, std::abs(values_[i] - values_[i - 1]));
    }
    return jump;
}

std::vector<double> add_jitter(std::span<const double> scores, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw Error(ErrorCode::InvalidArgument, "jitter sigma must be finite and >= 0");
    }
    std::vector<double> out(scores.begin(), scores.end());
    if (sigma == 0.0) return out;
    boost::random::mt19937_64 engine(seed);
    boost::random::normal_distribution<double> noise(0.0, sigma);
    for (double& s : out) s = std::clamp(s + noise(engine), 0.0, 1.0);
    return out;
}

GroupScores make_group_scores(std::vector<double> minority, std::vector<double> majority,
                              double sigma, std::uint64_t seed) {
    if (minority.empty() || majority.empty()) {
        throw Error(ErrorCode::EmptyGroup,
                    std::string(minority.empty() ? "minority" : "majority") +
                        " group has no pairs");
    }
    std::stable_sort(minority.begin(), minority.end(), std::greater<>{});
    std::stable_sort(majority.begin(), majority.end(), std::greater<>{});
    GroupScores gs;
    gs.alpha = static_cast<double>(minority.size()) /
               static_cast<double>(minority.size() + majority.size());
    gs.scores_a = std::move(minority);
    gs.scores_b = std::move(majority);
    gs.sigma = sigma;
    gs.seed = seed;
    return gs;
}

GroupScores build_group_scores(const ScoreDataset& d, double sigma, std::uint64_t seed) {
    const auto jittered = add_jitter(d.scores(), sigma, seed);
    std::vector<double> a;
    std::vector<double> b;
    for (std::size_t i = 0; i < d.size(); ++i) {
        (d[i].group == GroupId::Minority ? a : b).push_back(jittered[i]);
    }
    return make_group_scores(std::move(a), std::move(b), sigma, seed);
}

StepCurve pr_curve(std::span<const double> scores) {
    if (scores.empty()) throw Error(ErrorCode::EmptyInput, "cannot build a curve from no scores");
    std::vector<double> sorted(scores.begin(), scores.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());

    std::vector<double> breakpoints;
    std::vector<double> values{1.0};
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        // A score of exactly 1 leaves no interval after it.
        if (sorted[i] < 1.0) {
            breakpoints.push_back(sorted[i]);
            values.push_back(static_cast<double>(sorted.size() - j) / n);
        }
        i = j;
    }
    return StepCurve(std::move(breakpoints), std::move(values));
}

StepCurve conditional_curve(const ScoreDataset& d, GroupId group, int label) {
    if (!d.labeled()) {
        throw Error(ErrorCode::UnlabeledDataset, "label-conditioned curves need a labeled dataset");
    }
    std::vector<double> stratum;
    for (const auto& p : d.pairs()) {
        if (p.group == group && *p.label == label) stratum.push_back(p.score);
    }
    if (stratum.empty()) {
        throw Error(ErrorCode::EmptyStratum, "no " + std::string(to_string(group)) +
                                                 " pairs with label " + std::to_string(label));
    }
    return pr_curve(stratum);
}

double integrate_abs_difference(const StepCurve& f, const StepCurve& g) {
    std::vector<double> grid;
    grid.reserve(f.breakpoints().size() + g.breakpoints().size() + 2);
    grid.push_back(0.0);
    std::merge(f.breakpoints().begin(), f.breakpoints().end(), g.breakpoints().begin(),
               g.breakpoints().end(), std::back_inserter(grid));
    grid.push_back(1.0);
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    double total = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        // Both curves are constant on (grid[i-1], grid[i]] and take that value at grid[i].
        total += std::abs(f(grid[i]) - g(grid[i])) * (grid[i] - grid[i - 1]);
    }
    return total;
}

double auc(std::span<const double> positives, std::span<const double> negatives) {
    if (positives.empty() || negatives.empty()) {
        throw Error(ErrorCode::SingleClass, "AUC needs both positive and negative pairs");
    }
    struct Item {
        double score;
        bool positive;
    };
    std::vector<Item> items;
    items.reserve(positives.size() + negatives.size());
    for (double s : positives) items.push_back({s, true});
    for (double s : negatives) items.push_back({s, false});
    std::sort(items.begin(), items.end(),
              [](const Item& l, const Item& r) { return l.score < r.score; });

    // Mann-Whitney U with mid-ranks for ties.
    double positive_rank_sum = 0.0;
    for (std::size_t i = 0; i < items.size();) {
        std::size_t j = i;
        std::size_t pos_in_tie = 0;
        while (j < items.size() && items[j].score == items[i].score) {
            pos_in_tie += items[j].positive ? 1 : 0;
            ++j;
        }
        const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
        positive_rank_sum += mid_rank * static_cast<double>(pos_in_tie);
        i = j;
    }
    const double np = static_cast<double>(positives.size());
    const double nn = static_cast<double>(negatives.size());
    const double u = positive_rank_sum - np * (np + 1.0) / 2.0;
    return u / (np * nn);
}

double auc(const ScoreDataset& d) {
    if (!d.labeled()) throw Error(ErrorCode::UnlabeledDataset, "AUC needs a labeled dataset");
    std::vector<double> pos;
    std::vector<double> neg;
    for (const auto& p : d.pairs()) (*p.label == 1 ? pos : neg).push_back(p.score);
    return auc(pos, neg);
}

double w1_distance(std::span<const double> x, std::span<const double> y) {
    if (x.empty() || y.empty()) {
        throw Error(ErrorCode::EmptyInput, "W1 distance needs two non-empty samples");
    }
    std::vector<double> xs(x.begin(), x.end());
    std::vector<double> ys(y.begin(), y.end());
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    const double nx = static_cast<double>(xs.size());
    const double ny = static_cast<double>(ys.size());

    // Sweep the merged support; both CDFs are constant between consecutive points.
    std::size_t i = 0;
    std::size_t j = 0;
    double prev = 0.0;
    double total = 0.0;
    while (i < xs.size() || j < ys.size()) {
        const double next = std::min(i < xs.size() ? xs[i] : 1.0, j < ys.size() ? ys[j] : 1.0);
        const double fx = static_cast<double>(i) / nx;
        const double fy = static_cast<double>(j) / ny;
        total += std::abs(fx - fy) * (next - prev);
        while (i < xs.size() && xs[i] == next) ++i;
        while (j < ys.size() && ys[j] == next) ++j;
        prev = next;
    }
    return total;
}

void write_curve(std::ostream& out, const StepCurve& c) {
    out << "theta,value\n";
    out << "0," << format_double(c.values()[0]) << '\n';
    for (std::size_t i = 0; i < c.breakpoints().size(); ++i) {
        out << format_double(c.breakpoints()[i]) << ',' << format_double(c.values()[i + 1])
            << '\n';
    }
}

StepCurve read_curve(std::istream& in) {
    auto parse = [](std::string_view field, std::size_t line_no) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
            throw Error(ErrorCode::MalformedCurve,
                        "cannot parse number on curve line " + std::to_string(line_no));
        }
        return v;
    };

    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::vector<double> breakpoints;
    std::vector<double> values;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!have_header) {
            if (line != "theta,value") {
                throw Error(ErrorCode::MalformedCurve, "curve CSV must start with 'theta,value'");
            }
            have_header = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
            throw Error(ErrorCode::MalformedCurve,
                        "curve line " + std::to_string(line_no) + " needs two columns");
        }
        const double theta = parse(std::string_view(line).substr(0, comma), line_no);
        const double value = parse(std::string_view(line).substr(comma + 1), line_no);
        if (values.empty()) {
            if (theta != 0.0) {
                throw Error(ErrorCode::MalformedCurve, "first curve row must be at theta=0");
            }
        } else {
            breakpoints.push_back(theta);
        }
        values.push_back(value);
    }
    if (values.empty()) throw Error(ErrorCode::MalformedCurve, "curve CSV has no rows");
    return StepCurve(std::move(breakpoints), std::move(values));
}

}  // namespace fairscore
