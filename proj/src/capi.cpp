#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "fairscore/bias.hpp"
#include "fairscore/calib.hpp"
#include "fairscore/cond_calib.hpp"
#include "fairscore/dataset.hpp"
#include "fairscore/empirical.hpp"
#include "fairscore/error.hpp"
#include "fairscore/fairscore.h"
#include "fairscore/pipeline.hpp"
#include "fairscore/plot.hpp"
#include "fairscore/synth.hpp"

struct fs_dataset {
    fairscore::ScoreDataset value;
};

struct fs_calib_model {
    fairscore::CalibModel value;
};

struct fs_cond_model {
    fairscore::CondCalibModel value;
};

namespace {

using fairscore::Error;
using fairscore::ErrorCode;

thread_local std::string g_last_error;

fs_status to_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedRow: return FS_ERR_MALFORMED_ROW;
        case ErrorCode::ScoreOutOfRange: return FS_ERR_SCORE_OUT_OF_RANGE;
        case ErrorCode::UnknownGroup: return FS_ERR_UNKNOWN_GROUP;
        case ErrorCode::EmptyInput: return FS_ERR_EMPTY_INPUT;
        case ErrorCode::EmptyGroup: return FS_ERR_EMPTY_GROUP;
        case ErrorCode::EmptyStratum: return FS_ERR_EMPTY_STRATUM;
        case ErrorCode::UnlabeledDataset: return FS_ERR_UNLABELED_DATASET;
        case ErrorCode::SingleClass: return FS_ERR_SINGLE_CLASS;
        case ErrorCode::LengthMismatch: return FS_ERR_LENGTH_MISMATCH;
        case ErrorCode::ThetaOutOfRange: return FS_ERR_THETA_OUT_OF_RANGE;
        case ErrorCode::SingleMode: return FS_ERR_SINGLE_MODE;
        case ErrorCode::EmptyGroupInPartition: return FS_ERR_EMPTY_GROUP_IN_PARTITION;
        case ErrorCode::InvalidSpec: return FS_ERR_INVALID_SPEC;
        case ErrorCode::MalformedCurve: return FS_ERR_MALFORMED_CURVE;
        case ErrorCode::InvalidArgument: return FS_ERR_INVALID_ARGUMENT;
        case ErrorCode::Io: return FS_ERR_IO;
    }
    return FS_ERR_INTERNAL;
}

template <class F>
fs_status guarded(F&& body) noexcept {
    try {
        body();
        g_last_error.clear();
        return FS_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return FS_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return FS_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown failure";
        return FS_ERR_INTERNAL;
    }
}

template <class... Ptrs>
void require(const Ptrs*... ptrs) {
    if (((ptrs == nullptr) || ...)) {
        throw Error(ErrorCode::InvalidArgument, "required pointer argument is NULL");
    }
}

char* dup_string(const std::string& s) {
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

fairscore::GroupId group_of(fs_group g) {
    switch (g) {
        case FS_GROUP_MINORITY: return fairscore::GroupId::Minority;
        case FS_GROUP_MAJORITY: return fairscore::GroupId::Majority;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown group value");
}

fs_group group_to_c(fairscore::GroupId g) {
    return g == fairscore::GroupId::Minority ? FS_GROUP_MINORITY : FS_GROUP_MAJORITY;
}

fairscore::BiasMetricKind metric_of(fs_metric m) {
    switch (m) {
        case FS_METRIC_DP: return fairscore::BiasMetricKind::DP;
        case FS_METRIC_EO: return fairscore::BiasMetricKind::EO;
        case FS_METRIC_FPR_GAP: return fairscore::BiasMetricKind::FPRGap;
        case FS_METRIC_EOD: return fairscore::BiasMetricKind::EOD;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown metric value");
}

fairscore::Schema schema_of(fs_schema s) {
    switch (s) {
        case FS_SCHEMA_PAIR: return fairscore::Schema::PairLevel;
        case FS_SCHEMA_RECORD: return fairscore::Schema::RecordLevel;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown schema value");
}

fairscore::GroupVocabulary vocab_of(const fs_vocabulary* v) {
    fairscore::GroupVocabulary out;
    if (!v) return out;
    if (v->minority_token) out.minority_token = v->minority_token;
    if (v->n_majority_tokens > 0) require(v->majority_tokens);
    for (std::size_t i = 0; i < v->n_majority_tokens; ++i) {
        require(v->majority_tokens[i]);
        out.majority_tokens.emplace_back(v->majority_tokens[i]);
    }
    return out;
}

fairscore::MeanshiftConfig meanshift_of(const fs_meanshift_config* c) {
    fairscore::MeanshiftConfig cfg;
    if (c) {
        cfg.bandwidth = c->bandwidth;
        cfg.max_iterations = c->max_iterations;
        cfg.convergence_tol = c->convergence_tol;
        cfg.merge_radius = c->merge_radius;
    }
    return cfg;
}

fairscore::RunOptions options_of(const fs_run_options* o) {
    fairscore::RunOptions opts;
    if (!o) return opts;
    if (o->metrics) {
        opts.metrics.clear();
        for (std::size_t i = 0; i < o->n_metrics; ++i) opts.metrics.push_back(metric_of(o->metrics[i]));
    }
    if (o->thresholds) opts.thresholds.assign(o->thresholds, o->thresholds + o->n_thresholds);
    switch (o->algorithm) {
        case FS_ALGORITHM_NONE: opts.algorithm = fairscore::Algorithm::None; break;
        case FS_ALGORITHM_CALIB: opts.algorithm = fairscore::Algorithm::Calib; break;
        case FS_ALGORITHM_CCALIB: opts.algorithm = fairscore::Algorithm::CCalib; break;
        default: throw Error(ErrorCode::InvalidArgument, "unknown algorithm value");
    }
    opts.sigma = o->sigma;
    opts.seed = o->seed;
    if (o->has_gamma) opts.gamma = o->gamma;
    opts.meanshift = meanshift_of(&o->meanshift);
    opts.partition = o->use_true_labels ? fairscore::PartitionSource::TrueLabels
                                        : fairscore::PartitionSource::PredictedLabels;
    if (o->fit_name) opts.fit_name = o->fit_name;
    return opts;
}

std::span<const double> span_of(const double* p, std::size_t n) {
    if (n > 0) require(p);
    return {p, n};
}

}  // namespace

extern "C" {

const char* fs_version(void) { return "0.1.0"; }

const char* fs_status_name(fs_status status) {
    switch (status) {
        case FS_OK: return "Ok";
        case FS_ERR_MALFORMED_ROW: return "MalformedRow";
        case FS_ERR_SCORE_OUT_OF_RANGE: return "ScoreOutOfRange";
        case FS_ERR_UNKNOWN_GROUP: return "UnknownGroup";
        case FS_ERR_EMPTY_INPUT: return "EmptyInput";
        case FS_ERR_EMPTY_GROUP: return "EmptyGroup";
        case FS_ERR_EMPTY_STRATUM: return "EmptyStratum";
        case FS_ERR_UNLABELED_DATASET: return "UnlabeledDataset";
        case FS_ERR_SINGLE_CLASS: return "SingleClass";
        case FS_ERR_LENGTH_MISMATCH: return "LengthMismatch";
        case FS_ERR_THETA_OUT_OF_RANGE: return "ThetaOutOfRange";
        case FS_ERR_SINGLE_MODE: return "SingleMode";
        case FS_ERR_EMPTY_GROUP_IN_PARTITION: return "EmptyGroupInPartition";
        case FS_ERR_INVALID_SPEC: return "InvalidSpec";
        case FS_ERR_MALFORMED_CURVE: return "MalformedCurve";
        case FS_ERR_INVALID_ARGUMENT: return "InvalidArgument";
        case FS_ERR_IO: return "Io";
        case FS_ERR_INTERNAL: return "Internal";
    }
    return "Unknown";
}

const char* fs_last_error(void) { return g_last_error.c_str(); }

void fs_string_free(char* s) { std::free(s); }

fs_group fs_derive_pair_group(fs_group left, fs_group right) {
    fairscore::RecordPairRaw raw;
    raw.group_left = left == FS_GROUP_MINORITY ? fairscore::GroupId::Minority
                                               : fairscore::GroupId::Majority;
    raw.group_right = right == FS_GROUP_MINORITY ? fairscore::GroupId::Minority
                                                 : fairscore::GroupId::Majority;
    return group_to_c(fairscore::derive_pair_group(raw));
}

fs_status fs_dataset_create(size_t n, const char* const* ids, const double* scores,
                            const fs_group* groups, const int* labels, fs_dataset** out) {
    return guarded([&] {
        require(out);
        if (n > 0) require(scores, groups);
        std::vector<fairscore::ScoredPair> pairs;
        pairs.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            fairscore::ScoredPair p;
            p.id = ids && ids[i] ? ids[i] : "p" + std::to_string(i + 1);
            p.score = scores[i];
            p.group = group_of(groups[i]);
            if (labels && labels[i] != FS_LABEL_MISSING) p.label = labels[i];
            pairs.push_back(std::move(p));
        }
        *out = new fs_dataset{fairscore::ScoreDataset(std::move(pairs))};
    });
}

fs_status fs_dataset_load_csv(const char* path, fs_schema schema, const fs_vocabulary* vocab,
                              fs_dataset** out) {
    return guarded([&] {
        require(path, out);
        *out = new fs_dataset{
            fairscore::load_dataset_file(path, schema_of(schema), vocab_of(vocab))};
    });
}

fs_status fs_dataset_parse_csv(const char* data, size_t len, fs_schema schema,
                               const fs_vocabulary* vocab, fs_dataset** out) {
    return guarded([&] {
        require(out);
        if (len > 0) require(data);
        std::istringstream in(std::string(data ? data : "", len));
        *out = new fs_dataset{fairscore::load_dataset(in, schema_of(schema), vocab_of(vocab))};
    });
}

fs_status fs_dataset_save_csv(const fs_dataset* d, const char* path, const fs_vocabulary* vocab) {
    return guarded([&] {
        require(d, path);
        fairscore::write_dataset_file(path, d->value, vocab_of(vocab));
    });
}

fs_status fs_dataset_to_csv(const fs_dataset* d, const fs_vocabulary* vocab, char** out) {
    return guarded([&] {
        require(d, out);
        std::ostringstream os;
        fairscore::write_dataset(os, d->value, vocab_of(vocab));
        *out = dup_string(os.str());
    });
}

void fs_dataset_free(fs_dataset* d) { delete d; }

size_t fs_dataset_size(const fs_dataset* d) { return d ? d->value.size() : 0; }

size_t fs_dataset_group_count(const fs_dataset* d, fs_group group) {
    if (!d) return 0;
    return d->value.count(group == FS_GROUP_MINORITY ? fairscore::GroupId::Minority
                                                     : fairscore::GroupId::Majority);
}

int fs_dataset_is_labeled(const fs_dataset* d) { return d && d->value.labeled() ? 1 : 0; }

fs_status fs_dataset_get(const fs_dataset* d, size_t index, double* score, fs_group* group,
                         int* label) {
    return guarded([&] {
        require(d);
        if (index >= d->value.size()) {
            throw Error(ErrorCode::InvalidArgument, "pair index out of range");
        }
        const auto& p = d->value[index];
        if (score) *score = p.score;
        if (group) *group = group_to_c(p.group);
        if (label) *label = p.label ? *p.label : FS_LABEL_MISSING;
    });
}

fs_status fs_add_jitter(const double* scores, size_t n, double sigma, uint64_t seed,
                        double* out) {
    return guarded([&] {
        if (n > 0) require(out);
        const auto jittered = fairscore::add_jitter(span_of(scores, n), sigma, seed);
        std::copy(jittered.begin(), jittered.end(), out);
    });
}

fs_status fs_w1_distance(const double* x, size_t nx, const double* y, size_t ny, double* out) {
    return guarded([&] {
        require(out);
        *out = fairscore::w1_distance(span_of(x, nx), span_of(y, ny));
    });
}

fs_status fs_auc(const fs_dataset* d, double* out) {
    return guarded([&] {
        require(d, out);
        *out = fairscore::auc(d->value);
    });
}

fs_status fs_score_bias(const fs_dataset* d, fs_metric metric, double* out) {
    return guarded([&] {
        require(d, out);
        *out = fairscore::score_bias(d->value, metric_of(metric));
    });
}

fs_status fs_threshold_bias(const fs_dataset* d, fs_metric metric, double theta, double* out) {
    return guarded([&] {
        require(d, out);
        *out = fairscore::threshold_bias(d->value, metric_of(metric), theta);
    });
}

fs_status fs_risk_estimate(const double* original, size_t n_original, const double* calibrated,
                           size_t n_calibrated, double* out) {
    return guarded([&] {
        require(out);
        *out = fairscore::risk_estimate(span_of(original, n_original),
                                        span_of(calibrated, n_calibrated));
    });
}

fs_status fs_calib_fit(const fs_dataset* d, double sigma, uint64_t seed, fs_calib_model** out) {
    return guarded([&] {
        require(d, out);
        *out = new fs_calib_model{fairscore::fit_calib(d->value, sigma, seed)};
    });
}

fs_status fs_calib_calibrate(const fs_calib_model* m, double score, fs_group group, double* out) {
    return guarded([&] {
        require(m, out);
        *out = fairscore::calibrate(m->value, score, group_of(group));
    });
}

fs_status fs_calib_calibrate_dataset(const fs_calib_model* m, const fs_dataset* d,
                                     fs_dataset** out) {
    return guarded([&] {
        require(m, d, out);
        *out = new fs_dataset{fairscore::calibrate_dataset(m->value, d->value)};
    });
}

fs_status fs_calib_alpha(const fs_calib_model* m, double* out) {
    return guarded([&] {
        require(m, out);
        *out = m->value.group_scores().alpha;
    });
}

fs_status fs_calib_to_json(const fs_calib_model* m, char** out) {
    return guarded([&] {
        require(m, out);
        *out = dup_string(fairscore::calib_model_to_json(m->value));
    });
}

fs_status fs_calib_from_json(const char* json, fs_calib_model** out) {
    return guarded([&] {
        require(json, out);
        *out = new fs_calib_model{fairscore::calib_model_from_json(json)};
    });
}

void fs_calib_free(fs_calib_model* m) { delete m; }

void fs_meanshift_config_default(fs_meanshift_config* cfg) {
    if (!cfg) return;
    const fairscore::MeanshiftConfig d;
    *cfg = {d.bandwidth, d.max_iterations, d.convergence_tol, d.merge_radius};
}

fs_status fs_meanshift_threshold(const double* scores, size_t n, const fs_meanshift_config* cfg,
                                 double* out) {
    return guarded([&] {
        require(out);
        *out = fairscore::meanshift_threshold(span_of(scores, n), meanshift_of(cfg));
    });
}

fs_status fs_cond_fit(const fs_dataset* d, double sigma, uint64_t seed,
                      const double* gamma_override, const fs_meanshift_config* cfg,
                      int use_true_labels, fs_cond_model** out) {
    return guarded([&] {
        require(d, out);
        std::optional<double> gamma;
        if (gamma_override) gamma = *gamma_override;
        *out = new fs_cond_model{fairscore::fit_conditional(
            d->value, sigma, seed, gamma, meanshift_of(cfg),
            use_true_labels ? fairscore::PartitionSource::TrueLabels
                            : fairscore::PartitionSource::PredictedLabels)};
    });
}

fs_status fs_cond_calibrate(const fs_cond_model* m, double score, fs_group group, double* out) {
    return guarded([&] {
        require(m, out);
        *out = fairscore::cond_calibrate(m->value, score, group_of(group));
    });
}

fs_status fs_cond_calibrate_dataset(const fs_cond_model* m, const fs_dataset* d,
                                    fs_dataset** out) {
    return guarded([&] {
        require(m, d, out);
        *out = new fs_dataset{fairscore::cond_calibrate_dataset(m->value, d->value)};
    });
}

fs_status fs_cond_gamma(const fs_cond_model* m, double* out) {
    return guarded([&] {
        require(m, out);
        *out = m->value.gamma;
    });
}

fs_status fs_cond_to_json(const fs_cond_model* m, char** out) {
    return guarded([&] {
        require(m, out);
        *out = dup_string(fairscore::cond_model_to_json(m->value));
    });
}

fs_status fs_cond_from_json(const char* json, fs_cond_model** out) {
    return guarded([&] {
        require(json, out);
        *out = new fs_cond_model{fairscore::cond_model_from_json(json)};
    });
}

void fs_cond_free(fs_cond_model* m) { delete m; }

void fs_synth_spec_default(fs_synth_spec* spec) {
    if (!spec) return;
    const fairscore::SynthSpec d;
    *spec = {d.n_minority,
             d.n_majority,
             d.pos_rate_a,
             d.pos_rate_b,
             {d.minority_pos.shape1, d.minority_pos.shape2},
             {d.minority_neg.shape1, d.minority_neg.shape2},
             {d.majority_pos.shape1, d.majority_pos.shape2},
             {d.majority_neg.shape1, d.majority_neg.shape2},
             d.seed};
}

fs_status fs_generate(const fs_synth_spec* spec, fs_dataset** out) {
    return guarded([&] {
        require(spec, out);
        fairscore::SynthSpec s;
        s.n_minority = spec->n_minority;
        s.n_majority = spec->n_majority;
        s.pos_rate_a = spec->pos_rate_a;
        s.pos_rate_b = spec->pos_rate_b;
        s.minority_pos = {spec->minority_pos.shape1, spec->minority_pos.shape2};
        s.minority_neg = {spec->minority_neg.shape1, spec->minority_neg.shape2};
        s.majority_pos = {spec->majority_pos.shape1, spec->majority_pos.shape2};
        s.majority_neg = {spec->majority_neg.shape1, spec->majority_neg.shape2};
        s.seed = spec->seed;
        *out = new fs_dataset{fairscore::generate(s)};
    });
}

void fs_run_options_default(fs_run_options* opts) {
    if (!opts) return;
    const fairscore::RunOptions d;
    *opts = fs_run_options{};
    opts->algorithm = FS_ALGORITHM_CALIB;
    opts->sigma = d.sigma;
    opts->seed = d.seed;
    fs_meanshift_config_default(&opts->meanshift);
}

fs_status fs_measure(const fs_dataset* d, const fs_run_options* opts, const char* curve_dir,
                     char** report_json) {
    return guarded([&] {
        require(d, report_json);
        const auto options = options_of(opts);
        const auto result = fairscore::measure(d->value, options);
        if (curve_dir) fairscore::write_curves(curve_dir, result.reports);
        *report_json = dup_string(fairscore::report_json(result, options));
    });
}

fs_status fs_calibrate_run(const fs_dataset* query, const fs_dataset* fit,
                           const fs_run_options* opts, const char* curve_dir,
                           fs_dataset** calibrated, char** report_json, char** model_json) {
    return guarded([&] {
        require(query, calibrated, report_json);
        const auto options = options_of(opts);
        auto result = fairscore::run_calibration(query->value, fit ? &fit->value : nullptr, options);
        if (curve_dir) fairscore::write_curves(curve_dir, result.reports);
        auto dataset = std::make_unique<fs_dataset>(fs_dataset{std::move(result.calibrated)});
        std::unique_ptr<char, decltype(&std::free)> report(
            dup_string(fairscore::report_json(result, options)), &std::free);
        if (model_json) *model_json = dup_string(result.model_json);
        *report_json = report.release();
        *calibrated = dataset.release();
    });
}

fs_status fs_plot_gap_svg(const char* curve_a_path, const char* label_a, const char* curve_b_path,
                          const char* label_b, const char* title, char** svg, double* area) {
    return guarded([&] {
        require(curve_a_path, curve_b_path, svg);
        auto load = [](const char* path) {
            std::ifstream in(path, std::ios::binary);
            if (!in) throw Error(ErrorCode::Io, std::string("cannot open '") + path + "'");
            return fairscore::read_curve(in);
        };
        auto stem = [](const char* path) { return std::filesystem::path(path).stem().string(); };
        std::vector<fairscore::PlotSeries> series{
            {label_a ? label_a : stem(curve_a_path), load(curve_a_path)},
            {label_b ? label_b : stem(curve_b_path), load(curve_b_path)}};
        const auto plot = fairscore::render_gap_plot(series, title ? title : "");
        *svg = dup_string(plot.svg);
        if (area) *area = plot.gap_area;
    });
}

}  // extern "C"
