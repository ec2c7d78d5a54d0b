#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "fairscore/fairscore.h"

namespace {

const double kNoisy[] = {0.46, 0.80, 0.89, 0.72, 0.85, 0.65, 0.37, 0.97,
                         0.35, 0.39, 0.31, 0.28, 0.25, 0.22, 0.18};
const char kGroups[] = "aabababbbababbb";

fs_dataset* example() {
    std::vector<fs_group> groups;
    for (int i = 0; i < 15; ++i) groups.push_back(kGroups[i] == 'a' ? FS_GROUP_MINORITY : FS_GROUP_MAJORITY);
    fs_dataset* d = nullptr;
    REQUIRE(fs_dataset_create(15, nullptr, kNoisy, groups.data(), nullptr, &d) == FS_OK);
    return d;
}

std::string take(char* s) {
    std::string out(s);
    fs_string_free(s);
    return out;
}

}  // namespace

TEST_CASE("status names and version") {
    CHECK(std::strcmp(fs_status_name(FS_OK), "Ok") == 0);
    CHECK(std::strcmp(fs_status_name(FS_ERR_SINGLE_MODE), "SingleMode") == 0);
    CHECK(std::strlen(fs_version()) > 0);
    CHECK(fs_derive_pair_group(FS_GROUP_MAJORITY, FS_GROUP_MINORITY) == FS_GROUP_MINORITY);
    CHECK(fs_derive_pair_group(FS_GROUP_MAJORITY, FS_GROUP_MAJORITY) == FS_GROUP_MAJORITY);
}

TEST_CASE("null arguments are rejected, not dereferenced") {
    double out = 0;
    CHECK(fs_score_bias(nullptr, FS_METRIC_DP, &out) == FS_ERR_INVALID_ARGUMENT);
    CHECK(fs_calib_fit(nullptr, 0.0, 0, nullptr) == FS_ERR_INVALID_ARGUMENT);
    CHECK(std::strlen(fs_last_error()) > 0);
    fs_dataset_free(nullptr);
    fs_calib_free(nullptr);
    fs_cond_free(nullptr);
    fs_string_free(nullptr);
}

TEST_CASE("dataset handle") {
    fs_dataset* d = example();
    CHECK(fs_dataset_size(d) == 15);
    CHECK(fs_dataset_group_count(d, FS_GROUP_MINORITY) == 6);
    CHECK(fs_dataset_is_labeled(d) == 0);
    double s = 0;
    fs_group g = FS_GROUP_MINORITY;
    int label = 0;
    CHECK(fs_dataset_get(d, 7, &s, &g, &label) == FS_OK);
    CHECK(s == 0.97);
    CHECK(g == FS_GROUP_MAJORITY);
    CHECK(label == FS_LABEL_MISSING);
    CHECK(fs_dataset_get(d, 15, &s, nullptr, nullptr) == FS_ERR_INVALID_ARGUMENT);

    char* csv = nullptr;
    REQUIRE(fs_dataset_to_csv(d, nullptr, &csv) == FS_OK);
    const std::string text = take(csv);
    CHECK(text.rfind("id,score,group,label\np1,0.46,a,\n", 0) == 0);
    fs_dataset* back = nullptr;
    REQUIRE(fs_dataset_parse_csv(text.data(), text.size(), FS_SCHEMA_PAIR, nullptr, &back) == FS_OK);
    CHECK(fs_dataset_size(back) == 15);
    fs_dataset_free(back);
    fs_dataset_free(d);
}

TEST_CASE("parse errors surface their status and message") {
    const char bad[] = "id,score,group,label\np1,1.5,a,\n";
    fs_dataset* d = nullptr;
    CHECK(fs_dataset_parse_csv(bad, sizeof bad - 1, FS_SCHEMA_PAIR, nullptr, &d) ==
          FS_ERR_SCORE_OUT_OF_RANGE);
    CHECK(d == nullptr);
    CHECK(std::string(fs_last_error()).find("1.5") != std::string::npos);

    const char unknown[] = "id,score,group,label\np1,0.5,z,\n";
    const char* majority[] = {"b"};
    fs_vocabulary vocab{"a", majority, 1};
    CHECK(fs_dataset_parse_csv(unknown, sizeof unknown - 1, FS_SCHEMA_PAIR, &vocab, &d) ==
          FS_ERR_UNKNOWN_GROUP);
    CHECK(fs_dataset_load_csv("/nonexistent/x.csv", FS_SCHEMA_PAIR, nullptr, &d) == FS_ERR_IO);
}

TEST_CASE("calibration through the C surface") {
    fs_dataset* d = example();
    fs_calib_model* m = nullptr;
    REQUIRE(fs_calib_fit(d, 0.0, 0, &m) == FS_OK);
    double alpha = 0, v = 0;
    CHECK(fs_calib_alpha(m, &alpha) == FS_OK);
    CHECK(alpha == doctest::Approx(0.4));
    CHECK(fs_calib_calibrate(m, 0.34, FS_GROUP_MAJORITY, &v) == FS_OK);
    CHECK(std::abs(v - 0.37) <= 1e-9);
    CHECK(fs_calib_calibrate(m, 2.0, FS_GROUP_MAJORITY, &v) == FS_ERR_SCORE_OUT_OF_RANGE);

    char* json = nullptr;
    REQUIRE(fs_calib_to_json(m, &json) == FS_OK);
    fs_calib_model* m2 = nullptr;
    REQUIRE(fs_calib_from_json(json, &m2) == FS_OK);
    fs_string_free(json);
    fs_dataset* out = nullptr;
    REQUIRE(fs_calib_calibrate_dataset(m2, d, &out) == FS_OK);
    double s = 0;
    fs_dataset_get(out, 0, &s, nullptr, nullptr);
    CHECK(std::abs(s - 0.37) <= 1e-12);

    double before = 0, after = 0;
    fs_score_bias(d, FS_METRIC_DP, &before);
    fs_score_bias(out, FS_METRIC_DP, &after);
    CHECK(after < before);
    CHECK(fs_score_bias(d, FS_METRIC_EO, &after) == FS_ERR_UNLABELED_DATASET);
    CHECK(fs_threshold_bias(d, FS_METRIC_DP, 1.5, &after) == FS_ERR_THETA_OUT_OF_RANGE);

    fs_dataset_free(out);
    fs_calib_free(m2);
    fs_calib_free(m);
    fs_dataset_free(d);
}

TEST_CASE("conditional calibration through the C surface") {
    fs_dataset* d = example();
    double gamma = 0;
    CHECK(fs_meanshift_threshold(kNoisy, 15, nullptr, &gamma) == FS_OK);
    CHECK(gamma > 0.46);
    CHECK(gamma < 0.65);
    const double flat[] = {0.5, 0.5, 0.5};
    CHECK(fs_meanshift_threshold(flat, 3, nullptr, &gamma) == FS_ERR_SINGLE_MODE);

    const double override_gamma = 0.57;
    fs_cond_model* m = nullptr;
    REQUIRE(fs_cond_fit(d, 0.0, 0, &override_gamma, nullptr, 0, &m) == FS_OK);
    double v = 0;
    CHECK(fs_cond_calibrate(m, 0.34, FS_GROUP_MAJORITY, &v) == FS_OK);
    CHECK(std::abs(v - (0.39 / 3 + 2 * 0.31 / 3)) <= 1e-9);
    CHECK(fs_cond_gamma(m, &gamma) == FS_OK);
    CHECK(gamma == 0.57);
    char* json = nullptr;
    REQUIRE(fs_cond_to_json(m, &json) == FS_OK);
    fs_cond_model* m2 = nullptr;
    CHECK(fs_cond_from_json(json, &m2) == FS_OK);
    fs_string_free(json);
    fs_cond_model* none = nullptr;
    CHECK(fs_cond_fit(d, 0.0, 0, nullptr, nullptr, 1, &none) == FS_ERR_UNLABELED_DATASET);
    const double high = 0.9;
    CHECK(fs_cond_fit(d, 0.0, 0, &high, nullptr, 0, &none) == FS_ERR_EMPTY_GROUP_IN_PARTITION);
    fs_cond_free(m2);
    fs_cond_free(m);
    fs_dataset_free(d);
}

TEST_CASE("numeric helpers") {
    const double x[] = {0.2};
    const double y[] = {0.7};
    double out = 0;
    CHECK(fs_w1_distance(x, 1, y, 1, &out) == FS_OK);
    CHECK(out == doctest::Approx(0.5));
    CHECK(fs_w1_distance(x, 0, y, 1, &out) == FS_ERR_EMPTY_INPUT);
    CHECK(fs_risk_estimate(x, 1, y, 1, &out) == FS_OK);
    CHECK(out == doctest::Approx(0.5));
    CHECK(fs_risk_estimate(x, 1, y, 0, &out) == FS_ERR_LENGTH_MISMATCH);
    double j[3];
    const double s[] = {0.45, 0.82, 0.90};
    CHECK(fs_add_jitter(s, 3, 0.0, 42, j) == FS_OK);
    CHECK(j[1] == 0.82);
}

TEST_CASE("generator and pipelines") {
    fs_synth_spec spec;
    fs_synth_spec_default(&spec);
    CHECK(spec.n_minority == 1000);
    spec.n_minority = spec.n_majority = 300;
    spec.minority_pos = {5.0, 2.0};
    fs_dataset* d = nullptr;
    REQUIRE(fs_generate(&spec, &d) == FS_OK);
    CHECK(fs_dataset_is_labeled(d) == 1);
    double a = 0;
    CHECK(fs_auc(d, &a) == FS_OK);
    CHECK(a > 0.8);

    fs_run_options opts;
    fs_run_options_default(&opts);
    const fs_metric metrics[] = {FS_METRIC_DP, FS_METRIC_EOD};
    opts.metrics = metrics;
    opts.n_metrics = 2;
    char* report = nullptr;
    REQUIRE(fs_measure(d, &opts, nullptr, &report) == FS_OK);
    CHECK(take(report).find("\"eod\"") != std::string::npos);

    const auto dir = std::filesystem::temp_directory_path() / "fairscore_capi_curves";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    opts.algorithm = FS_ALGORITHM_CCALIB;
    fs_dataset* cal = nullptr;
    char* model = nullptr;
    REQUIRE(fs_calibrate_run(d, nullptr, &opts, dir.c_str(), &cal, &report, &model) == FS_OK);
    CHECK(take(report).find("\"ccalib\"") != std::string::npos);
    CHECK(take(model).find("\"gamma\"") != std::string::npos);
    CHECK(fs_dataset_size(cal) == 600);

    char* svg = nullptr;
    double area = -1;
    const auto pa = (dir / "dp_minority_before.csv").string();
    const auto pb = (dir / "dp_majority_before.csv").string();
    REQUIRE(fs_plot_gap_svg(pa.c_str(), "minority", pb.c_str(), "majority", "DP", &svg, &area) == FS_OK);
    CHECK(take(svg).rfind("<svg", 0) == 0);
    double dp = 0;
    fs_score_bias(d, FS_METRIC_DP, &dp);
    CHECK(area == doctest::Approx(dp).epsilon(1e-12));
    CHECK(fs_plot_gap_svg("/nonexistent", "x", pb.c_str(), "y", nullptr, &svg, nullptr) == FS_ERR_IO);

    spec.n_minority = 0;
    fs_dataset* bad = nullptr;
    CHECK(fs_generate(&spec, &bad) == FS_ERR_INVALID_SPEC);

    std::filesystem::remove_all(dir);
    fs_dataset_free(cal);
    fs_dataset_free(d);
}
