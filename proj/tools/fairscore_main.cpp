// fairscore command-line tool. Every computation goes through the C API.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fairscore/fairscore.h"
#include "json.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitAlgorithm = 3;
constexpr int kExitInternal = 4;

struct DatasetDeleter {
    void operator()(fs_dataset* d) const { fs_dataset_free(d); }
};
using DatasetPtr = std::unique_ptr<fs_dataset, DatasetDeleter>;

struct StringDeleter {
    void operator()(char* s) const { fs_string_free(s); }
};
using CString = std::unique_ptr<char, StringDeleter>;

/// Raised when a C API call fails; carries the process exit code.
struct CommandFailure {
    int exit_code;
};

int exit_code_for(fs_status status) {
    switch (status) {
        case FS_OK: return 0;
        case FS_ERR_SINGLE_MODE:
        case FS_ERR_EMPTY_GROUP_IN_PARTITION:
        case FS_ERR_EMPTY_GROUP:
        case FS_ERR_EMPTY_STRATUM:
        case FS_ERR_SINGLE_CLASS:
        case FS_ERR_EMPTY_INPUT:
        case FS_ERR_LENGTH_MISMATCH:
            return kExitAlgorithm;
        case FS_ERR_INTERNAL: return kExitInternal;
        default: return kExitInput;
    }
}

void check(fs_status status, const std::string& what) {
    if (status == FS_OK) return;
    std::cerr << "fairscore: " << what << ": " << fs_status_name(status) << ": " << fs_last_error()
              << '\n';
    if (status == FS_ERR_SINGLE_MODE) {
        std::cerr << "fairscore: pass --gamma to set the C-Calib split threshold explicitly\n";
    }
    throw CommandFailure{exit_code_for(status)};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        std::cerr << "fairscore: cannot write " << path.string() << '\n';
        throw CommandFailure{kExitInput};
    }
}

/// Reads `--config` JSON files. Top-level keys apply to the subcommand being
/// run; nested objects name a subcommand section explicitly; arrays become
/// repeated values.
class JsonConfig : public CLI::Config {
public:
    explicit JsonConfig(const CLI::App* app) : app_(app) {}

    std::string to_config(const CLI::App* app, bool default_also, bool,
                          std::string) const override {
        nlohmann::ordered_json j;
        for (const CLI::Option* opt : app->get_options({})) {
            if (opt->get_configurable() && !opt->get_lnames().empty()) {
                const auto results = opt->results();
                if (!results.empty()) {
                    j[opt->get_lnames().front()] =
                        results.size() == 1 ? nlohmann::ordered_json(results.front())
                                            : nlohmann::ordered_json(results);
                } else if (default_also && !opt->get_default_str().empty()) {
                    j[opt->get_lnames().front()] = opt->get_default_str();
                }
            }
        }
        return j.dump(2);
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json j;
        try {
            input >> j;
        } catch (const nlohmann::json::exception& e) {
            throw CLI::ConversionError(std::string("invalid JSON config: ") + e.what());
        }
        std::vector<CLI::ConfigItem> items;
        std::vector<std::string> root;
        for (const CLI::App* sub : app_->get_subcommands()) root.push_back(sub->get_name());
        collect(j, root, items);
        return items;
    }

private:
    const CLI::App* app_;

    static std::string scalar(const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    }

    static void collect(const nlohmann::json& j, const std::vector<std::string>& parents,
                        std::vector<CLI::ConfigItem>& items) {
        if (!j.is_object()) throw CLI::ConversionError("JSON config must be an object");
        for (const auto& [key, value] : j.items()) {
            if (value.is_object()) {
                std::vector<std::string> nested{key};
                collect(value, nested, items);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            if (value.is_array()) {
                for (const auto& v : value) item.inputs.push_back(scalar(v));
            } else {
                item.inputs.push_back(scalar(value));
            }
            items.push_back(std::move(item));
        }
    }
};

struct InputFlags {
    std::string input;
    std::string schema = "pair";
    std::string minority_token = "a";
    std::vector<std::string> majority_tokens;
    std::string labels = "auto";
    std::vector<std::string> metrics{"dp"};
    std::vector<double> thresholds{0.1, 0.5, 0.95};
    std::string out_dir = ".";
};

struct CalibFlags {
    std::string algorithm = "calib";
    double sigma = 0.05;
    std::uint64_t seed = 0;
    std::optional<double> gamma;
    double bandwidth = 0.1;
    int max_iter = 500;
    double tol = 1e-4;
    std::optional<double> merge_radius;
    std::string fit = "self";
    bool use_true_labels = false;
};

void add_input_flags(CLI::App* cmd, InputFlags& f) {
    cmd->add_option("--input", f.input, "Scored pairs CSV")->required();
    cmd->add_option("--schema", f.schema, "CSV layout")
        ->check(CLI::IsMember({"pair", "record"}))
        ->capture_default_str();
    cmd->add_option("--minority-token", f.minority_token, "Group token of the minority group")
        ->capture_default_str();
    cmd->add_option("--majority-token", f.majority_tokens,
                    "Accepted majority tokens (default: any other token)");
    cmd->add_option("--labels", f.labels, "Label handling")
        ->check(CLI::IsMember({"auto"}))
        ->capture_default_str();
    cmd->add_option("--metric", f.metrics, "Bias metrics")
        ->check(CLI::IsMember({"dp", "eo", "fprgap", "eod"}))
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--thresholds", f.thresholds, "Thresholds for pointwise gaps")
        ->delimiter(',')
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--out-dir", f.out_dir, "Directory for reports and curves")
        ->capture_default_str();
}

struct Vocab {
    std::string minority;
    std::vector<std::string> majority_storage;
    std::vector<const char*> majority;
    fs_vocabulary c{};

    explicit Vocab(const InputFlags& f) : minority(f.minority_token), majority_storage(f.majority_tokens) {
        for (const auto& t : majority_storage) majority.push_back(t.c_str());
        c.minority_token = minority.c_str();
        c.majority_tokens = majority.empty() ? nullptr : majority.data();
        c.n_majority_tokens = majority.size();
    }
    Vocab(const Vocab&) = delete;
    Vocab& operator=(const Vocab&) = delete;
};

fs_schema schema_of(const std::string& s) { return s == "record" ? FS_SCHEMA_RECORD : FS_SCHEMA_PAIR; }

fs_metric metric_of(const std::string& m) {
    if (m == "eo") return FS_METRIC_EO;
    if (m == "fprgap") return FS_METRIC_FPR_GAP;
    if (m == "eod") return FS_METRIC_EOD;
    return FS_METRIC_DP;
}

DatasetPtr load(const std::string& path, const InputFlags& f, const Vocab& vocab) {
    fs_dataset* d = nullptr;
    check(fs_dataset_load_csv(path.c_str(), schema_of(f.schema), &vocab.c, &d),
          "loading " + path);
    return DatasetPtr(d);
}

std::filesystem::path prepare_out_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        std::cerr << "fairscore: cannot create " << dir << ": " << ec.message() << '\n';
        throw CommandFailure{kExitInput};
    }
    return dir;
}

std::string pct(const nlohmann::json& v) {
    if (v.is_null()) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v.get<double>());
    return buf;
}

void print_summary(const std::string& report_text) {
    const auto report = nlohmann::json::parse(report_text);
    const bool calibrated = report.at("command") == "calibrate";
    const auto& ds = report.at("dataset");
    std::cout << "pairs: " << ds.at("n_pairs") << " (minority " << ds.at("n_minority")
              << ", majority " << ds.at("n_majority") << ")\n";
    for (const auto& m : report.at("metrics")) {
        std::cout << m.at("metric").get<std::string>() << " bias: " << pct(m.at("before"));
        if (calibrated) std::cout << " -> " << pct(m.at("after"));
        std::cout << '\n';
    }
    if (calibrated) {
        std::cout << "risk: " << pct(report.at("risk")) << '\n';
        std::cout << "auc: " << pct(report.at("auc_before")) << " -> "
                  << pct(report.at("auc_after")) << '\n';
        if (!report.at("gamma").is_null()) {
            std::cout << "gamma: " << report.at("gamma").get<double>() << '\n';
        }
    } else {
        std::cout << "auc: " << pct(report.at("auc")) << '\n';
    }
}

struct RunOptionsStorage {
    std::vector<fs_metric> metrics;
    std::vector<double> thresholds;
    std::string fit_name;
    fs_run_options c{};
};

void fill_options(RunOptionsStorage& s, const InputFlags& in, const CalibFlags* cal) {
    fs_run_options_default(&s.c);
    for (const auto& m : in.metrics) s.metrics.push_back(metric_of(m));
    s.thresholds = in.thresholds;
    s.c.metrics = s.metrics.data();
    s.c.n_metrics = s.metrics.size();
    s.c.thresholds = s.thresholds.data();
    s.c.n_thresholds = s.thresholds.size();
    if (!cal) return;
    s.c.algorithm = cal->algorithm == "none"     ? FS_ALGORITHM_NONE
                    : cal->algorithm == "ccalib" ? FS_ALGORITHM_CCALIB
                                                 : FS_ALGORITHM_CALIB;
    s.c.sigma = cal->sigma;
    s.c.seed = cal->seed;
    s.c.has_gamma = cal->gamma ? 1 : 0;
    s.c.gamma = cal->gamma.value_or(0.0);
    s.c.meanshift.bandwidth = cal->bandwidth;
    s.c.meanshift.max_iterations = cal->max_iter;
    s.c.meanshift.convergence_tol = cal->tol;
    s.c.meanshift.merge_radius = cal->merge_radius.value_or(cal->bandwidth / 2.0);
    s.c.use_true_labels = cal->use_true_labels ? 1 : 0;
    s.fit_name = cal->fit == "self" ? "self" : std::filesystem::path(cal->fit).filename().string();
    s.c.fit_name = s.fit_name.c_str();
}

int run_measure(const InputFlags& f) {
    const Vocab vocab(f);
    auto d = load(f.input, f, vocab);
    const auto dir = prepare_out_dir(f.out_dir);
    RunOptionsStorage opts;
    fill_options(opts, f, nullptr);
    char* report = nullptr;
    check(fs_measure(d.get(), &opts.c, dir.string().c_str(), &report), "measure");
    CString owned(report);
    write_text(dir / "report.json", report);
    print_summary(report);
    return 0;
}

int run_calibrate(const InputFlags& f, const CalibFlags& c) {
    const Vocab vocab(f);
    auto query = load(f.input, f, vocab);
    DatasetPtr fit;
    if (c.fit != "self") fit = load(c.fit, f, vocab);
    const auto dir = prepare_out_dir(f.out_dir);
    RunOptionsStorage opts;
    fill_options(opts, f, &c);

    fs_dataset* calibrated = nullptr;
    char* report = nullptr;
    char* model = nullptr;
    check(fs_calibrate_run(query.get(), fit.get(), &opts.c, dir.string().c_str(), &calibrated,
                           &report, &model),
          "calibrate");
    DatasetPtr out(calibrated);
    CString owned_report(report);
    CString owned_model(model);
    check(fs_dataset_save_csv(out.get(), (dir / "calibrated.csv").string().c_str(), &vocab.c),
          "writing calibrated.csv");
    write_text(dir / "report.json", report);
    if (model && *model) write_text(dir / "model.json", std::string(model) + "\n");
    print_summary(report);
    return 0;
}

struct GenerateFlags {
    fs_synth_spec spec{};
    std::vector<double> minority_pos, minority_neg, majority_pos, majority_neg;
    std::string output = "synthetic.csv";
};

int run_generate(GenerateFlags& g) {
    auto beta = [](const std::vector<double>& v, fs_beta& out) {
        if (v.size() == 2) out = {v[0], v[1]};
    };
    beta(g.minority_pos, g.spec.minority_pos);
    beta(g.minority_neg, g.spec.minority_neg);
    beta(g.majority_pos, g.spec.majority_pos);
    beta(g.majority_neg, g.spec.majority_neg);
    fs_dataset* d = nullptr;
    check(fs_generate(&g.spec, &d), "generate");
    DatasetPtr owned(d);
    const auto parent = std::filesystem::path(g.output).parent_path();
    if (!parent.empty()) prepare_out_dir(parent.string());
    check(fs_dataset_save_csv(d, g.output.c_str(), nullptr), "writing " + g.output);
    std::cout << "wrote " << fs_dataset_size(d) << " pairs to " << g.output << '\n';
    return 0;
}

struct PlotFlags {
    std::vector<std::string> inputs;
    std::vector<std::string> labels;
    std::string title;
    std::string output = "gap.svg";
};

int run_plot(const PlotFlags& p) {
    char* svg = nullptr;
    double area = 0.0;
    const char* label_a = p.labels.size() > 0 ? p.labels[0].c_str() : nullptr;
    const char* label_b = p.labels.size() > 1 ? p.labels[1].c_str() : nullptr;
    check(fs_plot_gap_svg(p.inputs[0].c_str(), label_a, p.inputs[1].c_str(), label_b,
                          p.title.empty() ? nullptr : p.title.c_str(), &svg, &area),
          "plot");
    CString owned(svg);
    const auto parent = std::filesystem::path(p.output).parent_path();
    if (!parent.empty()) prepare_out_dir(parent.string());
    write_text(p.output, svg);
    std::cout << "gap area: " << area << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Measure and remove threshold-integrated score bias between two groups"};
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<JsonConfig>(&app));
    app.set_config("--config", "", "JSON configuration file");

    InputFlags measure_flags;
    auto* measure = app.add_subcommand("measure", "Report score bias of a scored dataset");
    add_input_flags(measure, measure_flags);
    measure->fallthrough();

    InputFlags calib_input;
    CalibFlags calib_flags;
    auto* calibrate = app.add_subcommand("calibrate", "Calibrate scores and report bias before/after");
    add_input_flags(calibrate, calib_input);
    calibrate->add_option("--algorithm", calib_flags.algorithm, "Calibration algorithm")
        ->check(CLI::IsMember({"calib", "ccalib", "none"}))
        ->capture_default_str();
    calibrate->add_option("--sigma", calib_flags.sigma, "Jitter standard deviation")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    calibrate->add_option("--seed", calib_flags.seed, "Jitter seed")->capture_default_str();
    calibrate->add_option("--gamma", calib_flags.gamma, "C-Calib split threshold")
        ->check(CLI::Range(0.0, 1.0));
    calibrate->add_option("--bandwidth", calib_flags.bandwidth, "Meanshift bandwidth")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    calibrate->add_option("--max-iter", calib_flags.max_iter, "Meanshift iteration cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    calibrate->add_option("--tol", calib_flags.tol, "Meanshift convergence tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    calibrate->add_option("--merge-radius", calib_flags.merge_radius,
                          "Meanshift mode merge radius (default bandwidth/2)")
        ->check(CLI::PositiveNumber);
    calibrate->add_option("--fit", calib_flags.fit, "Fit set: 'self' or a CSV path")
        ->capture_default_str();
    calibrate->add_flag("--use-true-labels", calib_flags.use_true_labels,
                        "Split the fit set by its labels instead of gamma");
    calibrate->fallthrough();

    GenerateFlags gen;
    fs_synth_spec_default(&gen.spec);
    auto* generate = app.add_subcommand("generate", "Write a synthetic Beta-mixture dataset");
    generate->add_option("--n-minority", gen.spec.n_minority)->capture_default_str();
    generate->add_option("--n-majority", gen.spec.n_majority)->capture_default_str();
    generate->add_option("--pos-rate-a", gen.spec.pos_rate_a)->capture_default_str();
    generate->add_option("--pos-rate-b", gen.spec.pos_rate_b)->capture_default_str();
    generate->add_option("--minority-pos", gen.minority_pos, "Beta shapes, e.g. 8,2")
        ->expected(2)->delimiter(',');
    generate->add_option("--minority-neg", gen.minority_neg)->expected(2)->delimiter(',');
    generate->add_option("--majority-pos", gen.majority_pos)->expected(2)->delimiter(',');
    generate->add_option("--majority-neg", gen.majority_neg)->expected(2)->delimiter(',');
    generate->add_option("--seed", gen.spec.seed)->capture_default_str();
    generate->add_option("--output", gen.output, "Output CSV")->capture_default_str();
    generate->fallthrough();

    PlotFlags plot_flags;
    auto* plot = app.add_subcommand("plot", "Render two curve CSVs and their gap band as SVG");
    plot->add_option("--input", plot_flags.inputs, "Two curve CSVs")
        ->required()
        ->expected(2);
    plot->add_option("--label", plot_flags.labels, "Legend labels")->expected(0, 2);
    plot->add_option("--title", plot_flags.title);
    plot->add_option("--output", plot_flags.output, "Output SVG")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*measure) return run_measure(measure_flags);
        if (*calibrate) return run_calibrate(calib_input, calib_flags);
        if (*generate) return run_generate(gen);
        if (*plot) return run_plot(plot_flags);
    } catch (const CommandFailure& f) {
        return f.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "fairscore: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitUsage;
}
