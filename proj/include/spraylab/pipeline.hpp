#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "spraylab/engine.hpp"
#include "spraylab/features.hpp"
#include "spraylab/forest.hpp"

namespace spraylab {

/// Node combinations of the experiment: ten (pedestrians, cars) training
/// pairs plus the weekday/holiday evaluation scenarios; accident count is
/// always 1 and rescue centres 2.
struct ExperimentPlan {
    std::vector<std::pair<int, int>> training_pairs;
    std::pair<int, int> weekday{60, 70};
    std::pair<int, int> holiday{75, 85};
    std::vector<std::uint64_t> seeds;

    static ExperimentPlan standard();
};

/// Settings text for a scenario with the standard four groups and traffic
/// parameters, ready for load_settings.
std::string scenario_settings_text(const std::string& name, int pedestrians, int cars,
                                   std::uint64_t seed);

/// Host names implied by a config, group order then per-group index.
std::vector<std::string> host_names(const SimConfig& config);

// simulate: run one scenario file and write its three reports.
RunSummary cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
                        const std::string& out_dir, double scale = 1.0);

struct TrainOptions {
    std::string reports_dir;
    int days = 10;
    LabelRule label_rule;
    ForestConfig forest;
    double train_fraction = 0.7;
    std::uint64_t split_seed = 1;
    std::string out_dir;
};

struct TrainOutputs {
    Dataset dataset;
    ClassificationMetrics metrics;
    std::string model_path;
    std::string report_path;
    std::string dataset_path;
};

/// train: day reports (or precomputed feature/label CSVs) -> per-day CSVs,
/// dataset.csv, model.txt and classification_report.txt.
TrainOutputs cmd_train(const TrainOptions& options);

struct PredictOutputs {
    std::vector<std::string> hq_nodes;
    std::string fragment_path;  // `Group.highQualityNodes = ...` settings line
    std::string csv_path;       // per-node features + prediction
};

/// predict: connectivity report of a target run -> high-quality node list.
PredictOutputs cmd_predict(const std::string& model_path, const std::string& connectivity_path,
                           const std::string& out_dir);

std::vector<std::string> predict_hq(const RandomForest& model,
                                    const std::vector<FeatureVector>& features);

/// One evaluation arm: same scenario and seed, only the HQ set differs.
RunReports run_arm(SimConfig config, const std::set<std::string>& hq_set);

struct ArmMetrics {
    std::string scenario;
    std::string seed_label;  // seed number, or "mean"/"min"/"max"
    std::string arm;         // "original" | "hq" | "random"
    double delivery_prob = 0.0;
    double overhead_ratio = 0.0;
    double latency_avg = 0.0;
    double buffertime_avg = 0.0;
};

struct CompareOptions {
    std::vector<std::string> config_paths;
    std::string model_path;
    std::vector<std::uint64_t> seeds;
    std::string out_dir;
    double scale = 1.0;
};

struct CompareOutputs {
    std::vector<ArmMetrics> rows;  // per-seed rows then mean/min/max, CSV order
    std::string csv_path;
    std::string table_path;
    std::vector<std::string> chart_paths;
};

/// compare: per scenario and seed runs the original arm, predicts HQ nodes
/// from its own contact trace, re-runs with the HQ set and with an
/// equal-size random control set, and emits comparison.csv,
/// comparison_table.txt and one grouped-bar chart per metric. The three
/// arms of a (scenario, seed) share identical mobility and traffic, which
/// is asserted by comparing their connectivity reports byte for byte.
CompareOutputs cmd_compare(const CompareOptions& options);

std::string comparison_csv(const std::vector<ArmMetrics>& rows);
std::vector<ArmMetrics> parse_comparison_csv(const std::string& text);

/// plot: regenerate the four metric charts from a comparison CSV.
std::vector<std::string> cmd_plot(const std::string& csv_path, const std::string& out_dir);

} // namespace spraylab
