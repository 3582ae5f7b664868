#include "spraylab/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spraylab/charts.hpp"
#include "spraylab/error.hpp"
#include "spraylab/rng.hpp"
#include "spraylab/text.hpp"

namespace fs = std::filesystem;

namespace spraylab {

namespace {

// Engine streams use 0 and 1; the control-arm draw gets its own stream so
// it can never perturb the simulations.
constexpr std::uint32_t kControlStream = 3;

const char* kArms[] = {"original", "hq", "random"};
const char* kMetricNames[] = {"delivery_prob", "overhead_ratio", "latency_avg",
                              "buffertime_avg"};
const char* kMetricTitles[] = {"Delivery probability", "Overhead ratio", "Latency avg (s)",
                               "Buffertime avg (s)"};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open file for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

double metric_of(const ArmMetrics& row, int metric) {
    switch (metric) {
        case 0: return row.delivery_prob;
        case 1: return row.overhead_ratio;
        case 2: return row.latency_avg;
        default: return row.buffertime_avg;
    }
}

} // namespace

ExperimentPlan ExperimentPlan::standard() {
    ExperimentPlan plan;
    plan.training_pairs = {{50, 60}, {50, 65}, {50, 70}, {55, 65}, {55, 60},
                           {60, 70}, {60, 80}, {60, 60}, {65, 75}, {70, 80}};
    for (std::uint64_t s = 1; s <= 10; ++s) plan.seeds.push_back(s);
    return plan;
}

std::string scenario_settings_text(const std::string& name, int pedestrians, int cars,
                                   std::uint64_t seed) {
    std::ostringstream out;
    out << "Scenario.name = " << name << "\n"
        << "Scenario.endTime = 43200\n"
        << "Scenario.updateInterval = 1.0\n"
        << "Scenario.rngSeed = " << seed << "\n"
        << "Scenario.nrofHostGroups = 4\n"
        << "btInterface.transmitSpeed = 250k\n"
        << "btInterface.transmitRange = 30\n"
        << "Group.movementModel = ShortestPathMapBasedMovement\n"
        << "Group.router = SprayAndWaitRouter\n"
        << "Group.bufferSize = 50M\n"
        << "Group.waitTime = 0, 120\n"
        << "Group.nrofInterfaces = 1\n"
        << "Group.interface1 = btInterface\n"
        << "Group.speed = 0.5, 1.5\n"
        << "Group.msgTtl = 300\n"
        << "Group1.groupID = p\n"
        << "Group1.nrofHosts = " << pedestrians << "\n"
        << "Group2.groupID = c\n"
        << "Group2.nrofHosts = " << cars << "\n"
        << "Group2.speed = 2.7, 13.9\n"
        << "Group3.groupID = a\n"
        << "Group3.nrofHosts = 1\n"
        << "Group3.movementModel = Stationary\n"
        << "Group3.fixedPosition = 1000, 1000\n"
        << "Group4.groupID = r\n"
        << "Group4.nrofHosts = 2\n"
        << "Group4.movementModel = Stationary\n"
        << "Group4.fixedPosition = 200, 200, 1600, 1600\n"
        << "Events1.interval = 25, 35\n"
        << "Events1.size = 500k, 1M\n"
        << "SprayAndWaitRouter.nrofCopies = 6\n"
        << "SprayAndWaitRouter.binaryMode = true\n"
        << "SprayAndWaitRouter.hqMultiplier = 2\n";
    return out.str();
}

std::vector<std::string> host_names(const SimConfig& config) {
    std::vector<std::string> names;
    for (const auto& g : config.groups)
        for (int i = 0; i < g.count; ++i) names.push_back(g.group_id + std::to_string(i));
    return names;
}

RunSummary cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
                        const std::string& out_dir, double scale) {
    SimConfig cfg = load_settings_file(config_path);
    if (seed) cfg.rng_seed = *seed;
    scale_config(cfg, scale);
    return run_to_files(cfg, out_dir);
}

TrainOutputs cmd_train(const TrainOptions& options) {
    std::vector<std::vector<FeatureVector>> features_days;
    std::vector<std::vector<LabeledNode>> labels_days;
    std::vector<int> missing;
    for (int d = 1; d <= options.days; ++d) {
        std::string day = "day" + std::to_string(d);
        fs::path conn = fs::path(options.reports_dir) / (day + "_ConnectivityDtnsim2Report.txt");
        fs::path delv = fs::path(options.reports_dir) / (day + "_DeliveredMessagesReport.txt");
        fs::path fcsv = fs::path(options.reports_dir) / ("features_" + day + ".csv");
        fs::path lcsv = fs::path(options.reports_dir) / ("labels_" + day + ".csv");
        if (fs::exists(conn) && fs::exists(delv)) {
            auto events = parse_connectivity(read_file(conn.string()));
            auto records = parse_delivered(read_file(delv.string()));
            features_days.push_back(compute_features(events));
            labels_days.push_back(label_high_quality(records, options.label_rule));
        } else if (fs::exists(fcsv) && fs::exists(lcsv)) {
            features_days.push_back(parse_features_csv(read_file(fcsv.string()), fcsv.string()));
            labels_days.push_back(parse_labels_csv(read_file(lcsv.string()), lcsv.string()));
        } else {
            missing.push_back(d);
        }
    }
    if (!missing.empty()) {
        std::ostringstream msg;
        msg << "missing day reports under " << options.reports_dir << ":";
        for (int d : missing) msg << " day" << d;
        throw ValidationError(msg.str());
    }

    fs::create_directories(options.out_dir);
    for (std::size_t d = 0; d < features_days.size(); ++d) {
        std::string day = "day" + std::to_string(d + 1);
        write_file((fs::path(options.out_dir) / ("features_" + day + ".csv")).string(),
                   features_to_csv(features_days[d]));
        write_file((fs::path(options.out_dir) / ("labels_" + day + ".csv")).string(),
                   labels_to_csv(labels_days[d]));
    }

    TrainOutputs out;
    out.dataset = build_dataset(features_days, labels_days);
    out.dataset_path = (fs::path(options.out_dir) / "dataset.csv").string();
    write_file(out.dataset_path, dataset_to_csv(out.dataset));

    auto [train, test] = train_test_split(out.dataset, options.train_fraction, options.split_seed);
    RandomForest forest = RandomForest::fit(train, options.forest);
    out.metrics = evaluate(forest, test);

    out.model_path = (fs::path(options.out_dir) / "model.txt").string();
    forest.save(out.model_path);
    out.report_path = (fs::path(options.out_dir) / "classification_report.txt").string();
    write_file(out.report_path, classification_report(out.metrics));
    return out;
}

std::vector<std::string> predict_hq(const RandomForest& model,
                                    const std::vector<FeatureVector>& features) {
    std::vector<std::string> hq;
    for (const auto& fv : features) {
        std::array<double, 3> x{static_cast<double>(fv.contact_frequency),
                                static_cast<double>(fv.degree), fv.duration};
        if (model.predict(x) == 1) hq.push_back(fv.node);
    }
    return hq;
}

PredictOutputs cmd_predict(const std::string& model_path, const std::string& connectivity_path,
                           const std::string& out_dir) {
    RandomForest model = RandomForest::load(model_path);
    auto events = parse_connectivity(read_file(connectivity_path));
    auto features = compute_features(events);

    PredictOutputs out;
    out.hq_nodes = predict_hq(model, features);

    fs::create_directories(out_dir);
    std::ostringstream fragment;
    fragment << "Group.highQualityNodes = ";
    for (std::size_t i = 0; i < out.hq_nodes.size(); ++i)
        fragment << (i ? "," : "") << out.hq_nodes[i];
    fragment << "\n";
    out.fragment_path = (fs::path(out_dir) / "predicted_hq.txt").string();
    write_file(out.fragment_path, fragment.str());

    std::ostringstream csv;
    csv << "node,contact_frequency,degree,duration,predicted\n";
    for (const auto& fv : features) {
        std::array<double, 3> x{static_cast<double>(fv.contact_frequency),
                                static_cast<double>(fv.degree), fv.duration};
        csv << fv.node << ',' << fv.contact_frequency << ',' << fv.degree << ','
            << shortest_repr(fv.duration) << ',' << model.predict(x) << '\n';
    }
    out.csv_path = (fs::path(out_dir) / "predictions.csv").string();
    write_file(out.csv_path, csv.str());
    return out;
}

RunReports run_arm(SimConfig config, const std::set<std::string>& hq_set) {
    config.router.hq_set = hq_set;
    return run_to_reports(config);
}

namespace {

ArmMetrics row_from_stats(const std::string& scenario, const std::string& seed_label,
                          const std::string& arm, const MessageStats& s) {
    return {scenario, seed_label, arm, s.delivery_prob, s.overhead_ratio, s.latency_avg,
            s.buffertime_avg};
}

double fold(const std::vector<double>& values, int mode) {
    double acc = mode == 0 ? 0.0 : values[0];
    for (double v : values) {
        if (std::isnan(v)) return std::nan("");
        if (mode == 0) acc += v;
        else if (mode == 1) acc = std::min(acc, v);
        else acc = std::max(acc, v);
    }
    return mode == 0 ? acc / static_cast<double>(values.size()) : acc;
}

} // namespace

std::string comparison_csv(const std::vector<ArmMetrics>& rows) {
    std::ostringstream out;
    out << "scenario,seed,arm,delivery_prob,overhead_ratio,latency_avg,buffertime_avg\n";
    for (const auto& r : rows)
        out << r.scenario << ',' << r.seed_label << ',' << r.arm << ','
            << format_fixed(r.delivery_prob, 4) << ',' << format_fixed(r.overhead_ratio, 4)
            << ',' << format_fixed(r.latency_avg, 4) << ','
            << format_fixed(r.buffertime_avg, 4) << '\n';
    return out.str();
}

std::vector<ArmMetrics> parse_comparison_csv(const std::string& text) {
    std::vector<ArmMetrics> rows;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        if (lineno == 1) {
            if (t != "scenario,seed,arm,delivery_prob,overhead_ratio,latency_avg,buffertime_avg")
                throw ParseError("comparison csv", lineno, "unexpected header");
            continue;
        }
        auto f = split(t, ',');
        if (f.size() != 7)
            throw ParseError("comparison csv", lineno,
                             "expected 7 columns, got " + std::to_string(f.size()));
        ArmMetrics r;
        r.scenario = f[0];
        r.seed_label = f[1];
        r.arm = f[2];
        r.delivery_prob = parse_double(f[3], "delivery_prob");
        r.overhead_ratio = parse_double(f[4], "overhead_ratio");
        r.latency_avg = parse_double(f[5], "latency_avg");
        r.buffertime_avg = parse_double(f[6], "buffertime_avg");
        rows.push_back(std::move(r));
    }
    return rows;
}

namespace {

std::string comparison_table(const std::vector<ArmMetrics>& mean_rows,
                             const std::vector<std::string>& scenarios) {
    std::ostringstream out;
    char buf[256];
    const char* metric_labels[] = {"Delivery prob", "Overhead ratio", "Latency avg",
                                   "Buffertime avg"};
    for (const auto& scenario : scenarios) {
        std::snprintf(buf, sizeof buf, "%-16s %14s %22s %14s\n", scenario.c_str(),
                      "Original(1)", "High-quality nodes(2)", "Random node(3)");
        out << buf;
        for (int metric = 0; metric < 4; ++metric) {
            double v[3] = {std::nan(""), std::nan(""), std::nan("")};
            for (const auto& r : mean_rows) {
                if (r.scenario != scenario) continue;
                for (int a = 0; a < 3; ++a)
                    if (r.arm == kArms[a]) v[a] = metric_of(r, metric);
            }
            std::snprintf(buf, sizeof buf, "%-16s %14s %22s %14s\n", metric_labels[metric],
                          format_fixed(v[0], 4).c_str(), format_fixed(v[1], 4).c_str(),
                          format_fixed(v[2], 4).c_str());
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

std::vector<std::string> write_metric_charts(const std::string& out_dir,
                                             const std::vector<ArmMetrics>& mean_rows,
                                             const std::vector<std::string>& scenarios,
                                             const std::vector<std::string>& arms) {
    std::vector<std::string> paths;
    for (int metric = 0; metric < 4; ++metric) {
        std::vector<ChartSeries> series;
        for (const auto& arm : arms) {
            ChartSeries s;
            s.name = arm;
            for (const auto& scenario : scenarios) {
                double v = std::nan("");
                for (const auto& r : mean_rows)
                    if (r.scenario == scenario && r.arm == arm) v = metric_of(r, metric);
                s.values.push_back(v);
            }
            series.push_back(std::move(s));
        }
        std::string path =
            (fs::path(out_dir) / ("chart_" + std::string(kMetricNames[metric]) + ".svg"))
                .string();
        write_grouped_bar_svg(path, kMetricTitles[metric], scenarios, series);
        paths.push_back(std::move(path));
    }
    return paths;
}

} // namespace

CompareOutputs cmd_compare(const CompareOptions& options) {
    if (options.config_paths.empty()) throw ValidationError("compare: no scenario configs given");
    if (options.seeds.empty()) throw ValidationError("compare: no seeds given");
    RandomForest model = RandomForest::load(options.model_path);
    fs::create_directories(options.out_dir);

    CompareOutputs out;
    std::vector<std::string> scenarios;
    std::vector<ArmMetrics> mean_rows;

    for (const auto& config_path : options.config_paths) {
        SimConfig base = load_settings_file(config_path);
        scale_config(base, options.scale);
        scenarios.push_back(base.name);

        std::vector<double> per_arm[3][4];  // [arm][metric] over seeds
        for (std::uint64_t seed : options.seeds) {
            SimConfig cfg = base;
            cfg.rng_seed = seed;
            cfg.router.hq_set.clear();

            RunReports original = run_arm(cfg, {});

            auto features = compute_features(parse_connectivity(original.connectivity));
            auto hq_nodes = predict_hq(model, features);
            std::set<std::string> hq_set(hq_nodes.begin(), hq_nodes.end());
            RunReports enhanced = run_arm(cfg, hq_set);

            std::vector<std::string> pool = host_names(cfg);
            Rng control_rng = Rng::stream(seed, kControlStream);
            control_rng.shuffle(pool);
            pool.resize(std::min(pool.size(), hq_set.size()));
            RunReports control = run_arm(cfg, std::set<std::string>(pool.begin(), pool.end()));

            if (enhanced.connectivity != original.connectivity ||
                control.connectivity != original.connectivity)
                throw std::logic_error(
                    "arm isolation violated: connectivity reports differ between arms");

            const MessageStats* stats[3] = {&original.summary.stats, &enhanced.summary.stats,
                                            &control.summary.stats};
            std::string seed_label = std::to_string(seed);
            for (int a = 0; a < 3; ++a) {
                out.rows.push_back(row_from_stats(base.name, seed_label, kArms[a], *stats[a]));
                const ArmMetrics& r = out.rows.back();
                for (int metric = 0; metric < 4; ++metric)
                    per_arm[a][metric].push_back(metric_of(r, metric));
            }
        }

        const char* agg_labels[] = {"mean", "min", "max"};
        for (int mode = 0; mode < 3; ++mode) {
            for (int a = 0; a < 3; ++a) {
                ArmMetrics r;
                r.scenario = base.name;
                r.seed_label = agg_labels[mode];
                r.arm = kArms[a];
                r.delivery_prob = fold(per_arm[a][0], mode);
                r.overhead_ratio = fold(per_arm[a][1], mode);
                r.latency_avg = fold(per_arm[a][2], mode);
                r.buffertime_avg = fold(per_arm[a][3], mode);
                out.rows.push_back(r);
                if (mode == 0) mean_rows.push_back(r);
            }
        }
    }

    out.csv_path = (fs::path(options.out_dir) / "comparison.csv").string();
    write_file(out.csv_path, comparison_csv(out.rows));
    out.table_path = (fs::path(options.out_dir) / "comparison_table.txt").string();
    write_file(out.table_path, comparison_table(mean_rows, scenarios));
    out.chart_paths = write_metric_charts(options.out_dir, mean_rows, scenarios,
                                          {kArms[0], kArms[1], kArms[2]});
    return out;
}

std::vector<std::string> cmd_plot(const std::string& csv_path, const std::string& out_dir) {
    auto rows = parse_comparison_csv(read_file(csv_path));
    if (rows.empty()) throw ValidationError("comparison csv has no rows");

    std::vector<ArmMetrics> mean_rows;
    for (const auto& r : rows)
        if (r.seed_label == "mean") mean_rows.push_back(r);
    if (mean_rows.empty()) {
        // Per-seed CSV without aggregates: average here.
        std::vector<std::pair<std::string, std::string>> keys;
        for (const auto& r : rows) {
            std::pair<std::string, std::string> key{r.scenario, r.arm};
            if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
        }
        for (const auto& [scenario, arm] : keys) {
            std::vector<double> acc[4];
            for (const auto& r : rows)
                if (r.scenario == scenario && r.arm == arm)
                    for (int metric = 0; metric < 4; ++metric)
                        acc[metric].push_back(metric_of(r, metric));
            ArmMetrics m;
            m.scenario = scenario;
            m.seed_label = "mean";
            m.arm = arm;
            m.delivery_prob = fold(acc[0], 0);
            m.overhead_ratio = fold(acc[1], 0);
            m.latency_avg = fold(acc[2], 0);
            m.buffertime_avg = fold(acc[3], 0);
            mean_rows.push_back(std::move(m));
        }
    }

    std::vector<std::string> scenarios, arms;
    for (const auto& r : mean_rows) {
        if (std::find(scenarios.begin(), scenarios.end(), r.scenario) == scenarios.end())
            scenarios.push_back(r.scenario);
        if (std::find(arms.begin(), arms.end(), r.arm) == arms.end()) arms.push_back(r.arm);
    }
    fs::create_directories(out_dir);
    return write_metric_charts(out_dir, mean_rows, scenarios, arms);
}

} // namespace spraylab
