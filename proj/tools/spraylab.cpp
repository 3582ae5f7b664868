#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spraylab/error.hpp"
#include "spraylab/pipeline.hpp"
#include "spraylab/text.hpp"

namespace {

// "--seeds 1,2,7" or "--seeds 1..10"
std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    auto range = text.find("..");
    if (range != std::string::npos) {
        auto lo = spraylab::parse_int(text.substr(0, range), "--seeds");
        auto hi = spraylab::parse_int(text.substr(range + 2), "--seeds");
        if (lo > hi) throw spraylab::ValidationError("--seeds: empty range " + text);
        for (auto s = lo; s <= hi; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
        return seeds;
    }
    for (const auto& part : spraylab::split(text, ','))
        seeds.push_back(static_cast<std::uint64_t>(spraylab::parse_int(part, "--seeds")));
    if (seeds.empty()) throw spraylab::ValidationError("--seeds: no seeds given");
    return seeds;
}

void print_summary(const spraylab::RunSummary& summary) {
    const auto& s = summary.stats;
    std::cout << "created " << s.created << ", delivered " << s.delivered << ", delivery_prob "
              << spraylab::format_fixed(s.delivery_prob, 4) << ", overhead_ratio "
              << spraylab::format_fixed(s.overhead_ratio, 4) << ", latency_avg "
              << spraylab::format_fixed(s.latency_avg, 4) << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spraylab: spray-and-wait DTN simulator with random-forest node selection"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "run one scenario and write its reports");
    std::string sim_config, sim_out = ".";
    std::int64_t sim_seed = -1;
    double sim_scale = 1.0;
    sim->add_option("--config", sim_config, "scenario settings file")->required();
    sim->add_option("--seed", sim_seed, "override Scenario.rngSeed");
    sim->add_option("--out", sim_out, "output directory");
    sim->add_option("--scale", sim_scale, "desk-scale factor for node counts and end time");

    // train
    auto* train = app.add_subcommand("train", "build the dataset and fit the random forest");
    spraylab::TrainOptions train_opts;
    train->add_option("--reports", train_opts.reports_dir, "directory with dayN report pairs")
        ->required();
    train->add_option("--days", train_opts.days, "number of day pairs expected");
    train->add_option("--max-hopcount", train_opts.label_rule.max_hopcount,
                      "max path length for a qualifying delivery");
    train->add_option("--min-deliveries", train_opts.label_rule.min_deliveries,
                      "qualifying deliveries must exceed this count");
    train->add_option("--sample-fraction", train_opts.label_rule.sample_fraction,
                      "fraction of qualifiers labeled high quality");
    train->add_option("--label-seed", train_opts.label_rule.rng_seed, "labeling sample seed");
    train->add_option("--n-trees", train_opts.forest.n_trees, "trees in the forest");
    train->add_option("--max-depth", train_opts.forest.max_depth, "tree depth cap, 0 = unlimited");
    train->add_option("--max-features", train_opts.forest.max_features,
                      "features considered per split");
    train->add_option("--min-samples-split", train_opts.forest.min_samples_split,
                      "minimum rows to split a node");
    train->add_option("--forest-seed", train_opts.forest.rng_seed, "forest rng seed");
    train->add_option("--train-fraction", train_opts.train_fraction, "train split fraction");
    train->add_option("--split-seed", train_opts.split_seed, "train/test shuffle seed");
    train->add_option("--out", train_opts.out_dir, "output directory")->required();

    // predict
    auto* predict = app.add_subcommand("predict", "predict high-quality nodes for a run");
    std::string pred_model, pred_conn, pred_out = ".";
    predict->add_option("--model", pred_model, "model file")->required();
    predict->add_option("--connectivity", pred_conn, "connectivity report of the target run")
        ->required();
    predict->add_option("--out", pred_out, "output directory");

    // compare
    auto* compare = app.add_subcommand("compare", "three-arm evaluation runs and tables");
    spraylab::CompareOptions cmp_opts;
    std::string cmp_seeds = "1..10";
    compare->add_option("--config", cmp_opts.config_paths, "evaluation scenario file(s)")
        ->required();
    compare->add_option("--model", cmp_opts.model_path, "model file")->required();
    compare->add_option("--seeds", cmp_seeds, "seed list: 1,2,3 or 1..10");
    compare->add_option("--out", cmp_opts.out_dir, "output directory")->required();
    compare->add_option("--scale", cmp_opts.scale, "desk-scale factor");

    // plot
    auto* plot = app.add_subcommand("plot", "charts from an existing comparison.csv");
    std::string plot_csv, plot_out = ".";
    plot->add_option("--csv", plot_csv, "comparison CSV")->required();
    plot->add_option("--out", plot_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (*sim) {
            std::optional<std::uint64_t> seed;
            if (sim_seed >= 0) seed = static_cast<std::uint64_t>(sim_seed);
            auto summary = spraylab::cmd_simulate(sim_config, seed, sim_out, sim_scale);
            print_summary(summary);
        } else if (*train) {
            auto out = spraylab::cmd_train(train_opts);
            std::cout << spraylab::classification_report(out.metrics);
            std::cout << "dataset rows: " << out.dataset.rows.size() << "\n";
            std::cout << "model: " << out.model_path << "\n";
            bool any_positive = false;
            for (const auto& row : out.dataset.rows) any_positive |= row.label == 1;
            if (!any_positive)
                std::cerr << "warning: empty candidate set, all labels 0\n";
        } else if (*predict) {
            auto out = spraylab::cmd_predict(pred_model, pred_conn, pred_out);
            std::cout << out.hq_nodes.size() << " high-quality nodes -> " << out.fragment_path
                      << "\n";
        } else if (*compare) {
            cmp_opts.seeds = parse_seed_list(cmp_seeds);
            auto out = spraylab::cmd_compare(cmp_opts);
            std::ifstream table(out.table_path);
            std::cout << table.rdbuf();
            std::cout << "csv: " << out.csv_path << "\n";
        } else if (*plot) {
            auto paths = spraylab::cmd_plot(plot_csv, plot_out);
            for (const auto& p : paths) std::cout << p << "\n";
        }
    } catch (const spraylab::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const spraylab::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
