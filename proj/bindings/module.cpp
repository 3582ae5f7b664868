#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spraylab/engine.hpp"
#include "spraylab/error.hpp"
#include "spraylab/features.hpp"
#include "spraylab/forest.hpp"
#include "spraylab/pipeline.hpp"
#include "spraylab/settings.hpp"

namespace py = pybind11;
using namespace spraylab;

namespace {

py::dict stats_dict(const MessageStats& s) {
    py::dict d;
    d["created"] = s.created;
    d["started"] = s.started;
    d["relayed"] = s.relayed;
    d["aborted"] = s.aborted;
    d["dropped"] = s.dropped;
    d["delivered"] = s.delivered;
    d["delivery_prob"] = s.delivery_prob;
    d["overhead_ratio"] = s.overhead_ratio;
    d["latency_avg"] = s.latency_avg;
    d["latency_med"] = s.latency_med;
    d["hopcount_avg"] = s.hopcount_avg;
    d["buffertime_avg"] = s.buffertime_avg;
    return d;
}

py::dict metrics_dict(const ClassificationMetrics& m) {
    py::dict d;
    d["accuracy"] = m.accuracy;
    d["total"] = m.total;
    for (int c = 0; c < 2; ++c) {
        py::dict cls;
        cls["precision"] = m.cls[c].precision;
        cls["recall"] = m.cls[c].recall;
        cls["f1"] = m.cls[c].f1;
        cls["support"] = m.cls[c].support;
        d[py::cast(c)] = cls;
    }
    return d;
}

Dataset dataset_from_xy(const std::vector<std::array<double, 3>>& X,
                        const std::vector<int>& y) {
    if (X.size() != y.size())
        throw ValidationError("X and y must have the same length");
    Dataset data;
    for (std::size_t i = 0; i < X.size(); ++i) {
        DatasetRow row;
        row.day = 1;
        row.node = "r" + std::to_string(i);
        row.features = X[i];
        row.label = y[i];
        data.rows.push_back(std::move(row));
    }
    return data;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "spraylab core: spray-and-wait DTN simulator, report parsers, random forest";

    py::register_exception<ParseError>(m, "SettingsParseError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "SettingsValidationError", PyExc_ValueError);

    py::class_<SimConfig>(m, "SimConfig")
        .def_readwrite("name", &SimConfig::name)
        .def_readwrite("end_time", &SimConfig::end_time)
        .def_readwrite("update_interval", &SimConfig::update_interval)
        .def_readwrite("rng_seed", &SimConfig::rng_seed)
        .def_property_readonly("groups",
                               [](const SimConfig& c) {
                                   py::list out;
                                   for (const auto& g : c.groups)
                                       out.append(py::make_tuple(g.group_id, g.count));
                                   return out;
                               })
        .def_property_readonly("total_hosts", &SimConfig::total_hosts)
        .def("set_high_quality_nodes",
             [](SimConfig& c, const std::vector<std::string>& names) {
                 c.router.hq_set = std::set<std::string>(names.begin(), names.end());
             })
        .def("set_hq_multiplier",
             [](SimConfig& c, int multiplier) { c.router.hq_multiplier = multiplier; })
        .def("scale", [](SimConfig& c, double factor) { scale_config(c, factor); });

    m.def("load_settings", &load_settings, py::arg("text"));
    m.def("load_settings_file", &load_settings_file, py::arg("path"));
    m.def("scenario_settings_text", &scenario_settings_text, py::arg("name"),
          py::arg("pedestrians"), py::arg("cars"), py::arg("seed"));
    m.def("host_names", &host_names);

    py::class_<RunReports>(m, "RunReports")
        .def_readonly("connectivity", &RunReports::connectivity)
        .def_readonly("delivered", &RunReports::delivered)
        .def_readonly("stats_text", &RunReports::stats_text)
        .def_property_readonly(
            "stats", [](const RunReports& r) { return stats_dict(r.summary.stats); });

    m.def("run", &run_to_reports, py::arg("config"),
          "Run one scenario; returns the three report texts and the stats.");
    m.def(
        "run_to_files",
        [](const SimConfig& cfg, const std::string& out_dir) {
            return stats_dict(run_to_files(cfg, out_dir).stats);
        },
        py::arg("config"), py::arg("out_dir"));

    py::class_<ContactEvent>(m, "ContactEvent")
        .def_readonly("time", &ContactEvent::time)
        .def_readonly("host1", &ContactEvent::host1)
        .def_readonly("host2", &ContactEvent::host2)
        .def_readonly("up", &ContactEvent::up);

    py::class_<DeliveryRecord>(m, "DeliveryRecord")
        .def_readonly("time", &DeliveryRecord::time)
        .def_readonly("id", &DeliveryRecord::id)
        .def_readonly("size", &DeliveryRecord::size)
        .def_readonly("hopcount", &DeliveryRecord::hopcount)
        .def_readonly("latency", &DeliveryRecord::latency)
        .def_readonly("from_host", &DeliveryRecord::from_host)
        .def_readonly("to_host", &DeliveryRecord::to_host)
        .def_readonly("remaining_ttl", &DeliveryRecord::remaining_ttl)
        .def_readonly("path", &DeliveryRecord::path);

    py::class_<FeatureVector>(m, "FeatureVector")
        .def_readonly("node", &FeatureVector::node)
        .def_readonly("contact_frequency", &FeatureVector::contact_frequency)
        .def_readonly("degree", &FeatureVector::degree)
        .def_readonly("duration", &FeatureVector::duration);

    m.def("parse_connectivity", &parse_connectivity, py::arg("text"));
    m.def("parse_delivered", &parse_delivered, py::arg("text"));
    m.def("compute_features",
          py::overload_cast<const std::vector<ContactEvent>&>(&compute_features),
          py::arg("events"));
    m.def(
        "compute_features_text",
        [](const std::string& text) { return compute_features(parse_connectivity(text)); },
        py::arg("text"));
    m.def(
        "label_high_quality",
        [](const std::vector<DeliveryRecord>& records, int max_hopcount, int min_deliveries,
           double sample_fraction, std::uint64_t seed) {
            LabelRule rule{max_hopcount, min_deliveries, sample_fraction, seed};
            py::dict out;
            for (const auto& ln : label_high_quality(records, rule))
                out[py::cast(ln.node)] = ln.label;
            return out;
        },
        py::arg("records"), py::arg("max_hopcount") = 2, py::arg("min_deliveries") = 8,
        py::arg("sample_fraction") = 0.5, py::arg("seed") = 1);

    py::class_<RandomForest>(m, "RandomForest")
        .def_static(
            "fit",
            [](const std::vector<std::array<double, 3>>& X, const std::vector<int>& y,
               int n_trees, int max_depth, int max_features, int min_samples_split,
               std::uint64_t seed) {
                ForestConfig cfg{n_trees, max_depth, max_features, min_samples_split, seed};
                return RandomForest::fit(dataset_from_xy(X, y), cfg);
            },
            py::arg("X"), py::arg("y"), py::arg("n_trees") = 200, py::arg("max_depth") = 0,
            py::arg("max_features") = 2, py::arg("min_samples_split") = 2, py::arg("seed") = 1)
        .def("predict", [](const RandomForest& f,
                           const std::array<double, 3>& x) { return f.predict(x); })
        .def("predict_many",
             [](const RandomForest& f, const std::vector<std::array<double, 3>>& X) {
                 std::vector<int> out;
                 out.reserve(X.size());
                 for (const auto& x : X) out.push_back(f.predict(x));
                 return out;
             })
        .def("evaluate",
             [](const RandomForest& f, const std::vector<std::array<double, 3>>& X,
                const std::vector<int>& y) { return metrics_dict(evaluate(f, dataset_from_xy(X, y))); })
        .def("to_text", &RandomForest::to_text)
        .def_static("from_text", &RandomForest::from_text, py::arg("text"))
        .def("save", &RandomForest::save, py::arg("path"))
        .def_static("load", &RandomForest::load, py::arg("path"))
        .def_property_readonly(
            "n_trees", [](const RandomForest& f) { return f.trees().size(); });

    m.def(
        "simulate",
        [](const std::string& config_path, std::optional<std::uint64_t> seed,
           const std::string& out_dir, double scale) {
            return stats_dict(cmd_simulate(config_path, seed, out_dir, scale).stats);
        },
        py::arg("config_path"), py::arg("seed") = std::nullopt, py::arg("out_dir") = ".",
        py::arg("scale") = 1.0);
    m.def(
        "train",
        [](const std::string& reports_dir, const std::string& out_dir, int days,
           int max_hopcount, int min_deliveries, double sample_fraction,
           std::uint64_t label_seed, int n_trees, std::uint64_t forest_seed) {
            TrainOptions opts;
            opts.reports_dir = reports_dir;
            opts.out_dir = out_dir;
            opts.days = days;
            opts.label_rule = {max_hopcount, min_deliveries, sample_fraction, label_seed};
            opts.forest.n_trees = n_trees;
            opts.forest.rng_seed = forest_seed;
            auto out = cmd_train(opts);
            py::dict d;
            d["metrics"] = metrics_dict(out.metrics);
            d["model_path"] = out.model_path;
            d["report_path"] = out.report_path;
            d["dataset_rows"] = out.dataset.rows.size();
            return d;
        },
        py::arg("reports_dir"), py::arg("out_dir"), py::arg("days") = 10,
        py::arg("max_hopcount") = 2, py::arg("min_deliveries") = 8,
        py::arg("sample_fraction") = 0.5, py::arg("label_seed") = 1, py::arg("n_trees") = 200,
        py::arg("forest_seed") = 1);
    m.def(
        "predict",
        [](const std::string& model_path, const std::string& connectivity_path,
           const std::string& out_dir) {
            return cmd_predict(model_path, connectivity_path, out_dir).hq_nodes;
        },
        py::arg("model_path"), py::arg("connectivity_path"), py::arg("out_dir") = ".");
    m.def(
        "compare",
        [](const std::vector<std::string>& config_paths, const std::string& model_path,
           const std::vector<std::uint64_t>& seeds, const std::string& out_dir, double scale) {
            CompareOptions opts{config_paths, model_path, seeds, out_dir, scale};
            auto out = cmd_compare(opts);
            py::dict d;
            d["csv_path"] = out.csv_path;
            d["table_path"] = out.table_path;
            d["chart_paths"] = out.chart_paths;
            return d;
        },
        py::arg("config_paths"), py::arg("model_path"), py::arg("seeds"), py::arg("out_dir"),
        py::arg("scale") = 1.0);
    m.def("plot", &cmd_plot, py::arg("csv_path"), py::arg("out_dir") = ".");
}
