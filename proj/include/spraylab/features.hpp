#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "spraylab/reports.hpp"

namespace spraylab {

/// Per-node contact descriptor: how often a node met anyone, how many
/// distinct peers it met, and how long a contact lasted on average.
struct FeatureVector {
    std::string node;
    long long contact_frequency = 0;  // number of contacts
    long long degree = 0;             // distinct peers
    double duration = 0.0;            // mean contact length, seconds

    bool operator==(const FeatureVector&) const = default;
};

struct LabeledNode {
    std::string node;
    int label = 0;  // 1 = high quality
};

/// Node-quality labeling rule: a node qualifies when it sourced strictly
/// more than min_deliveries deliveries with hopcount <= max_hopcount; a
/// seeded sample_fraction of the qualifiers is labeled 1.
struct LabelRule {
    int max_hopcount = 2;
    int min_deliveries = 8;
    double sample_fraction = 0.5;
    std::uint64_t rng_seed = 1;
};

/// Inverse of write_connectivity. Rejects malformed lines (with line
/// number), out-of-order times, down-before-up and unmatched ups.
std::vector<ContactEvent> parse_connectivity(const std::string& text);

/// Inverse of write_delivered. Header lines are skipped; field-count and
/// hopcount/path mismatches are rejected with the line number.
std::vector<DeliveryRecord> parse_delivered(const std::string& text);

/// One FeatureVector per node with at least one contact, sorted by node
/// name. Events must be pair-balanced (parse_connectivity guarantees it).
std::vector<FeatureVector> compute_features(const std::vector<ContactEvent>& events);

/// Applies the LabelRule. Every node appearing anywhere in the records
/// gets a row; only the sampled qualifiers get label 1. Deterministic for
/// a fixed rng_seed. Result sorted by node name.
std::vector<LabeledNode> label_high_quality(const std::vector<DeliveryRecord>& records,
                                            const LabelRule& rule);

struct DatasetRow {
    int day = 0;
    std::string node;
    std::array<double, 3> features{};  // contact_frequency, degree, duration
    int label = 0;
};

struct Dataset {
    std::vector<DatasetRow> rows;
    static const std::array<std::string, 3>& feature_names();
};

/// Joins per-day features with per-day labels by node name. Feature rows
/// without a label row get label 0; a label naming a node absent from that
/// day's features is an error. Rows ordered by (day, node).
Dataset build_dataset(const std::vector<std::vector<FeatureVector>>& features_per_day,
                      const std::vector<std::vector<LabeledNode>>& labels_per_day);

std::string features_to_csv(const std::vector<FeatureVector>& features);
std::vector<FeatureVector> parse_features_csv(const std::string& text, const std::string& name);
std::string labels_to_csv(const std::vector<LabeledNode>& labels);
std::vector<LabeledNode> parse_labels_csv(const std::string& text, const std::string& name);
std::string dataset_to_csv(const Dataset& dataset);

} // namespace spraylab
