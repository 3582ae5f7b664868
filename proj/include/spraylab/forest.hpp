#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spraylab/features.hpp"

namespace spraylab {

/// Gini impurity 1 - sum((c_i/n)^2) of a binary count pair.
double gini(long long count0, long long count1);

struct ForestConfig {
    int n_trees = 200;
    int max_depth = 0;         // 0 = unlimited, grow until pure
    int max_features = 2;      // ceil(sqrt(3)) of the 3 features
    int min_samples_split = 2;
    std::uint64_t rng_seed = 1;
};

struct SplitChoice {
    int feature = 0;
    double threshold = 0.0;

    bool operator==(const SplitChoice&) const = default;
};

/// Minimum-weighted-Gini split over the candidate thresholds (midpoints of
/// consecutive distinct sorted values of each subset feature). Ties go to
/// the lower feature index, then the lower threshold. Returns nothing when
/// no split strictly reduces impurity. Comparisons are exact (integer
/// arithmetic), so results never depend on floating-point summation order.
std::optional<SplitChoice> best_split(const Dataset& data, const std::vector<int>& rows,
                                      const std::vector<int>& features, int min_samples_split);

/// Either an internal split (rows with feature <= threshold go left) or a
/// leaf carrying the training class counts.
struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1, right = -1;
    long long count0 = 0, count1 = 0;

    bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    int predict(const std::array<double, 3>& x) const;
};

struct ClassMetrics {
    double precision = 0.0, recall = 0.0, f1 = 0.0;
    long long support = 0;
};

struct ClassificationMetrics {
    double accuracy = 0.0;
    ClassMetrics cls[2];
    long long total = 0;
};

/// Bagged Gini decision trees with a fresh random feature subset at every
/// node. Each tree draws from its own (seed, tree index) stream, so trees
/// could be fitted concurrently without changing the result.
class RandomForest {
public:
    static RandomForest fit(const Dataset& train, const ForestConfig& cfg);

    int predict(const std::array<double, 3>& x) const;
    std::pair<int, int> vote_counts(const std::array<double, 3>& x) const;

    const std::vector<DecisionTree>& trees() const { return trees_; }
    const std::array<std::string, 3>& feature_names() const { return feature_names_; }

    /// Versioned plain-text model format; thresholds round-trip exactly.
    std::string to_text() const;
    static RandomForest from_text(const std::string& text);
    void save(const std::string& path) const;
    static RandomForest load(const std::string& path);

private:
    std::vector<DecisionTree> trees_;
    std::array<std::string, 3> feature_names_ = Dataset::feature_names();
};

/// Seeded shuffle, first ceil(train_fraction * n) rows become the train set.
std::pair<Dataset, Dataset> train_test_split(const Dataset& data, double train_fraction,
                                             std::uint64_t rng_seed);

ClassificationMetrics evaluate(const RandomForest& forest, const Dataset& test);

/// Text table with per-class precision/recall/f1-score/support and overall
/// accuracy.
std::string classification_report(const ClassificationMetrics& metrics);

} // namespace spraylab
