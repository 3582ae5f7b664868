#include "spraylab/forest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "spraylab/error.hpp"
#include "spraylab/rng.hpp"
#include "spraylab/text.hpp"

namespace spraylab {

double gini(long long count0, long long count1) {
    long long n = count0 + count1;
    if (n <= 0) throw ValidationError("gini: empty count pair");
    double p0 = static_cast<double>(count0) / n;
    double p1 = static_cast<double>(count1) / n;
    return 1.0 - (p0 * p0 + p1 * p1);
}

namespace {

// Split quality is compared as an exact rational. Minimizing the weighted
// child Gini is the same as maximizing
//   (l0^2 + l1^2)/nl + (r0^2 + r1^2)/nr,
// which cross-multiplies into 128-bit integers without overflow for any
// realistic row count.
struct SplitScore {
    long long left_sq = 0, nl = 0, right_sq = 0, nr = 0;
};

bool better(const SplitScore& a, const SplitScore& b) {
    using I = __int128;
    I lhs = (I(a.left_sq) * a.nr + I(a.right_sq) * a.nl) * (I(b.nl) * b.nr);
    I rhs = (I(b.left_sq) * b.nr + I(b.right_sq) * b.nl) * (I(a.nl) * a.nr);
    return lhs > rhs;
}

bool improves_parent(const SplitScore& s, long long p0, long long p1) {
    using I = __int128;
    long long n = p0 + p1;
    I lhs = (I(s.left_sq) * s.nr + I(s.right_sq) * s.nl) * n;
    I rhs = (I(p0) * p0 + I(p1) * p1) * (I(s.nl) * s.nr);
    return lhs > rhs;
}

} // namespace

std::optional<SplitChoice> best_split(const Dataset& data, const std::vector<int>& rows,
                                      const std::vector<int>& features, int min_samples_split) {
    if (static_cast<int>(rows.size()) < std::max(min_samples_split, 2)) return std::nullopt;
    long long p0 = 0, p1 = 0;
    for (int r : rows) (data.rows[r].label == 0 ? p0 : p1) += 1;
    if (p0 == 0 || p1 == 0) return std::nullopt;  // already pure

    std::vector<int> feats = features;
    std::sort(feats.begin(), feats.end());
    feats.erase(std::unique(feats.begin(), feats.end()), feats.end());

    std::optional<SplitChoice> best;
    SplitScore best_score;
    std::vector<std::pair<double, int>> values;  // (feature value, label)
    for (int f : feats) {
        if (f < 0 || f >= 3) throw ValidationError("best_split: feature index out of range");
        values.clear();
        for (int r : rows) values.emplace_back(data.rows[r].features[f], data.rows[r].label);
        std::sort(values.begin(), values.end());
        long long l0 = 0, l1 = 0;
        for (std::size_t i = 0; i + 1 < values.size(); ++i) {
            (values[i].second == 0 ? l0 : l1) += 1;
            if (values[i].first == values[i + 1].first) continue;
            SplitScore score;
            score.nl = l0 + l1;
            score.nr = (p0 - l0) + (p1 - l1);
            score.left_sq = l0 * l0 + l1 * l1;
            score.right_sq = (p0 - l0) * (p0 - l0) + (p1 - l1) * (p1 - l1);
            if (!best || better(score, best_score)) {
                best = SplitChoice{f, 0.5 * (values[i].first + values[i + 1].first)};
                best_score = score;
            }
        }
    }
    if (best && !improves_parent(best_score, p0, p1)) return std::nullopt;
    return best;
}

int DecisionTree::predict(const std::array<double, 3>& x) const {
    int i = 0;
    while (!nodes[i].is_leaf())
        i = x[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
    return nodes[i].count1 >= nodes[i].count0 ? 1 : 0;
}

namespace {

int grow(DecisionTree& tree, const Dataset& data, std::vector<int>& rows, int depth,
         const ForestConfig& cfg, Rng& rng) {
    long long c0 = 0, c1 = 0;
    for (int r : rows) (data.rows[r].label == 0 ? c0 : c1) += 1;

    auto make_leaf = [&]() {
        TreeNode leaf;
        leaf.count0 = c0;
        leaf.count1 = c1;
        tree.nodes.push_back(leaf);
        return static_cast<int>(tree.nodes.size()) - 1;
    };

    bool at_depth_limit = cfg.max_depth > 0 && depth >= cfg.max_depth;
    if (c0 == 0 || c1 == 0 || static_cast<int>(rows.size()) < cfg.min_samples_split ||
        at_depth_limit)
        return make_leaf();

    // Fresh random feature subset for this node.
    std::vector<int> feats{0, 1, 2};
    rng.shuffle(feats);
    feats.resize(cfg.max_features);

    auto split = best_split(data, rows, feats, cfg.min_samples_split);
    if (!split) return make_leaf();

    std::vector<int> left, right;
    for (int r : rows)
        (data.rows[r].features[split->feature] <= split->threshold ? left : right).push_back(r);

    int index = static_cast<int>(tree.nodes.size());
    TreeNode node;
    node.feature = split->feature;
    node.threshold = split->threshold;
    node.count0 = c0;
    node.count1 = c1;
    tree.nodes.push_back(node);
    rows.clear();
    rows.shrink_to_fit();
    tree.nodes[index].left = grow(tree, data, left, depth + 1, cfg, rng);
    tree.nodes[index].right = grow(tree, data, right, depth + 1, cfg, rng);
    return index;
}

} // namespace

RandomForest RandomForest::fit(const Dataset& train, const ForestConfig& cfg) {
    if (train.rows.empty()) throw ValidationError("fit: empty training set");
    if (cfg.n_trees < 1) throw ValidationError("fit: n_trees must be >= 1");
    if (cfg.max_features < 1 || cfg.max_features > 3)
        throw ValidationError("fit: max_features must be in [1, 3]");
    if (cfg.min_samples_split < 2) throw ValidationError("fit: min_samples_split must be >= 2");
    long long c0 = 0, c1 = 0;
    for (const auto& row : train.rows) {
        if (row.label != 0 && row.label != 1)
            throw ValidationError("fit: labels must be 0 or 1");
        for (double v : row.features)
            if (!std::isfinite(v)) throw ValidationError("fit: non-finite feature value");
        (row.label == 0 ? c0 : c1) += 1;
    }
    if (c0 == 0 || c1 == 0) throw ValidationError("degenerate training set: one class only");

    RandomForest forest;
    const int n = static_cast<int>(train.rows.size());
    for (int t = 0; t < cfg.n_trees; ++t) {
        Rng rng = Rng::stream(cfg.rng_seed, static_cast<std::uint32_t>(t));
        std::vector<int> sample(n);
        for (int i = 0; i < n; ++i) sample[i] = static_cast<int>(rng.below(n));
        DecisionTree tree;
        grow(tree, train, sample, 0, cfg, rng);
        forest.trees_.push_back(std::move(tree));
    }
    return forest;
}

std::pair<int, int> RandomForest::vote_counts(const std::array<double, 3>& x) const {
    int v0 = 0, v1 = 0;
    for (const auto& tree : trees_) (tree.predict(x) == 0 ? v0 : v1) += 1;
    return {v0, v1};
}

int RandomForest::predict(const std::array<double, 3>& x) const {
    auto [v0, v1] = vote_counts(x);
    return v1 >= v0 ? 1 : 0;  // ties favor the positive class
}

std::string RandomForest::to_text() const {
    std::ostringstream out;
    out << "spraylab-forest 1\n";
    out << "features";
    for (const auto& name : feature_names_) out << ' ' << name;
    out << '\n';
    out << "trees " << trees_.size() << '\n';
    for (const auto& tree : trees_) {
        out << "tree\n";
        // Pre-order; children always directly follow their parent block.
        std::vector<int> stack{0};
        while (!stack.empty()) {
            int i = stack.back();
            stack.pop_back();
            const TreeNode& node = tree.nodes[i];
            if (node.is_leaf()) {
                out << "leaf " << node.count0 << ' ' << node.count1 << '\n';
            } else {
                out << "split " << node.feature << ' ' << shortest_repr(node.threshold) << '\n';
                stack.push_back(node.right);
                stack.push_back(node.left);
            }
        }
    }
    out << "end\n";
    return out.str();
}

namespace {

int parse_tree_block(const std::vector<std::string>& lines, std::size_t& pos,
                     DecisionTree& tree) {
    if (pos >= lines.size()) throw ParseError("model: truncated tree block");
    const std::string& line = lines[pos];
    ++pos;
    auto f = split(line, ' ');
    int index = static_cast<int>(tree.nodes.size());
    if (f[0] == "leaf" && f.size() == 3) {
        TreeNode leaf;
        leaf.count0 = parse_int(f[1], "model leaf count");
        leaf.count1 = parse_int(f[2], "model leaf count");
        if (leaf.count0 + leaf.count1 < 1) throw ParseError("model: empty leaf");
        tree.nodes.push_back(leaf);
        return index;
    }
    if (f[0] == "split" && f.size() == 3) {
        TreeNode node;
        node.feature = static_cast<int>(parse_int(f[1], "model split feature"));
        if (node.feature < 0 || node.feature >= 3)
            throw ParseError("model: split feature out of range");
        node.threshold = parse_double(f[2], "model split threshold");
        tree.nodes.push_back(node);
        tree.nodes[index].left = parse_tree_block(lines, pos, tree);
        tree.nodes[index].right = parse_tree_block(lines, pos, tree);
        return index;
    }
    throw ParseError("model: unexpected line '" + line + "'");
}

} // namespace

RandomForest RandomForest::from_text(const std::string& text) {
    std::vector<std::string> lines;
    for (auto& line : split(text, '\n')) {
        std::string t = trim(line);
        if (!t.empty()) lines.push_back(t);
    }
    if (lines.size() < 3 || lines[0] != "spraylab-forest 1")
        throw ParseError("model: bad header (expected 'spraylab-forest 1')");
    auto feat = split(lines[1], ' ');
    if (feat.size() != 4 || feat[0] != "features")
        throw ParseError("model: bad features line");
    RandomForest forest;
    for (int i = 0; i < 3; ++i) {
        if (feat[i + 1] != Dataset::feature_names()[i])
            throw ValidationError("model: feature name mismatch: expected '" +
                                  Dataset::feature_names()[i] + "', found '" + feat[i + 1] + "'");
        forest.feature_names_[i] = feat[i + 1];
    }
    auto trees_line = split(lines[2], ' ');
    if (trees_line.size() != 2 || trees_line[0] != "trees")
        throw ParseError("model: bad trees line");
    long long n_trees = parse_int(trees_line[1], "model tree count");

    std::size_t pos = 3;
    for (long long t = 0; t < n_trees; ++t) {
        if (pos >= lines.size() || lines[pos] != "tree")
            throw ParseError("model: expected 'tree' block " + std::to_string(t + 1));
        ++pos;
        DecisionTree tree;
        parse_tree_block(lines, pos, tree);
        forest.trees_.push_back(std::move(tree));
    }
    if (pos >= lines.size() || lines[pos] != "end")
        throw ParseError("model: missing 'end'");
    return forest;
}

void RandomForest::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open model file for writing: " + path);
    out << to_text();
    if (!out) throw std::runtime_error("model write failed: " + path);
}

RandomForest RandomForest::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open model file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& data, double train_fraction,
                                             std::uint64_t rng_seed) {
    if (train_fraction <= 0.0 || train_fraction >= 1.0)
        throw ValidationError("train_test_split: fraction must be in (0, 1)");
    std::vector<int> order(data.rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    Rng rng(rng_seed);
    rng.shuffle(order);
    auto n_train = static_cast<std::size_t>(
        std::ceil(train_fraction * static_cast<double>(order.size()) - 1e-9));
    Dataset train, test;
    for (std::size_t i = 0; i < order.size(); ++i)
        (i < n_train ? train : test).rows.push_back(data.rows[order[i]]);
    return {std::move(train), std::move(test)};
}

ClassificationMetrics evaluate(const RandomForest& forest, const Dataset& test) {
    if (test.rows.empty()) throw ValidationError("evaluate: empty test set");
    long long confusion[2][2] = {{0, 0}, {0, 0}};  // [truth][prediction]
    for (const auto& row : test.rows)
        confusion[row.label][forest.predict(row.features)] += 1;

    ClassificationMetrics m;
    m.total = static_cast<long long>(test.rows.size());
    m.accuracy = static_cast<double>(confusion[0][0] + confusion[1][1]) / m.total;
    for (int c = 0; c < 2; ++c) {
        long long tp = confusion[c][c];
        long long fp = confusion[1 - c][c];
        long long fn = confusion[c][1 - c];
        ClassMetrics& cm = m.cls[c];
        cm.support = tp + fn;
        cm.precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
        cm.recall = cm.support > 0 ? static_cast<double>(tp) / cm.support : 0.0;
        cm.f1 = (cm.precision + cm.recall) > 0.0
                    ? 2.0 * cm.precision * cm.recall / (cm.precision + cm.recall)
                    : 0.0;
    }
    return m;
}

std::string classification_report(const ClassificationMetrics& m) {
    std::ostringstream out;
    char buf[128];
    out << "              precision    recall  f1-score   support\n\n";
    for (int c = 0; c < 2; ++c) {
        std::snprintf(buf, sizeof buf, "%12s %10.2f %9.2f %9.2f %9lld\n",
                      c == 0 ? "0.0" : "1.0", m.cls[c].precision, m.cls[c].recall, m.cls[c].f1,
                      static_cast<long long>(m.cls[c].support));
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "\n%12s %10s %9s %9.2f %9lld\n", "accuracy", "", "",
                  m.accuracy, static_cast<long long>(m.total));
    out << buf;
    return out.str();
}

} // namespace spraylab
