#include "spraylab/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "spraylab/error.hpp"
#include "spraylab/rng.hpp"
#include "spraylab/text.hpp"

namespace spraylab {

namespace {

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string f;
    while (ss >> f) out.push_back(f);
    return out;
}

} // namespace

std::vector<ContactEvent> parse_connectivity(const std::string& text) {
    std::vector<ContactEvent> events;
    std::map<std::pair<std::string, std::string>, int> open;  // pair -> open count
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    double last_time = -1.0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto f = fields_of(line);
        if (f.size() != 5 || f[1] != "CONN" || (f[4] != "up" && f[4] != "down"))
            throw ParseError("connectivity", lineno, "expected '<time> CONN <h1> <h2> <up|down>'");
        ContactEvent ev;
        ev.time = parse_double(f[0], "connectivity time");
        ev.host1 = f[2];
        ev.host2 = f[3];
        ev.up = f[4] == "up";
        if (ev.host1 == ev.host2)
            throw ParseError("connectivity", lineno, "contact with itself: " + ev.host1);
        if (ev.time < last_time)
            throw ValidationError("connectivity: events out of order at line " +
                                  std::to_string(lineno));
        last_time = ev.time;
        auto key = std::minmax(ev.host1, ev.host2);
        if (ev.up) {
            if (open[key] > 0)
                throw ValidationError("connectivity: duplicate up for " + key.first + "-" +
                                      key.second + " at line " + std::to_string(lineno));
            open[key] = 1;
        } else {
            if (open[key] == 0)
                throw ValidationError("connectivity: down before up for " + key.first + "-" +
                                      key.second + " at line " + std::to_string(lineno));
            open[key] = 0;
        }
        events.push_back(std::move(ev));
    }
    for (const auto& [key, count] : open)
        if (count > 0)
            throw ValidationError("unmatched contact " + key.first + "-" + key.second);
    return events;
}

std::vector<DeliveryRecord> parse_delivered(const std::string& text) {
    std::vector<DeliveryRecord> records;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto f = fields_of(t);
        if (f.size() != 10)
            throw ParseError("delivered", lineno,
                             "expected 10 fields, got " + std::to_string(f.size()));
        DeliveryRecord rec;
        rec.time = parse_double(f[0], "delivered time");
        rec.id = f[1];
        rec.size = parse_int(f[2], "delivered size");
        rec.hopcount = static_cast<int>(parse_int(f[3], "delivered hopcount"));
        rec.latency = parse_double(f[4], "delivered deliveryTime");
        rec.from_host = f[5];
        rec.to_host = f[6];
        rec.remaining_ttl = parse_double(f[7], "delivered remainingTtl");
        const std::string& path_field = f[9];
        std::size_t start = 0;
        while (start <= path_field.size()) {
            std::size_t arrow = path_field.find("->", start);
            std::string hop = arrow == std::string::npos
                                  ? path_field.substr(start)
                                  : path_field.substr(start, arrow - start);
            if (hop.empty())
                throw ParseError("delivered", lineno, "empty hop in path '" + path_field + "'");
            rec.path.push_back(hop);
            if (arrow == std::string::npos) break;
            start = arrow + 2;
        }
        if (rec.hopcount != static_cast<int>(rec.path.size()) - 1)
            throw ValidationError("delivered line " + std::to_string(lineno) + ": hopcount " +
                                  std::to_string(rec.hopcount) + " != path length - 1");
        if (rec.path.empty() || rec.path.front() != rec.from_host ||
            rec.path.back() != rec.to_host)
            throw ValidationError("delivered line " + std::to_string(lineno) +
                                  ": path endpoints do not match fromHost/toHost");
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<FeatureVector> compute_features(const std::vector<ContactEvent>& events) {
    struct Acc {
        long long ups = 0;
        std::set<std::string> peers;
        double duration_sum = 0.0;
        long long closed = 0;
    };
    std::map<std::string, Acc> acc;
    std::map<std::pair<std::string, std::string>, double> open;
    for (const auto& ev : events) {
        auto key = std::minmax(ev.host1, ev.host2);
        if (ev.up) {
            open[key] = ev.time;
            for (const auto& host : {key.first, key.second}) {
                acc[host].ups += 1;
                acc[host].peers.insert(host == key.first ? key.second : key.first);
            }
        } else {
            auto it = open.find(key);
            if (it == open.end())
                throw ValidationError("compute_features: down before up for " + key.first + "-" +
                                      key.second);
            double dur = ev.time - it->second;
            open.erase(it);
            acc[key.first].duration_sum += dur;
            acc[key.first].closed += 1;
            acc[key.second].duration_sum += dur;
            acc[key.second].closed += 1;
        }
    }
    if (!open.empty())
        throw ValidationError("compute_features: unmatched contact " +
                              open.begin()->first.first + "-" + open.begin()->first.second);
    std::vector<FeatureVector> out;
    for (const auto& [node, a] : acc) {
        if (a.ups == 0) continue;
        FeatureVector fv;
        fv.node = node;
        fv.contact_frequency = a.ups;
        fv.degree = static_cast<long long>(a.peers.size());
        fv.duration = a.closed > 0 ? a.duration_sum / a.closed : 0.0;
        out.push_back(std::move(fv));
    }
    return out;  // std::map iteration is already name-sorted
}

std::vector<LabeledNode> label_high_quality(const std::vector<DeliveryRecord>& records,
                                            const LabelRule& rule) {
    if (rule.max_hopcount < 1) throw ValidationError("LabelRule.max_hopcount must be >= 1");
    if (rule.min_deliveries < 1) throw ValidationError("LabelRule.min_deliveries must be >= 1");
    if (rule.sample_fraction <= 0.0 || rule.sample_fraction > 1.0)
        throw ValidationError("LabelRule.sample_fraction must be in (0, 1]");

    std::map<std::string, long long> qualifying;
    std::set<std::string> seen;
    for (const auto& rec : records) {
        seen.insert(rec.from_host);
        seen.insert(rec.to_host);
        for (const auto& hop : rec.path) seen.insert(hop);
        if (rec.hopcount <= rule.max_hopcount) qualifying[rec.from_host] += 1;
    }
    std::vector<std::string> candidates;
    for (const auto& [node, count] : qualifying)
        if (count > rule.min_deliveries) candidates.push_back(node);

    std::set<std::string> selected;
    if (!candidates.empty()) {
        Rng rng(rule.rng_seed);
        rng.shuffle(candidates);
        auto k = static_cast<std::size_t>(
            std::ceil(rule.sample_fraction * static_cast<double>(candidates.size()) - 1e-9));
        k = std::min(std::max<std::size_t>(k, 1), candidates.size());
        selected.insert(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k));
    }

    std::vector<LabeledNode> out;
    for (const auto& node : seen)
        out.push_back({node, selected.count(node) ? 1 : 0});
    return out;
}

const std::array<std::string, 3>& Dataset::feature_names() {
    static const std::array<std::string, 3> names{"contact_frequency", "degree", "duration"};
    return names;
}

Dataset build_dataset(const std::vector<std::vector<FeatureVector>>& features_per_day,
                      const std::vector<std::vector<LabeledNode>>& labels_per_day) {
    if (features_per_day.size() != labels_per_day.size())
        throw ValidationError("build_dataset: " + std::to_string(features_per_day.size()) +
                              " feature days vs " + std::to_string(labels_per_day.size()) +
                              " label days");
    Dataset data;
    for (std::size_t d = 0; d < features_per_day.size(); ++d) {
        std::map<std::string, const FeatureVector*> by_node;
        for (const auto& fv : features_per_day[d]) by_node[fv.node] = &fv;
        std::map<std::string, int> labels;
        for (const auto& ln : labels_per_day[d]) {
            if (!by_node.count(ln.node))
                throw ValidationError("day " + std::to_string(d + 1) +
                                      ": label references node '" + ln.node +
                                      "' absent from that day's features");
            labels[ln.node] = ln.label;
        }
        for (const auto& [node, fv] : by_node) {
            DatasetRow row;
            row.day = static_cast<int>(d + 1);
            row.node = node;
            row.features = {static_cast<double>(fv->contact_frequency),
                            static_cast<double>(fv->degree), fv->duration};
            auto it = labels.find(node);
            row.label = it == labels.end() ? 0 : it->second;
            data.rows.push_back(std::move(row));
        }
    }
    return data;
}

std::string features_to_csv(const std::vector<FeatureVector>& features) {
    std::ostringstream out;
    out << "node,contact_frequency,degree,duration\n";
    for (const auto& fv : features)
        out << fv.node << ',' << fv.contact_frequency << ',' << fv.degree << ','
            << shortest_repr(fv.duration) << '\n';
    return out.str();
}

std::vector<FeatureVector> parse_features_csv(const std::string& text, const std::string& name) {
    std::vector<FeatureVector> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        if (lineno == 1) {
            if (t != "node,contact_frequency,degree,duration")
                throw ParseError(name, lineno, "unexpected header: '" + t + "'");
            continue;
        }
        auto f = split(t, ',');
        if (f.size() != 4)
            throw ParseError(name, lineno, "expected 4 columns, got " + std::to_string(f.size()));
        FeatureVector fv;
        fv.node = trim(f[0]);
        fv.contact_frequency = parse_int(f[1], name + " contact_frequency");
        fv.degree = parse_int(f[2], name + " degree");
        fv.duration = parse_double(f[3], name + " duration");
        out.push_back(std::move(fv));
    }
    return out;
}

std::string labels_to_csv(const std::vector<LabeledNode>& labels) {
    std::ostringstream out;
    out << "node,label\n";
    for (const auto& ln : labels) out << ln.node << ',' << ln.label << '\n';
    return out.str();
}

std::vector<LabeledNode> parse_labels_csv(const std::string& text, const std::string& name) {
    std::vector<LabeledNode> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        if (lineno == 1) {
            if (t != "node,label")
                throw ParseError(name, lineno, "unexpected header: '" + t + "'");
            continue;
        }
        auto f = split(t, ',');
        if (f.size() != 2)
            throw ParseError(name, lineno, "expected 2 columns, got " + std::to_string(f.size()));
        LabeledNode ln;
        ln.node = trim(f[0]);
        ln.label = static_cast<int>(parse_int(f[1], name + " label"));
        if (ln.label != 0 && ln.label != 1)
            throw ParseError(name, lineno, "label must be 0 or 1");
        out.push_back(std::move(ln));
    }
    return out;
}

std::string dataset_to_csv(const Dataset& dataset) {
    std::ostringstream out;
    out << "day,node,contact_frequency,degree,duration,label\n";
    for (const auto& row : dataset.rows)
        out << row.day << ',' << row.node << ',' << shortest_repr(row.features[0]) << ','
            << shortest_repr(row.features[1]) << ',' << shortest_repr(row.features[2]) << ','
            << row.label << '\n';
    return out.str();
}

} // namespace spraylab
