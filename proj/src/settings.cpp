#include "spraylab/settings.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "spraylab/error.hpp"
#include "spraylab/text.hpp"

namespace spraylab {

int SimConfig::total_hosts() const {
    int n = 0;
    for (const auto& g : groups) n += g.count;
    return n;
}

namespace {

// Raw settings table: last assignment wins, like ONE's property files.
class Settings {
public:
    explicit Settings(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::string t = trim(line);
            if (t.empty()) continue;
            auto eq = t.find('=');
            if (eq == std::string::npos)
                throw ParseError("settings", lineno, "expected 'key = value': '" + t + "'");
            std::string key = trim(t.substr(0, eq));
            std::string value = trim(t.substr(eq + 1));
            if (key.empty())
                throw ParseError("settings", lineno, "empty key");
            table_[key] = value;
        }
    }

    bool has(const std::string& key) const { return table_.count(key) > 0; }

    std::string get(const std::string& key, const std::string& fallback) const {
        auto it = table_.find(key);
        return it == table_.end() ? fallback : it->second;
    }

    // Group-scoped lookup: Group<idx>.<key> overrides Group.<key>.
    std::optional<std::string> group_get(int idx, const std::string& key) const {
        auto it = table_.find("Group" + std::to_string(idx) + "." + key);
        if (it != table_.end()) return it->second;
        it = table_.find("Group." + key);
        if (it != table_.end()) return it->second;
        return std::nullopt;
    }

    double number(const std::string& key, double fallback) const {
        auto it = table_.find(key);
        return it == table_.end() ? fallback : parse_scaled_number(it->second, key);
    }

    const std::map<std::string, std::string>& table() const { return table_; }

private:
    std::map<std::string, std::string> table_;
};

std::pair<double, double> parse_range(const std::string& value, const std::string& key) {
    auto parts = split(value, ',');
    if (parts.size() != 2)
        throw ParseError(key + ": expected 'min, max', got '" + value + "'");
    double lo = parse_scaled_number(parts[0], key);
    double hi = parse_scaled_number(parts[1], key);
    if (lo > hi)
        throw ValidationError(key + ": min " + shortest_repr(lo) + " > max " + shortest_repr(hi));
    return {lo, hi};
}

MovementModel parse_movement(const std::string& value) {
    if (value == "ShortestPathMapBasedMovement" || value == "MapBasedMovement")
        return MovementModel::MapBased;
    if (value == "RandomWaypoint") return MovementModel::RandomWaypoint;
    if (value == "Stationary" || value == "StationaryMovement")
        return MovementModel::Stationary;
    throw ValidationError("unknown movement model '" + value + "'");
}

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ParseError(key + ": expected true/false, got '" + value + "'");
}

std::vector<std::string> parse_name_list(const std::string& value) {
    std::vector<std::string> out;
    for (auto& part : split(value, ',')) {
        std::string name = trim(part);
        if (!name.empty()) out.push_back(name);
    }
    return out;
}

int count_groups(const Settings& s) {
    if (s.has("Scenario.nrofHostGroups"))
        return static_cast<int>(parse_int(s.get("Scenario.nrofHostGroups", ""), "Scenario.nrofHostGroups"));
    int n = 0;
    for (const auto& [key, _] : s.table()) {
        if (!starts_with(key, "Group")) continue;
        auto dot = key.find('.');
        if (dot == std::string::npos || dot == 5) continue;  // "Group." default key
        std::string idx = key.substr(5, dot - 5);
        if (idx.empty() || !std::all_of(idx.begin(), idx.end(),
                                        [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            continue;
        n = std::max(n, static_cast<int>(parse_int(idx, key)));
    }
    return n;
}

GroupConfig load_group(const Settings& s, int idx, double ttl_to_seconds) {
    GroupConfig g;
    auto id = s.group_get(idx, "groupID");
    if (!id)
        throw ValidationError("missing Group" + std::to_string(idx) + ".groupID");
    g.group_id = trim(*id);
    if (g.group_id.empty())
        throw ValidationError("Group" + std::to_string(idx) + ".groupID: empty");
    for (char c : g.group_id)
        if (std::isdigit(static_cast<unsigned char>(c)) || std::isspace(static_cast<unsigned char>(c)))
            throw ValidationError("Group" + std::to_string(idx) +
                                  ".groupID: '" + g.group_id + "' may not contain digits or spaces");

    auto hosts = s.group_get(idx, "nrofHosts");
    if (!hosts)
        throw ValidationError("missing Group" + std::to_string(idx) + ".nrofHosts");
    g.count = static_cast<int>(parse_int(*hosts, "Group" + std::to_string(idx) + ".nrofHosts"));
    if (g.count < 1)
        throw ValidationError("Group" + std::to_string(idx) + ".nrofHosts: must be >= 1");

    if (auto v = s.group_get(idx, "movementModel")) g.movement = parse_movement(trim(*v));
    if (auto v = s.group_get(idx, "speed"))
        std::tie(g.speed_min, g.speed_max) = parse_range(*v, "Group.speed");
    if (auto v = s.group_get(idx, "waitTime"))
        std::tie(g.wait_min, g.wait_max) = parse_range(*v, "Group.waitTime");
    if (auto v = s.group_get(idx, "bufferSize")) {
        g.buffer_size = parse_scaled_number(*v, "Group.bufferSize");
        if (g.buffer_size <= 0) throw ValidationError("Group.bufferSize: must be > 0");
    }
    if (auto v = s.group_get(idx, "msgTtl")) {
        double ttl = parse_scaled_number(*v, "Group.msgTtl");
        if (ttl <= 0) throw ValidationError("Group.msgTtl: must be > 0");
        g.ttl = ttl * ttl_to_seconds;
    } else {
        g.ttl = 300.0 * ttl_to_seconds;
    }
    if (auto v = s.group_get(idx, "router")) {
        std::string r = trim(*v);
        // The published tables spell it with spaces; normalize.
        if (r == "Spray and WaitRouter" || r == "SprayAndWaitRouter")
            r = "SprayAndWaitRouter";
        g.router = r;
    }
    if (auto v = s.group_get(idx, "fixedPosition")) {
        auto parts = split(*v, ',');
        if (parts.size() < 2 || parts.size() % 2 != 0)
            throw ParseError("Group.fixedPosition: expected 'x1, y1[, x2, y2...]', got '" + *v + "'");
        for (std::size_t i = 0; i < parts.size(); i += 2)
            g.fixed_positions.emplace_back(parse_double(parts[i], "Group.fixedPosition"),
                                           parse_double(parts[i + 1], "Group.fixedPosition"));
    }
    return g;
}

} // namespace

SimConfig load_settings(const std::string& text) {
    Settings s(text);
    SimConfig cfg;

    if (!s.has("Scenario.endTime"))
        throw ValidationError("missing Scenario.endTime");
    cfg.end_time = s.number("Scenario.endTime", 0.0);
    if (cfg.end_time <= 0) throw ValidationError("Scenario.endTime: must be > 0");

    cfg.name = s.get("Scenario.name", "scenario");
    cfg.update_interval = s.number("Scenario.updateInterval", 1.0);
    if (cfg.update_interval <= 0) throw ValidationError("Scenario.updateInterval: must be > 0");
    cfg.rng_seed = static_cast<std::uint64_t>(parse_int(s.get("Scenario.rngSeed", "1"), "Scenario.rngSeed"));

    cfg.transmit_speed = s.number("btInterface.transmitSpeed", 250e3);
    cfg.transmit_range = s.number("btInterface.transmitRange", 30.0);
    if (cfg.transmit_speed <= 0) throw ValidationError("btInterface.transmitSpeed: must be > 0");
    if (cfg.transmit_range <= 0) throw ValidationError("btInterface.transmitRange: must be > 0");

    // TTL values follow ONE's minute convention unless overridden.
    std::string ttl_unit = s.get("ttlUnit", s.get("Scenario.ttlUnit", "minutes"));
    double ttl_to_seconds;
    if (ttl_unit == "minutes") ttl_to_seconds = 60.0;
    else if (ttl_unit == "seconds") ttl_to_seconds = 1.0;
    else throw ValidationError("ttlUnit: expected seconds|minutes, got '" + ttl_unit + "'");

    int n_groups = count_groups(s);
    if (n_groups == 0) {
        // Minimal config: a single pedestrian-style group.
        GroupConfig g;
        g.group_id = "p";
        g.count = 10;
        g.ttl = 300.0 * ttl_to_seconds;
        if (auto v = s.group_get(0, "speed"))
            std::tie(g.speed_min, g.speed_max) = parse_range(*v, "Group.speed");
        if (auto v = s.group_get(0, "waitTime"))
            std::tie(g.wait_min, g.wait_max) = parse_range(*v, "Group.waitTime");
        if (auto v = s.group_get(0, "movementModel")) g.movement = parse_movement(trim(*v));
        if (auto v = s.group_get(0, "bufferSize")) g.buffer_size = parse_scaled_number(*v, "Group.bufferSize");
        if (auto v = s.group_get(0, "msgTtl")) g.ttl = parse_scaled_number(*v, "Group.msgTtl") * ttl_to_seconds;
        cfg.groups.push_back(std::move(g));
    } else {
        for (int i = 1; i <= n_groups; ++i)
            cfg.groups.push_back(load_group(s, i, ttl_to_seconds));
    }
    for (std::size_t i = 0; i < cfg.groups.size(); ++i)
        for (std::size_t j = i + 1; j < cfg.groups.size(); ++j)
            if (cfg.groups[i].group_id == cfg.groups[j].group_id)
                throw ValidationError("duplicate groupID '" + cfg.groups[i].group_id + "'");

    // Traffic generator.
    if (s.has("Events.nrof") && parse_int(s.get("Events.nrof", "1"), "Events.nrof") == 0)
        cfg.traffic.enabled = false;
    if (s.has("Events1.interval"))
        std::tie(cfg.traffic.interval_min, cfg.traffic.interval_max) =
            parse_range(s.get("Events1.interval", ""), "Events1.interval");
    if (s.has("Events1.size"))
        std::tie(cfg.traffic.size_min, cfg.traffic.size_max) =
            parse_range(s.get("Events1.size", ""), "Events1.size");
    auto parse_pool = [&](const std::string& key) -> std::vector<std::string> {
        std::string v = trim(s.get(key, "all"));
        if (v == "all" || v.empty()) return {};
        auto ids = parse_name_list(v);
        for (const auto& id : ids) {
            bool known = std::any_of(cfg.groups.begin(), cfg.groups.end(),
                                     [&](const GroupConfig& g) { return g.group_id == id; });
            if (!known) throw ValidationError(key + ": unknown group '" + id + "'");
        }
        return ids;
    };
    cfg.traffic.source_groups = parse_pool("Events1.hosts");
    cfg.traffic.dest_groups = parse_pool("Events1.toHosts");

    // Router.
    cfg.router.initial_copies =
        static_cast<int>(parse_int(s.get("SprayAndWaitRouter.nrofCopies", "6"), "SprayAndWaitRouter.nrofCopies"));
    if (cfg.router.initial_copies < 1)
        throw ValidationError("SprayAndWaitRouter.nrofCopies: must be >= 1");
    cfg.router.mode = parse_bool(s.get("SprayAndWaitRouter.binaryMode", "true"), "SprayAndWaitRouter.binaryMode")
                          ? SprayMode::Binary
                          : SprayMode::Vanilla;
    cfg.router.hq_multiplier =
        static_cast<int>(parse_int(s.get("SprayAndWaitRouter.hqMultiplier", "2"), "SprayAndWaitRouter.hqMultiplier"));
    if (cfg.router.hq_multiplier < 1)
        throw ValidationError("SprayAndWaitRouter.hqMultiplier: must be >= 1");
    cfg.router.hq_at_creation =
        parse_bool(s.get("SprayAndWaitRouter.hqAtCreation", "true"), "SprayAndWaitRouter.hqAtCreation");
    for (auto& name : parse_name_list(s.get("Group.highQualityNodes", "")))
        cfg.router.hq_set.insert(name);

    // Map.
    cfg.map.map_file = s.get("MovementModel.mapFile", "");
    cfg.map.grid_rows = static_cast<int>(s.number("MovementModel.gridRows", 10));
    cfg.map.grid_cols = static_cast<int>(s.number("MovementModel.gridCols", 10));
    cfg.map.grid_spacing = s.number("MovementModel.gridSpacing", 200.0);

    return cfg;
}

SimConfig load_settings_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open settings file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_settings(ss.str());
}

void scale_config(SimConfig& cfg, double factor) {
    if (factor <= 0) throw ValidationError("scale factor must be > 0");
    if (factor == 1.0) return;
    // Similarity transform of the scenario: node counts, run length and
    // message lifetime shrink together. Leaving the TTL (or the traffic
    // interval) unscaled changes the per-node buffer pressure regime and
    // distorts the routing dynamics at small scale.
    for (auto& g : cfg.groups) {
        if (g.movement == MovementModel::Stationary) continue;
        g.count = std::max(1, static_cast<int>(std::llround(g.count * factor)));
    }
    for (auto& g : cfg.groups) g.ttl = std::max(1.0, std::round(g.ttl * factor));
    cfg.traffic.size_min = std::max(1.0, std::round(cfg.traffic.size_min * factor));
    cfg.traffic.size_max = std::max(1.0, std::round(cfg.traffic.size_max * factor));
    double scaled = cfg.end_time * factor;
    if (scaled >= 3600.0)
        cfg.end_time = static_cast<double>(std::llround(scaled / 3600.0)) * 3600.0;
    else
        cfg.end_time = std::max(1.0, std::round(scaled));
}

} // namespace spraylab
