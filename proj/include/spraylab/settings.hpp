#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spraylab/routing.hpp"

namespace spraylab {

enum class MovementModel { Stationary, RandomWaypoint, MapBased };

struct GroupConfig {
    std::string group_id;      // host name prefix ("p", "c", "a", "r")
    int count = 1;
    MovementModel movement = MovementModel::MapBased;
    double speed_min = 0.5, speed_max = 1.5;   // m/s
    double wait_min = 0.0, wait_max = 120.0;   // s
    double buffer_size = 50e6;                 // bytes
    double ttl = 18000.0;                      // s
    std::string router = "SprayAndWaitRouter";
    // `Group.fixedPosition = x1,y1[,x2,y2,...]`: host i takes pair i mod n.
    std::vector<std::pair<double, double>> fixed_positions;
};

struct TrafficConfig {
    bool enabled = true;
    double interval_min = 25.0, interval_max = 35.0;  // s between messages
    double size_min = 500e3, size_max = 1e6;          // bytes
    std::vector<std::string> source_groups;           // empty = all hosts
    std::vector<std::string> dest_groups;             // empty = all hosts
};

struct MapSpec {
    std::string map_file;      // WKT file; empty = synthetic grid
    int grid_rows = 10, grid_cols = 10;
    double grid_spacing = 200.0;  // m
};

/// Fully-resolved scenario. Produced by load_settings; every field has a
/// documented default except end_time, which the settings text must supply.
struct SimConfig {
    std::string name = "scenario";
    double end_time = 0.0;         // s, required
    double update_interval = 1.0;  // s per tick
    double transmit_speed = 250e3; // bytes/s
    double transmit_range = 30.0;  // m
    std::vector<GroupConfig> groups;
    TrafficConfig traffic;
    std::uint64_t rng_seed = 1;
    RouterConfig router;           // carries hq_set and hq_multiplier

    MapSpec map;

    int total_hosts() const;
};

/// Parses `key = value` scenario text (ONE-style keys, `#` comments,
/// unknown keys tolerated) and applies defaults. Group-specific keys
/// (`Group2.speed`) override the `Group.` defaults.
SimConfig load_settings(const std::string& text);
SimConfig load_settings_file(const std::string& path);

/// Desk-scale profile: multiplies mobile-group node counts by `factor`
/// (rounded, at least 1; stationary groups keep their counts) and scales
/// end_time, rounding to a whole hour when the result is at least one hour.
void scale_config(SimConfig& cfg, double factor);

} // namespace spraylab
