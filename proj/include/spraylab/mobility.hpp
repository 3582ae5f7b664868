#pragma once

#include <vector>

#include "spraylab/map_graph.hpp"
#include "spraylab/rng.hpp"
#include "spraylab/settings.hpp"

namespace spraylab {

struct MovementParams {
    MovementModel model = MovementModel::MapBased;
    double speed_min = 0.5, speed_max = 1.5;
    double wait_min = 0.0, wait_max = 120.0;
};

struct MovementState {
    Point position;
    std::vector<Point> waypoints;  // remaining path, front is next
    int current_vertex = -1;       // map vertex when idle (map-based movers)
    int target_vertex = -1;        // destination vertex of the active path
    double leg_speed = 0.0;        // m/s for the whole path
    double wait_until = 0.0;       // absolute sim time
};

MovementState place_at_vertex(const MapGraph& map, int vertex);
MovementState place_at(Point p);

/// Advances one node by dt seconds starting at `now`. Stationary nodes
/// never move or draw randomness. Movers walk their current path at
/// leg_speed; on arrival they wait uniform[wait_min, wait_max], then pick a
/// fresh destination (never the current vertex), route via shortest_path
/// (map-based) or straight line (random waypoint), and draw a new speed.
MovementState next_position(const MovementState& state, const MovementParams& params,
                            const MapGraph& map, double now, double dt, Rng& rng);

} // namespace spraylab
