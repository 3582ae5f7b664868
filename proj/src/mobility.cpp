#include "spraylab/mobility.hpp"

#include <cmath>
#include <stdexcept>

namespace spraylab {

MovementState place_at_vertex(const MapGraph& map, int vertex) {
    MovementState s;
    s.position = map.vertex(vertex);
    s.current_vertex = vertex;
    return s;
}

MovementState place_at(Point p) {
    MovementState s;
    s.position = p;
    return s;
}

namespace {

void pick_new_path(MovementState& s, const MovementParams& params, const MapGraph& map,
                   Rng& rng) {
    if (params.model == MovementModel::MapBased) {
        int dest = s.current_vertex;
        while (dest == s.current_vertex)
            dest = static_cast<int>(rng.below(map.vertex_count()));
        auto path = shortest_path(map, s.current_vertex, dest);
        s.waypoints.clear();
        for (std::size_t i = 1; i < path.size(); ++i)
            s.waypoints.push_back(map.vertex(path[i]));
        s.target_vertex = dest;
    } else {  // RandomWaypoint: free point inside the map bounding box
        Point lo = map.bbox_min(), hi = map.bbox_max();
        Point dest;
        do {
            dest = {rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y)};
        } while (dest.x == s.position.x && dest.y == s.position.y);
        s.waypoints = {dest};
        s.target_vertex = -1;
    }
    s.leg_speed = rng.uniform(params.speed_min, params.speed_max);
}

} // namespace

MovementState next_position(const MovementState& state, const MovementParams& params,
                            const MapGraph& map, double now, double dt, Rng& rng) {
    if (dt <= 0) throw std::logic_error("next_position: dt must be > 0");
    if (params.model == MovementModel::Stationary) return state;

    MovementState s = state;
    double t = now;
    const double t_end = now + dt;
    int guard = 0;
    while (t < t_end) {
        if (++guard > 1000000)
            throw std::logic_error("next_position: movement loop failed to make progress");
        if (s.wait_until > t) {
            t = std::min(s.wait_until, t_end);
            if (t >= t_end) break;
            continue;
        }
        if (s.waypoints.empty()) pick_new_path(s, params, map, rng);

        Point target = s.waypoints.front();
        double d = distance(s.position, target);
        if (d == 0.0) {
            s.waypoints.erase(s.waypoints.begin());
        } else if (t + d / s.leg_speed <= t_end) {
            t += d / s.leg_speed;
            s.position = target;
            s.waypoints.erase(s.waypoints.begin());
        } else {
            double frac = (t_end - t) * s.leg_speed / d;
            s.position.x += (target.x - s.position.x) * frac;
            s.position.y += (target.y - s.position.y) * frac;
            t = t_end;
            break;
        }
        if (s.waypoints.empty()) {  // arrived
            s.current_vertex = s.target_vertex;
            s.wait_until = t + rng.uniform(params.wait_min, params.wait_max);
        }
    }
    return s;
}

} // namespace spraylab
