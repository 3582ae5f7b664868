#include "spraylab/map_graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <queue>
#include <sstream>

#include "spraylab/error.hpp"
#include "spraylab/text.hpp"

namespace spraylab {

double distance(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

int MapGraph::add_vertex(Point p) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw ValidationError("map vertex coordinates must be finite");
    vertices_.push_back(p);
    adjacency_.emplace_back();
    return static_cast<int>(vertices_.size()) - 1;
}

void MapGraph::add_edge(int a, int b) {
    double len = distance(vertices_[a], vertices_[b]);
    if (len <= 0.0)
        throw ValidationError("zero-length map edge");
    for (const auto& [n, _] : adjacency_[a])
        if (n == b) return;  // duplicate segment in the source data
    adjacency_[a].emplace_back(b, len);
    adjacency_[b].emplace_back(a, len);
    std::sort(adjacency_[a].begin(), adjacency_[a].end());
    std::sort(adjacency_[b].begin(), adjacency_[b].end());
    ++edge_count_;
}

Point MapGraph::bbox_min() const {
    Point p{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
    for (const auto& v : vertices_) {
        p.x = std::min(p.x, v.x);
        p.y = std::min(p.y, v.y);
    }
    return p;
}

Point MapGraph::bbox_max() const {
    Point p{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
    for (const auto& v : vertices_) {
        p.x = std::max(p.x, v.x);
        p.y = std::max(p.y, v.y);
    }
    return p;
}

void MapGraph::validate_connected() const {
    int n = vertex_count();
    if (n == 0) throw ValidationError("map has no vertices");
    std::vector<int> component(n, -1);
    std::vector<int> sizes;
    for (int start = 0; start < n; ++start) {
        if (component[start] != -1) continue;
        int id = static_cast<int>(sizes.size());
        int size = 0;
        std::vector<int> stack{start};
        component[start] = id;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            ++size;
            for (const auto& [v, _] : adjacency_[u]) {
                if (component[v] == -1) {
                    component[v] = id;
                    stack.push_back(v);
                }
            }
        }
        sizes.push_back(size);
    }
    if (sizes.size() > 1) {
        std::ostringstream msg;
        msg << "map graph is disconnected (" << sizes.size() << " components: sizes";
        for (std::size_t i = 0; i < sizes.size(); ++i)
            msg << (i ? ", " : " ") << sizes[i];
        msg << ")";
        throw ValidationError(msg.str());
    }
}

namespace {

std::vector<Point> parse_linestring(const std::string& line, int lineno) {
    auto open = line.find('(');
    auto close = line.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw ParseError("map", lineno, "malformed LINESTRING: missing parentheses");
    std::string body = line.substr(open + 1, close - open - 1);
    std::vector<Point> points;
    for (const auto& chunk : split(body, ',')) {
        std::istringstream ss(chunk);
        Point p;
        if (!(ss >> p.x >> p.y))
            throw ParseError("map", lineno, "malformed coordinate pair: '" + trim(chunk) + "'");
        std::string rest;
        if (ss >> rest)
            throw ParseError("map", lineno, "trailing data in coordinate pair: '" + trim(chunk) + "'");
        points.push_back(p);
    }
    if (points.size() < 2)
        throw ParseError("map", lineno, "LINESTRING needs at least two points");
    return points;
}

} // namespace

MapGraph load_map(const std::string& text) {
    MapGraph map;
    std::map<std::pair<double, double>, int> index;
    auto vertex_for = [&](Point p) {
        auto key = std::make_pair(p.x, p.y);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = map.add_vertex(p);
        index.emplace(key, id);
        return id;
    };

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!starts_with(t, "LINESTRING"))
            throw ParseError("map", lineno, "expected LINESTRING, got '" + t.substr(0, 20) + "'");
        auto points = parse_linestring(t, lineno);
        int prev = vertex_for(points[0]);
        for (std::size_t i = 1; i < points.size(); ++i) {
            int cur = vertex_for(points[i]);
            if (cur == prev)
                throw ParseError("map", lineno, "zero-length segment");
            map.add_edge(prev, cur);
            prev = cur;
        }
    }
    map.validate_connected();
    return map;
}

MapGraph load_map_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open map file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_map(ss.str());
}

MapGraph synth_grid(int rows, int cols, double spacing) {
    if (rows < 2 || cols < 2)
        throw ValidationError("synth_grid: rows and cols must be >= 2");
    if (spacing <= 0.0)
        throw ValidationError("synth_grid: spacing must be > 0");
    MapGraph map;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            map.add_vertex({c * spacing, r * spacing});
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            int v = r * cols + c;
            if (c + 1 < cols) map.add_edge(v, v + 1);
            if (r + 1 < rows) map.add_edge(v, v + cols);
        }
    }
    return map;
}

std::vector<int> shortest_path(const MapGraph& map, int from, int to) {
    int n = map.vertex_count();
    if (from < 0 || from >= n || to < 0 || to >= n)
        throw std::out_of_range("shortest_path: vertex out of range");
    if (from == to) return {from};

    // Distances to the target, then a greedy walk from the source picking
    // the smallest-index neighbor that stays on a shortest path. This
    // yields the lexicographically-first shortest path.
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    dist[to] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    queue.emplace(0.0, to);
    while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (d > dist[u]) continue;
        for (const auto& [v, w] : map.neighbors(u)) {
            if (d + w < dist[v]) {
                dist[v] = d + w;
                queue.emplace(dist[v], v);
            }
        }
    }

    std::vector<int> path{from};
    int u = from;
    for (int guard = 0; u != to; ++guard) {
        if (guard > n)
            throw std::logic_error("shortest_path: walk failed to terminate");
        int best = -1;
        double best_cost = std::numeric_limits<double>::infinity();
        for (const auto& [v, w] : map.neighbors(u)) {
            double cost = w + dist[v];
            if (cost < best_cost) {
                best_cost = cost;
                best = v;  // neighbors are sorted by index, so first win is smallest
            }
        }
        u = best;
        path.push_back(u);
    }
    return path;
}

} // namespace spraylab
