#pragma once

#include <string>
#include <utility>
#include <vector>

namespace spraylab {

struct Point {
    double x = 0.0, y = 0.0;
};

double distance(const Point& a, const Point& b);

/// Undirected road graph. Vertices are deduplicated by exact coordinate;
/// the graph is validated connected on load.
class MapGraph {
public:
    int add_vertex(Point p);
    void add_edge(int a, int b);

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int edge_count() const { return edge_count_; }
    const Point& vertex(int i) const { return vertices_[i]; }
    const std::vector<std::pair<int, double>>& neighbors(int i) const { return adjacency_[i]; }

    Point bbox_min() const;
    Point bbox_max() const;

    /// Throws ValidationError when the graph has more than one component.
    void validate_connected() const;

private:
    std::vector<Point> vertices_;
    std::vector<std::vector<std::pair<int, double>>> adjacency_;  // (neighbor, edge length)
    int edge_count_ = 0;
};

/// Parses a WKT LINESTRING-per-line map file. Consecutive points form
/// edges; shared coordinates merge into one vertex.
MapGraph load_map(const std::string& text);
MapGraph load_map_file(const std::string& path);

/// rows x cols lattice with the given edge length, deterministic row-major
/// vertex order. The default map when no file is configured.
MapGraph synth_grid(int rows, int cols, double spacing);

/// Minimal-length path between two vertices, endpoints included.
/// Among equal-length paths returns the lexicographically-first one by
/// vertex index.
std::vector<int> shortest_path(const MapGraph& map, int from, int to);

} // namespace spraylab
