/// @file mesh.hpp
/// @brief Conforming triangulations: periodic torus grids, graded channel
///        meshes with an embedded flat plate, and a plain-text file format.

#ifndef VVNS_MESH_HPP
#define VVNS_MESH_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace vvns {

enum class Marker { inflow, outflow, wall, plate };

std::string marker_name(Marker m);
Marker marker_from_name(const std::string& s);

struct BoundaryEdge {
    int a = 0;
    int b = 0;
    Marker marker = Marker::wall;
};

/// Triangulation with boundary markers and optional periodic node
/// identification. Nodes on the periodic image boundary are stored
/// physically (so per-triangle geometry stays local) and mapped to their
/// masters through periodic_map.
struct Mesh {
    std::vector<std::array<double, 2>> nodes;
    std::vector<std::array<int, 3>> triangles;  // counterclockwise
    std::vector<BoundaryEdge> boundary_edges;
    std::vector<std::pair<int, int>> periodic_map;  // (slave, master)

    bool periodic() const { return !periodic_map.empty(); }

    /// Canonical node id: follows periodic_map, identity otherwise.
    int master_of(int node) const;

    /// Node/face/edge counts after periodic identification.
    int identified_node_count() const;
    int identified_edge_count() const;

    double total_area() const;
};

double triangle_area(const Mesh& mesh, int tri);

/// Per-node master table (identity except periodic slaves).
std::vector<int> node_masters(const Mesh& mesh);

/// Checks positive areas, manifold edges (interior edges in exactly two
/// triangles, boundary edges in one), and periodic_map consistency.
/// Throws std::runtime_error describing the first violation.
void validate_mesh(const Mesh& mesh);

/// Uniform n-by-n grid of squares on (0,2pi)^2, each split along the same
/// diagonal; nodes on x=2pi / y=2pi are identified with x=0 / y=0.
Mesh build_torus_mesh(int n);

struct ChannelGrading {
    double h_near = 0.1;   // cell size at the plate
    double h_far = 0.7;    // far-field cell size
    double growth = 1.15;  // geometric stretching ratio
    double h_wall = 0.1;   // wall-normal cell size at the channel walls
};

/// Channel [-7,20]x[-10,10] minus the plate [0,0.125]x[-0.5,0.5].
/// Tensor-product grading away from the plate; rectangles split into
/// triangles; the y axis also refines toward the channel walls so the wall
/// boundary layer (and its natural vorticity flux) is resolved. Boundary
/// markers: x=-7 inflow, x=20 outflow, y=+-10 wall, plate perimeter plate.
Mesh build_channel_mesh(const ChannelGrading& grading);

/// Plain-text format: line 1 "V F B"; V lines "x y"; F lines "i j k";
/// B lines "i j marker"; optional "periodic P" + P lines "slave master".
Mesh load_mesh(const std::string& path);
void save_mesh(const Mesh& mesh, const std::string& path);

}  // namespace vvns

#endif
