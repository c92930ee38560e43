/// @file test_mesh.cpp

#include <cmath>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "vvns/mesh.hpp"

using namespace vvns;

namespace {

std::string temp_path(const std::string& name) {
    return std::string("test_artifact_") + name;
}

double edge_length(const Mesh& mesh, const BoundaryEdge& e) {
    const double dx = mesh.nodes[e.a][0] - mesh.nodes[e.b][0];
    const double dy = mesh.nodes[e.a][1] - mesh.nodes[e.b][1];
    return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

TEST_SUITE("mesh") {

TEST_CASE("torus counts satisfy the Euler formula") {
    for (const auto [n, V, F, E] : {std::array{1, 1, 2, 3}, std::array{2, 4, 8, 12},
                                    std::array{4, 16, 32, 48}}) {
        const Mesh m = build_torus_mesh(n);
        CHECK(m.identified_node_count() == V);
        CHECK(static_cast<int>(m.triangles.size()) == F);
        CHECK(m.identified_edge_count() == E);
        CHECK(m.boundary_edges.empty());
        CHECK_NOTHROW(validate_mesh(m));
    }
}

TEST_CASE("degenerate torus subdivision is rejected") {
    CHECK_THROWS_AS(build_torus_mesh(0), std::invalid_argument);
    CHECK_THROWS_AS(build_torus_mesh(-3), std::invalid_argument);
}

TEST_CASE("torus area and positive orientation") {
    const Mesh m = build_torus_mesh(8);
    const double area = m.total_area();
    CHECK(std::abs(area - 4.0 * M_PI * M_PI) <= 1e-10 * 4.0 * M_PI * M_PI);
    for (std::size_t t = 0; t < m.triangles.size(); ++t)
        CHECK(triangle_area(m, static_cast<int>(t)) > 0.0);
}

TEST_CASE("periodic identification has no chains") {
    const Mesh m = build_torus_mesh(5);
    for (const auto& [slave, master] : m.periodic_map) {
        CHECK(slave != master);
        CHECK(m.master_of(master) == master);
    }
}

TEST_CASE("channel mesh geometry and markers") {
    const Mesh m = build_channel_mesh({.h_near = 0.25, .h_far = 2.0, .growth = 1.3});
    CHECK_NOTHROW(validate_mesh(m));
    const double area = m.total_area();
    const double expected = 27.0 * 20.0 - 0.125 * 1.0;
    CHECK(std::abs(area - expected) <= 1e-10 * expected);

    double plate_len = 0.0;
    int marker_counts[4] = {0, 0, 0, 0};
    for (const auto& e : m.boundary_edges) {
        ++marker_counts[static_cast<int>(e.marker)];
        if (e.marker == Marker::plate) plate_len += edge_length(m, e);
    }
    CHECK(std::abs(plate_len - 2.25) <= 1e-12);
    for (int c : marker_counts) CHECK(c > 0);
}

TEST_CASE("degenerate channel grading is rejected") {
    CHECK_THROWS(build_channel_mesh({.h_near = -0.1, .h_far = 1.0, .growth = 1.2}));
    CHECK_THROWS(build_channel_mesh({.h_near = 0.1, .h_far = 1.0, .growth = 0.0}));
}

TEST_CASE("mesh file round trip") {
    const Mesh m = build_torus_mesh(4);
    const std::string path = temp_path("torus4.mesh");
    save_mesh(m, path);
    const Mesh r = load_mesh(path);
    CHECK(r.nodes.size() == m.nodes.size());
    CHECK(r.triangles.size() == m.triangles.size());
    CHECK(r.boundary_edges.size() == m.boundary_edges.size());
    CHECK(r.periodic_map == m.periodic_map);
    CHECK(r.triangles == m.triangles);
    std::remove(path.c_str());
}

TEST_CASE("invalid mesh files are rejected") {
    const std::string path = temp_path("bad.mesh");
    {
        // Zero-area triangle (three collinear nodes).
        std::ofstream out(path);
        out << "3 1 3\n0 0\n1 0\n2 0\n0 1 2\n0 1 wall\n1 2 wall\n2 0 wall\n";
    }
    CHECK_THROWS(load_mesh(path));
    {
        // Malformed header.
        std::ofstream out(path);
        out << "banana\n";
    }
    CHECK_THROWS_WITH_AS(load_mesh(path), doctest::Contains(":1"), std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("non-manifold edge is rejected") {
    Mesh m;
    m.nodes = {{0, 0}, {1, 0}, {0, 1}, {1, 1}, {-1, 1}};
    m.triangles = {{0, 1, 2}, {1, 3, 2}, {0, 2, 4}};
    // Edge (0,2) appears in triangles 0 and 2 but is also declared boundary.
    m.boundary_edges = {{0, 1, Marker::wall}, {1, 3, Marker::wall}, {3, 2, Marker::wall},
                        {2, 4, Marker::wall}, {4, 0, Marker::wall}, {0, 2, Marker::wall}};
    CHECK_THROWS(validate_mesh(m));
}

}  // TEST_SUITE
