/// @file mesh.cpp

#include "vvns/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace vvns {

namespace {
constexpr double kGeomTol = 1e-9;

std::pair<int, int> sorted_pair(int a, int b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}
}  // namespace

std::string marker_name(Marker m) {
    switch (m) {
        case Marker::inflow: return "inflow";
        case Marker::outflow: return "outflow";
        case Marker::wall: return "wall";
        case Marker::plate: return "plate";
    }
    return "?";
}

Marker marker_from_name(const std::string& s) {
    if (s == "inflow") return Marker::inflow;
    if (s == "outflow") return Marker::outflow;
    if (s == "wall") return Marker::wall;
    if (s == "plate") return Marker::plate;
    throw std::runtime_error("unknown boundary marker '" + s + "'");
}

std::vector<int> node_masters(const Mesh& mesh) {
    std::vector<int> master(mesh.nodes.size());
    for (std::size_t i = 0; i < master.size(); ++i) master[i] = static_cast<int>(i);
    for (const auto& [slave, m] : mesh.periodic_map) master[slave] = m;
    return master;
}

int Mesh::master_of(int node) const {
    for (const auto& [slave, m] : periodic_map)
        if (slave == node) return m;
    return node;
}

int Mesh::identified_node_count() const {
    return static_cast<int>(nodes.size() - periodic_map.size());
}

int Mesh::identified_edge_count() const {
    // Count raw edges; unmarked rim edges pair up across the periodic
    // identification, so each pair is one edge.
    std::map<std::pair<int, int>, int> count;
    for (const auto& t : triangles)
        for (int e = 0; e < 3; ++e) ++count[sorted_pair(t[e], t[(e + 1) % 3])];
    std::set<std::pair<int, int>> marked;
    for (const auto& be : boundary_edges) marked.insert(sorted_pair(be.a, be.b));
    int rim = 0;
    if (!periodic_map.empty())
        for (const auto& [key, c] : count)
            if (c == 1 && !marked.count(key)) ++rim;
    return static_cast<int>(count.size()) - rim / 2;
}

double triangle_area(const Mesh& mesh, int tri) {
    const auto& t = mesh.triangles[tri];
    const auto& p0 = mesh.nodes[t[0]];
    const auto& p1 = mesh.nodes[t[1]];
    const auto& p2 = mesh.nodes[t[2]];
    return 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]));
}

double Mesh::total_area() const {
    double a = 0.0;
    for (std::size_t i = 0; i < triangles.size(); ++i)
        a += triangle_area(*this, static_cast<int>(i));
    return a;
}

void validate_mesh(const Mesh& mesh) {
    const int nv = static_cast<int>(mesh.nodes.size());
    for (const auto& t : mesh.triangles)
        for (int v : t)
            if (v < 0 || v >= nv)
                throw std::runtime_error("triangle references node " + std::to_string(v) +
                                         " out of range");

    for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
        const double a = triangle_area(mesh, static_cast<int>(i));
        if (!(a > 0.0))
            throw std::runtime_error("triangle " + std::to_string(i) +
                                     " has non-positive area " + std::to_string(a));
    }

    // Periodic map: slave maps once, masters are never slaves (no chains).
    std::set<int> slaves;
    for (const auto& [slave, master] : mesh.periodic_map) {
        if (slave == master)
            throw std::runtime_error("periodic map: node " + std::to_string(slave) +
                                     " maps to itself");
        if (!slaves.insert(slave).second)
            throw std::runtime_error("periodic map: node " + std::to_string(slave) +
                                     " mapped twice");
    }
    for (const auto& [slave, master] : mesh.periodic_map)
        if (slaves.count(master))
            throw std::runtime_error("periodic map: chained mapping through node " +
                                     std::to_string(master));

    // Manifold check on raw edges; unmarked rim edges must pair up through
    // the periodic identification.
    const auto master = node_masters(mesh);
    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& t : mesh.triangles)
        for (int e = 0; e < 3; ++e) ++edge_count[sorted_pair(t[e], t[(e + 1) % 3])];

    std::set<std::pair<int, int>> marked;
    for (const auto& be : mesh.boundary_edges) {
        const auto key = sorted_pair(be.a, be.b);
        auto it = edge_count.find(key);
        if (it == edge_count.end())
            throw std::runtime_error("boundary edge (" + std::to_string(be.a) + "," +
                                     std::to_string(be.b) + ") is not a mesh edge");
        marked.insert(key);
    }
    std::map<std::pair<int, int>, int> periodic_rim;
    for (const auto& [key, count] : edge_count) {
        if (count > 2)
            throw std::runtime_error("non-manifold edge (" + std::to_string(key.first) + "," +
                                     std::to_string(key.second) + ") shared by " +
                                     std::to_string(count) + " triangles");
        if (count == 1 && !marked.count(key))
            ++periodic_rim[sorted_pair(master[key.first], master[key.second])];
        if (count == 2 && marked.count(key))
            throw std::runtime_error("interior edge (" + std::to_string(key.first) + "," +
                                     std::to_string(key.second) + ") carries a boundary marker");
    }
    for (const auto& [key, count] : periodic_rim) {
        if (mesh.periodic_map.empty() || count % 2 != 0)
            throw std::runtime_error("boundary edge (" + std::to_string(key.first) + "," +
                                     std::to_string(key.second) +
                                     ") has no marker and no periodic partner");
    }
}

Mesh build_torus_mesh(int n) {
    if (n < 1) throw std::invalid_argument("torus subdivision must be >= 1");
    const double L = 2.0 * std::numbers::pi;
    const double h = L / n;

    Mesh mesh;
    auto id = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            mesh.nodes.push_back({i * h, j * h});

    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int v00 = id(i, j), v10 = id(i + 1, j);
            const int v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
            mesh.triangles.push_back({v00, v10, v11});
            mesh.triangles.push_back({v00, v11, v01});
        }

    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            if (i == n || j == n) mesh.periodic_map.emplace_back(id(i, j), id(i % n, j % n));

    validate_mesh(mesh);
    return mesh;
}

namespace {

/// 1D cell sizes covering [0, length], starting at size h0 next to x=0 and
/// stretching geometrically up to hmax; sizes are rescaled so they tile the
/// interval exactly.
std::vector<double> graded_sizes(double length, double h0, double hmax, double growth) {
    if (!(length > 0.0)) throw std::invalid_argument("grading interval must have positive length");
    std::vector<double> sizes;
    double h = h0;
    double total = 0.0;
    while (total < length) {
        sizes.push_back(h);
        total += h;
        h = std::min(h * growth, hmax);
    }
    const double scale = length / total;
    for (double& s : sizes) s *= scale;
    if (!(scale > 0.0) || sizes.empty())
        throw std::runtime_error("grading produced degenerate cells");
    return sizes;
}

/// 1D cell sizes covering [0, length] graded from both ends: h0 next to
/// x=0, h1 next to x=length, stretching geometrically toward hmax in the
/// middle; rescaled to tile the interval exactly.
std::vector<double> graded_sizes_two_sided(double length, double h0, double h1, double hmax,
                                           double growth) {
    if (!(length > 0.0)) throw std::invalid_argument("grading interval must have positive length");
    std::vector<double> front, back;
    double ha = h0, hb = h1, total = 0.0;
    while (total < length) {
        if (ha <= hb) {
            front.push_back(ha);
            total += ha;
            ha = std::min(ha * growth, hmax);
        } else {
            back.push_back(hb);
            total += hb;
            hb = std::min(hb * growth, hmax);
        }
    }
    const double scale = length / total;
    std::vector<double> sizes = std::move(front);
    for (auto it = back.rbegin(); it != back.rend(); ++it) sizes.push_back(*it);
    for (double& s : sizes) s *= scale;
    if (!(scale > 0.0) || sizes.empty())
        throw std::runtime_error("grading produced degenerate cells");
    return sizes;
}

/// Tensor coordinate array for one axis: [lo, plate_lo, plate_hi, hi] with a
/// uniform band across the plate and geometric stretching outward. When
/// h_end > 0 the outer ends are refined to that size (channel walls).
std::vector<double> graded_axis(double lo, double plate_lo, double plate_hi, double hi,
                                const ChannelGrading& g, double h_end) {
    std::vector<double> coords;
    // left of the plate: grade away from plate_lo (and from lo if walled)
    auto left = h_end > 0.0
                    ? graded_sizes_two_sided(plate_lo - lo, h_end, g.h_near, g.h_far, g.growth)
                    : graded_sizes(plate_lo - lo, g.h_near, g.h_far, g.growth);
    if (h_end <= 0.0) std::reverse(left.begin(), left.end());
    coords.push_back(lo);
    for (double s : left) coords.push_back(coords.back() + s);
    coords.back() = plate_lo;  // exact
    // across the plate: uniform
    const int nb = std::max(1, static_cast<int>(std::lround((plate_hi - plate_lo) / g.h_near)));
    for (int i = 1; i <= nb; ++i)
        coords.push_back(plate_lo + (plate_hi - plate_lo) * i / nb);
    coords.back() = plate_hi;
    // right of the plate
    auto right = h_end > 0.0
                     ? graded_sizes_two_sided(hi - plate_hi, g.h_near, h_end, g.h_far, g.growth)
                     : graded_sizes(hi - plate_hi, g.h_near, g.h_far, g.growth);
    for (double s : right) coords.push_back(coords.back() + s);
    coords.back() = hi;
    for (std::size_t i = 1; i < coords.size(); ++i)
        if (!(coords[i] > coords[i - 1]))
            throw std::runtime_error("grading produced degenerate cells");
    return coords;
}

}  // namespace

Mesh build_channel_mesh(const ChannelGrading& grading) {
    if (!(grading.h_near > 0.0) || !(grading.h_far > 0.0) || !(grading.h_wall > 0.0))
        throw std::invalid_argument("cell sizes must be positive");
    if (!(grading.growth > 1.0))
        throw std::invalid_argument("grading growth ratio must exceed 1");

    const double x_lo = -7.0, x_hi = 20.0, y_lo = -10.0, y_hi = 10.0;
    const double px_lo = 0.0, px_hi = 0.125, py_lo = -0.5, py_hi = 0.5;

    const auto xs = graded_axis(x_lo, px_lo, px_hi, x_hi, grading, 0.0);
    const auto ys = graded_axis(y_lo, py_lo, py_hi, y_hi, grading, grading.h_wall);
    const int nx = static_cast<int>(xs.size());
    const int ny = static_cast<int>(ys.size());

    auto inside_plate = [&](double x, double y) {
        return x > px_lo + kGeomTol && x < px_hi - kGeomTol && y > py_lo + kGeomTol &&
               y < py_hi - kGeomTol;
    };

    // Keep cells whose center lies outside the plate; compact node numbering.
    std::vector<int> node_id(static_cast<std::size_t>(nx) * ny, -1);
    Mesh mesh;
    auto use_node = [&](int i, int j) {
        int& slot = node_id[static_cast<std::size_t>(j) * nx + i];
        if (slot < 0) {
            slot = static_cast<int>(mesh.nodes.size());
            mesh.nodes.push_back({xs[i], ys[j]});
        }
        return slot;
    };

    for (int j = 0; j + 1 < ny; ++j)
        for (int i = 0; i + 1 < nx; ++i) {
            const double cx = 0.5 * (xs[i] + xs[i + 1]);
            const double cy = 0.5 * (ys[j] + ys[j + 1]);
            if (inside_plate(cx, cy)) continue;
            const int v00 = use_node(i, j), v10 = use_node(i + 1, j);
            const int v01 = use_node(i, j + 1), v11 = use_node(i + 1, j + 1);
            mesh.triangles.push_back({v00, v10, v11});
            mesh.triangles.push_back({v00, v11, v01});
        }

    // Boundary edges = edges incident to exactly one triangle.
    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& t : mesh.triangles)
        for (int e = 0; e < 3; ++e)
            ++edge_count[sorted_pair(t[e], t[(e + 1) % 3])];

    auto near = [](double a, double b) { return std::abs(a - b) < kGeomTol; };
    for (const auto& [key, count] : edge_count) {
        if (count != 1) continue;
        const auto& pa = mesh.nodes[key.first];
        const auto& pb = mesh.nodes[key.second];
        Marker m;
        if (near(pa[0], x_lo) && near(pb[0], x_lo))
            m = Marker::inflow;
        else if (near(pa[0], x_hi) && near(pb[0], x_hi))
            m = Marker::outflow;
        else if ((near(pa[1], y_lo) && near(pb[1], y_lo)) || (near(pa[1], y_hi) && near(pb[1], y_hi)))
            m = Marker::wall;
        else
            m = Marker::plate;
        mesh.boundary_edges.push_back({key.first, key.second, m});
    }

    validate_mesh(mesh);
    return mesh;
}

Mesh load_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mesh file '" + path + "'");

    int lineno = 0;
    auto next_line = [&](std::istringstream& ss) {
        std::string line;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
            ss = std::istringstream(line);
            return true;
        }
        return false;
    };
    auto parse_fail = [&](const std::string& what) -> std::runtime_error {
        return std::runtime_error(path + ":" + std::to_string(lineno) + ": " + what);
    };

    std::istringstream ss;
    if (!next_line(ss)) throw parse_fail("empty mesh file");
    long long V = 0, F = 0, B = 0;
    if (!(ss >> V >> F >> B) || V < 0 || F < 0 || B < 0)
        throw parse_fail("expected header 'V F B'");

    Mesh mesh;
    mesh.nodes.reserve(V);
    for (long long i = 0; i < V; ++i) {
        if (!next_line(ss)) throw parse_fail("unexpected end of file in node section");
        double x, y;
        if (!(ss >> x >> y)) throw parse_fail("expected node 'x y'");
        mesh.nodes.push_back({x, y});
    }
    mesh.triangles.reserve(F);
    for (long long i = 0; i < F; ++i) {
        if (!next_line(ss)) throw parse_fail("unexpected end of file in triangle section");
        int a, b, c;
        if (!(ss >> a >> b >> c)) throw parse_fail("expected triangle 'i j k'");
        mesh.triangles.push_back({a, b, c});
    }
    for (long long i = 0; i < B; ++i) {
        if (!next_line(ss)) throw parse_fail("unexpected end of file in boundary section");
        int a, b;
        std::string name;
        if (!(ss >> a >> b >> name)) throw parse_fail("expected boundary edge 'i j marker'");
        mesh.boundary_edges.push_back({a, b, marker_from_name(name)});
    }
    if (next_line(ss)) {
        std::string kw;
        long long P = 0;
        if (!(ss >> kw >> P) || kw != "periodic") throw parse_fail("expected 'periodic P'");
        for (long long i = 0; i < P; ++i) {
            if (!next_line(ss)) throw parse_fail("unexpected end of file in periodic section");
            int slave, master;
            if (!(ss >> slave >> master)) throw parse_fail("expected 'slave master'");
            mesh.periodic_map.emplace_back(slave, master);
        }
    }

    validate_mesh(mesh);
    return mesh;
}

void save_mesh(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write mesh file '" + path + "'");
    out.precision(17);
    out << mesh.nodes.size() << ' ' << mesh.triangles.size() << ' ' << mesh.boundary_edges.size()
        << '\n';
    for (const auto& p : mesh.nodes) out << p[0] << ' ' << p[1] << '\n';
    for (const auto& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    for (const auto& be : mesh.boundary_edges)
        out << be.a << ' ' << be.b << ' ' << marker_name(be.marker) << '\n';
    if (mesh.periodic()) {
        out << "periodic " << mesh.periodic_map.size() << '\n';
        for (const auto& [s, m] : mesh.periodic_map) out << s << ' ' << m << '\n';
    }
}

}  // namespace vvns
