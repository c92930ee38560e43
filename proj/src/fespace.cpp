/// @file fespace.cpp

#include "vvns/fespace.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "vvns/quadrature.hpp"

namespace vvns {

ElementGeometry element_geometry(const Mesh& mesh, int tri) {
    ElementGeometry g;
    const auto& t = mesh.triangles[tri];
    for (int i = 0; i < 3; ++i) g.verts[i] = mesh.nodes[t[i]];
    const double twoA = (g.verts[1][0] - g.verts[0][0]) * (g.verts[2][1] - g.verts[0][1]) -
                        (g.verts[2][0] - g.verts[0][0]) * (g.verts[1][1] - g.verts[0][1]);
    g.area = 0.5 * twoA;
    for (int i = 0; i < 3; ++i) {
        const auto& pj = g.verts[(i + 1) % 3];
        const auto& pk = g.verts[(i + 2) % 3];
        g.grad_lambda[i] = {(pj[1] - pk[1]) / twoA, (pk[0] - pj[0]) / twoA};
    }
    return g;
}

int local_dof_count(ElementType element) {
    return element == ElementType::P1Scalar ? 3 : 6;
}

void shape_values(ElementType element, const std::array<double, 3>& b, double* out) {
    if (element == ElementType::P1Scalar) {
        out[0] = b[0];
        out[1] = b[1];
        out[2] = b[2];
        return;
    }
    for (int i = 0; i < 3; ++i) out[i] = b[i] * (2.0 * b[i] - 1.0);
    out[3] = 4.0 * b[1] * b[2];
    out[4] = 4.0 * b[2] * b[0];
    out[5] = 4.0 * b[0] * b[1];
}

void shape_gradients(ElementType element, const std::array<double, 3>& b,
                     const ElementGeometry& g, std::array<double, 2>* out) {
    if (element == ElementType::P1Scalar) {
        for (int i = 0; i < 3; ++i) out[i] = g.grad_lambda[i];
        return;
    }
    for (int i = 0; i < 3; ++i) {
        const double c = 4.0 * b[i] - 1.0;
        out[i] = {c * g.grad_lambda[i][0], c * g.grad_lambda[i][1]};
    }
    auto edge = [&](int j, int k) -> std::array<double, 2> {
        return {4.0 * (b[j] * g.grad_lambda[k][0] + b[k] * g.grad_lambda[j][0]),
                4.0 * (b[j] * g.grad_lambda[k][1] + b[k] * g.grad_lambda[j][1])};
    };
    out[3] = edge(1, 2);
    out[4] = edge(2, 0);
    out[5] = edge(0, 1);
}

namespace {

std::pair<int, int> sorted_pair(int a, int b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

bool lex_less(const std::array<double, 2>& a, const std::array<double, 2>& b) {
    if (a[0] != b[0]) return a[0] < b[0];
    return a[1] < b[1];
}

}  // namespace

FiniteElementSpace FiniteElementSpace::build(const Mesh& mesh, ElementType element,
                                             SpaceConstraints constraints) {
    FiniteElementSpace s;
    s.mesh_ = &mesh;
    s.element_ = element;
    s.zero_mean_ = constraints.zero_mean;

    const auto master = node_masters(mesh);

    // Vertex dofs: one per master node, numbered by increasing node id.
    std::vector<int>& vertex_dof = s.vertex_dof_;
    vertex_dof.assign(mesh.nodes.size(), -1);
    int next = 0;
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
        if (master[i] == static_cast<int>(i)) vertex_dof[i] = next++;
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
        if (vertex_dof[i] < 0) vertex_dof[i] = vertex_dof[master[i]];
    const int nvdof = next;

    s.dof_coords_.resize(nvdof);
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
        if (master[i] == static_cast<int>(i)) s.dof_coords_[vertex_dof[i]] = mesh.nodes[i];

    // Edge dofs (P2): keyed by sorted raw node pair; periodic partner rim
    // edges (matched by a lattice translation of their midpoints) share one
    // dof, numbered in key order of the first partner.
    std::map<std::pair<int, int>, int>& edge_dof = s.edge_dof_;
    const bool p2 = element != ElementType::P1Scalar;
    if (p2) {
        std::map<std::pair<int, int>, int> count;
        for (const auto& t : mesh.triangles)
            for (int e = 0; e < 3; ++e)
                ++count[sorted_pair(t[(e + 1) % 3], t[(e + 2) % 3])];
        std::set<std::pair<int, int>> marked;
        for (const auto& be : mesh.boundary_edges) marked.insert(sorted_pair(be.a, be.b));

        // Domain periods from the periodic-map offsets.
        double Lx = 0.0, Ly = 0.0;
        for (const auto& [slave, m] : mesh.periodic_map) {
            Lx = std::max(Lx, std::abs(mesh.nodes[slave][0] - mesh.nodes[m][0]));
            Ly = std::max(Ly, std::abs(mesh.nodes[slave][1] - mesh.nodes[m][1]));
        }
        const double tol = 1e-9 * std::max({1.0, Lx, Ly});
        const auto lattice = [tol](double d, double L) {
            return std::abs(d) < tol || (L > tol && std::abs(std::abs(d) - L) < tol);
        };
        const auto midpoint = [&mesh](const std::pair<int, int>& key) {
            return std::array<double, 2>{
                0.5 * (mesh.nodes[key.first][0] + mesh.nodes[key.second][0]),
                0.5 * (mesh.nodes[key.first][1] + mesh.nodes[key.second][1])};
        };

        // Rim edges grouped by master pair; partners share a dof.
        std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> rim_groups;
        if (!mesh.periodic_map.empty())
            for (const auto& [key, c] : count)
                if (c == 1 && !marked.count(key))
                    rim_groups[sorted_pair(master[key.first], master[key.second])].push_back(key);
        std::map<std::pair<int, int>, std::pair<int, int>> partner;
        for (const auto& [mkey, group] : rim_groups)
            for (std::size_t i = 0; i < group.size(); ++i) {
                if (partner.count(group[i])) continue;
                const auto mi = midpoint(group[i]);
                for (std::size_t j = i + 1; j < group.size(); ++j) {
                    if (partner.count(group[j])) continue;
                    const auto mj = midpoint(group[j]);
                    const double dx = mi[0] - mj[0], dy = mi[1] - mj[1];
                    if (lattice(dx, Lx) && lattice(dy, Ly) &&
                        std::abs(dx) + std::abs(dy) > tol) {
                        partner[group[i]] = group[j];
                        partner[group[j]] = group[i];
                        break;
                    }
                }
            }

        int e = nvdof;
        for (const auto& [key, c] : count) {
            if (edge_dof.count(key)) continue;
            edge_dof[key] = e;
            if (auto it = partner.find(key); it != partner.end()) edge_dof[it->second] = e;
            ++e;
        }
        s.dof_coords_.resize(e);

        // Representative midpoint: lexicographically smallest physical copy.
        std::vector<bool> seen(e - nvdof, false);
        for (const auto& t : mesh.triangles)
            for (int le = 0; le < 3; ++le) {
                const int a = t[(le + 1) % 3], b = t[(le + 2) % 3];
                const int d = edge_dof.at(sorted_pair(a, b));
                const std::array<double, 2> mid = {0.5 * (mesh.nodes[a][0] + mesh.nodes[b][0]),
                                                   0.5 * (mesh.nodes[a][1] + mesh.nodes[b][1])};
                if (!seen[d - nvdof] || lex_less(mid, s.dof_coords_[d])) {
                    s.dof_coords_[d] = mid;
                    seen[d - nvdof] = true;
                }
            }
    }
    s.scalar_dof_count_ = static_cast<int>(s.dof_coords_.size());

    s.cell_dofs_.resize(mesh.triangles.size());
    for (std::size_t c = 0; c < mesh.triangles.size(); ++c) {
        const auto& t = mesh.triangles[c];
        auto& dofs = s.cell_dofs_[c];
        dofs = {vertex_dof[t[0]], vertex_dof[t[1]], vertex_dof[t[2]]};
        if (p2)
            for (int le = 0; le < 3; ++le)
                dofs.push_back(edge_dof.at(sorted_pair(t[(le + 1) % 3], t[(le + 2) % 3])));
    }

    // Mean weights and domain area.
    s.mean_weights_.assign(s.dof_count(), 0.0);
    const auto& rule = triangle_rule(4);
    const int nl = local_dof_count(element);
    std::vector<double> phi(nl);
    for (std::size_t c = 0; c < mesh.triangles.size(); ++c) {
        const auto g = element_geometry(mesh, static_cast<int>(c));
        s.domain_area_ += g.area;
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            shape_values(element, rule.points[q], phi.data());
            const double w = rule.weights[q] * g.area;
            for (int l = 0; l < nl; ++l)
                for (int comp = 0; comp < s.components(); ++comp)
                    s.mean_weights_[s.dof_index(s.cell_dofs_[c][l], comp)] += w * phi[l];
        }
    }

    // Dirichlet dofs from boundary markers.
    if (!constraints.dirichlet.empty()) {
        std::set<Marker> present;
        for (const auto& be : mesh.boundary_edges) present.insert(be.marker);
        std::map<int, std::array<double, 2>> values;  // scalar dof -> value
        for (const auto& spec : constraints.dirichlet) {
            for (Marker m : spec.markers)
                if (!present.count(m))
                    throw std::runtime_error("Dirichlet marker '" + marker_name(m) +
                                             "' not present on the mesh");
            for (const auto& be : mesh.boundary_edges) {
                if (std::find(spec.markers.begin(), spec.markers.end(), be.marker) ==
                    spec.markers.end())
                    continue;
                std::vector<int> dofs = {vertex_dof[be.a], vertex_dof[be.b]};
                if (p2) dofs.push_back(edge_dof.at(sorted_pair(be.a, be.b)));
                for (int d : dofs) {
                    const auto p = s.dof_coords_[d];
                    values[d] = spec.value(p[0], p[1]);
                }
            }
        }
        for (const auto& [d, v] : values)
            for (int comp = 0; comp < s.components(); ++comp)
                s.dirichlet_.emplace_back(s.dof_index(d, comp), v[comp]);
        std::sort(s.dirichlet_.begin(), s.dirichlet_.end());
    }

    return s;
}

std::vector<int> FiniteElementSpace::boundary_scalar_dofs(Marker marker) const {
    std::set<int> dofs;
    for (const auto& be : mesh_->boundary_edges) {
        if (be.marker != marker) continue;
        dofs.insert(vertex_dof_[be.a]);
        dofs.insert(vertex_dof_[be.b]);
        if (element_ != ElementType::P1Scalar)
            dofs.insert(edge_dof_.at(sorted_pair(be.a, be.b)));
    }
    return std::vector<int>(dofs.begin(), dofs.end());
}

Field interpolate(const FiniteElementSpace& space, const ScalarFn& fn) {
    if (space.components() != 1)
        throw std::invalid_argument("scalar interpolation on a vector space");
    Field f(space);
    for (int d = 0; d < space.scalar_dof_count(); ++d) {
        const auto p = space.dof_coord(d);
        f.coeffs[d] = fn(p[0], p[1]);
    }
    if (space.zero_mean()) make_zero_mean(f);
    return f;
}

Field interpolate(const FiniteElementSpace& space, const VectorFn& fn) {
    if (space.components() != 2)
        throw std::invalid_argument("vector interpolation on a scalar space");
    Field f(space);
    for (int d = 0; d < space.scalar_dof_count(); ++d) {
        const auto p = space.dof_coord(d);
        const auto v = fn(p[0], p[1]);
        f.coeffs[space.dof_index(d, 0)] = v[0];
        f.coeffs[space.dof_index(d, 1)] = v[1];
    }
    if (space.zero_mean()) make_zero_mean(f);
    return f;
}

double field_mean(const Field& field, int comp) {
    const auto& s = *field.space;
    double sum = 0.0;
    for (int d = 0; d < s.scalar_dof_count(); ++d) {
        const int gd = s.dof_index(d, comp);
        sum += s.mean_weights()[gd] * field.coeffs[gd];
    }
    return sum / s.domain_area();
}

void make_zero_mean(Field& field) {
    const auto& s = *field.space;
    for (int comp = 0; comp < s.components(); ++comp) {
        const double m = field_mean(field, comp);
        for (int d = 0; d < s.scalar_dof_count(); ++d) field.coeffs[s.dof_index(d, comp)] -= m;
    }
}

namespace {

template <typename PerQuadPoint>
double integrate(const Field& field, int quad_degree, PerQuadPoint&& fn) {
    const auto& s = *field.space;
    const auto& rule = triangle_rule(quad_degree);
    double total = 0.0;
    for (std::size_t c = 0; c < s.mesh().triangles.size(); ++c) {
        const auto g = element_geometry(s.mesh(), static_cast<int>(c));
        for (std::size_t q = 0; q < rule.points.size(); ++q)
            total += rule.weights[q] * g.area * fn(static_cast<int>(c), g, rule.points[q]);
    }
    return total;
}

}  // namespace

double l2_norm(const Field& field) {
    const auto& s = *field.space;
    const int nl = local_dof_count(s.element());
    std::vector<double> phi(nl);
    const double v = integrate(field, 4, [&](int c, const ElementGeometry&,
                                             const std::array<double, 3>& b) {
        shape_values(s.element(), b, phi.data());
        double sq = 0.0;
        for (int comp = 0; comp < s.components(); ++comp) {
            double val = 0.0;
            for (int l = 0; l < nl; ++l)
                val += phi[l] * field.coeffs[s.dof_index(s.cell_dofs(c)[l], comp)];
            sq += val * val;
        }
        return sq;
    });
    return std::sqrt(std::max(0.0, v));
}

double h1_seminorm(const Field& field) {
    const auto& s = *field.space;
    const int nl = local_dof_count(s.element());
    std::vector<std::array<double, 2>> grad(nl);
    const double v = integrate(field, 4, [&](int c, const ElementGeometry& g,
                                             const std::array<double, 3>& b) {
        shape_gradients(s.element(), b, g, grad.data());
        double sq = 0.0;
        for (int comp = 0; comp < s.components(); ++comp) {
            double gx = 0.0, gy = 0.0;
            for (int l = 0; l < nl; ++l) {
                const double cl = field.coeffs[s.dof_index(s.cell_dofs(c)[l], comp)];
                gx += grad[l][0] * cl;
                gy += grad[l][1] * cl;
            }
            sq += gx * gx + gy * gy;
        }
        return sq;
    });
    return std::sqrt(std::max(0.0, v));
}

double l2_inner(const Field& a, const Field& b) {
    if (a.space != b.space) throw std::invalid_argument("l2_inner: space mismatch");
    const auto& s = *a.space;
    const int nl = local_dof_count(s.element());
    std::vector<double> phi(nl);
    return integrate(a, 4, [&](int c, const ElementGeometry&, const std::array<double, 3>& bb) {
        shape_values(s.element(), bb, phi.data());
        double sum = 0.0;
        for (int comp = 0; comp < s.components(); ++comp) {
            double va = 0.0, vb = 0.0;
            for (int l = 0; l < nl; ++l) {
                const int gd = s.dof_index(s.cell_dofs(c)[l], comp);
                va += phi[l] * a.coeffs[gd];
                vb += phi[l] * b.coeffs[gd];
            }
            sum += va * vb;
        }
        return sum;
    });
}

int locate_point(const Mesh& mesh, double x, double y, int hint) {
    const double tol = 1e-10;
    auto inside = [&](int c) {
        const auto g = element_geometry(mesh, c);
        // barycentric coordinates of (x,y)
        const double l0 = g.grad_lambda[0][0] * (x - g.verts[1][0]) +
                          g.grad_lambda[0][1] * (y - g.verts[1][1]);
        const double l1 = g.grad_lambda[1][0] * (x - g.verts[2][0]) +
                          g.grad_lambda[1][1] * (y - g.verts[2][1]);
        const double l2 = 1.0 - l0 - l1;
        return l0 >= -tol && l1 >= -tol && l2 >= -tol;
    };
    if (hint >= 0 && hint < static_cast<int>(mesh.triangles.size()) && inside(hint)) return hint;
    for (int c = 0; c < static_cast<int>(mesh.triangles.size()); ++c)
        if (inside(c)) return c;
    return -1;
}

double evaluate_at(const Field& field, double x, double y, int comp) {
    const auto& s = *field.space;
    const int c = locate_point(s.mesh(), x, y);
    if (c < 0) throw std::runtime_error("evaluate_at: point outside mesh");
    const auto g = element_geometry(s.mesh(), c);
    const double l0 = g.grad_lambda[0][0] * (x - g.verts[1][0]) +
                      g.grad_lambda[0][1] * (y - g.verts[1][1]);
    const double l1 = g.grad_lambda[1][0] * (x - g.verts[2][0]) +
                      g.grad_lambda[1][1] * (y - g.verts[2][1]);
    const std::array<double, 3> b = {l0, l1, 1.0 - l0 - l1};
    const int nl = local_dof_count(s.element());
    std::vector<double> phi(nl);
    shape_values(s.element(), b, phi.data());
    double val = 0.0;
    for (int l = 0; l < nl; ++l)
        val += phi[l] * field.coeffs[s.dof_index(s.cell_dofs(c)[l], comp)];
    return val;
}

}  // namespace vvns
