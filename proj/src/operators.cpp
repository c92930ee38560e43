/// @file operators.cpp

#include "vvns/operators.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "vvns/linsolve.hpp"
#include "vvns/quadrature.hpp"

namespace vvns {

namespace {

void check_same_mesh(const FiniteElementSpace& a, const FiniteElementSpace& b) {
    if (&a.mesh() != &b.mesh())
        throw std::invalid_argument("operator assembly: spaces live on different meshes");
}

/// Local scalar basis data at every quadrature point of one cell.
struct LocalBasis {
    int nl;
    std::vector<double> phi;                    // [q*nl + l]
    std::vector<std::array<double, 2>> grad;    // [q*nl + l]
};

LocalBasis tabulate(ElementType element, const ElementGeometry& geom,
                    const TriangleQuadRule& rule) {
    LocalBasis lb;
    lb.nl = local_dof_count(element);
    const int nq = static_cast<int>(rule.points.size());
    lb.phi.resize(nq * lb.nl);
    lb.grad.resize(nq * lb.nl);
    for (int q = 0; q < nq; ++q) {
        shape_values(element, rule.points[q], lb.phi.data() + q * lb.nl);
        shape_gradients(element, rule.points[q], geom, lb.grad.data() + q * lb.nl);
    }
    return lb;
}

/// Value and gradient of a coefficient field at one tabulated point.
struct PointValue {
    std::array<double, 2> value{};  // [0] used for scalar fields
    std::array<std::array<double, 2>, 2> grad{};  // grad[comp] = (d/dx, d/dy)
};

PointValue eval_field(const Field& f, int cell, const LocalBasis& lb, int q) {
    const auto& s = *f.space;
    PointValue pv;
    for (int l = 0; l < lb.nl; ++l) {
        const double ph = lb.phi[q * lb.nl + l];
        const auto& gr = lb.grad[q * lb.nl + l];
        for (int comp = 0; comp < s.components(); ++comp) {
            const double c = f.coeffs[s.dof_index(s.cell_dofs(cell)[l], comp)];
            pv.value[comp] += ph * c;
            pv.grad[comp][0] += gr[0] * c;
            pv.grad[comp][1] += gr[1] * c;
        }
    }
    return pv;
}

}  // namespace

SparseMatrix assemble_mass(const FiniteElementSpace& space) {
    const auto& rule = triangle_rule(4);
    const int nl = local_dof_count(space.element());
    const int nc = space.components();
    std::vector<Triplet> trips;
    for (std::size_t c = 0; c < space.mesh().triangles.size(); ++c) {
        const auto geom = element_geometry(space.mesh(), static_cast<int>(c));
        const auto lb = tabulate(space.element(), geom, rule);
        for (int i = 0; i < nl; ++i)
            for (int j = 0; j < nl; ++j) {
                double v = 0.0;
                for (std::size_t q = 0; q < rule.points.size(); ++q)
                    v += rule.weights[q] * geom.area * lb.phi[q * nl + i] * lb.phi[q * nl + j];
                for (int comp = 0; comp < nc; ++comp)
                    trips.push_back({space.dof_index(space.cell_dofs(c)[i], comp),
                                     space.dof_index(space.cell_dofs(c)[j], comp), v});
            }
    }
    return SparseMatrix::from_triplets(space.dof_count(), space.dof_count(), std::move(trips));
}

SparseMatrix assemble_stiffness(const FiniteElementSpace& space) {
    const auto& rule = triangle_rule(4);
    const int nl = local_dof_count(space.element());
    const int nc = space.components();
    std::vector<Triplet> trips;
    for (std::size_t c = 0; c < space.mesh().triangles.size(); ++c) {
        const auto geom = element_geometry(space.mesh(), static_cast<int>(c));
        const auto lb = tabulate(space.element(), geom, rule);
        for (int i = 0; i < nl; ++i)
            for (int j = 0; j < nl; ++j) {
                double v = 0.0;
                for (std::size_t q = 0; q < rule.points.size(); ++q) {
                    const auto& gi = lb.grad[q * nl + i];
                    const auto& gj = lb.grad[q * nl + j];
                    v += rule.weights[q] * geom.area * (gi[0] * gj[0] + gi[1] * gj[1]);
                }
                for (int comp = 0; comp < nc; ++comp)
                    trips.push_back({space.dof_index(space.cell_dofs(c)[i], comp),
                                     space.dof_index(space.cell_dofs(c)[j], comp), v});
            }
    }
    return SparseMatrix::from_triplets(space.dof_count(), space.dof_count(), std::move(trips));
}

SparseMatrix assemble_divergence(const FiniteElementSpace& velocity_space,
                                 const FiniteElementSpace& pressure_space) {
    check_same_mesh(velocity_space, pressure_space);
    if (velocity_space.components() != 2)
        throw std::invalid_argument("divergence: velocity space must be vector valued");
    const auto& rule = triangle_rule(4);
    const int nlu = local_dof_count(velocity_space.element());
    const int nlp = local_dof_count(pressure_space.element());
    std::vector<Triplet> trips;
    for (std::size_t c = 0; c < velocity_space.mesh().triangles.size(); ++c) {
        const auto geom = element_geometry(velocity_space.mesh(), static_cast<int>(c));
        const auto lbu = tabulate(velocity_space.element(), geom, rule);
        const auto lbp = tabulate(pressure_space.element(), geom, rule);
        for (int i = 0; i < nlp; ++i)
            for (int j = 0; j < nlu; ++j)
                for (int comp = 0; comp < 2; ++comp) {
                    double v = 0.0;
                    for (std::size_t q = 0; q < rule.points.size(); ++q)
                        v += rule.weights[q] * geom.area * lbp.phi[q * nlp + i] *
                             lbu.grad[q * nlu + j][comp];
                    trips.push_back({pressure_space.cell_dofs(c)[i],
                                     velocity_space.dof_index(velocity_space.cell_dofs(c)[j], comp),
                                     v});
                }
    }
    return SparseMatrix::from_triplets(pressure_space.dof_count(), velocity_space.dof_count(),
                                       std::move(trips));
}

SparseMatrix assemble_lamb_coupling(const Field& w_field,
                                    const FiniteElementSpace& velocity_space, double scale) {
    check_same_mesh(*w_field.space, velocity_space);
    const auto& rule = triangle_rule(6);
    const int nl = local_dof_count(velocity_space.element());
    std::vector<Triplet> trips;
    for (std::size_t c = 0; c < velocity_space.mesh().triangles.size(); ++c) {
        const auto geom = element_geometry(velocity_space.mesh(), static_cast<int>(c));
        const auto lb = tabulate(velocity_space.element(), geom, rule);
        const auto lbw = tabulate(w_field.space->element(), geom, rule);
        for (int i = 0; i < nl; ++i)
            for (int j = 0; j < nl; ++j) {
                // (w x phi_j, phi_i) = w (phi_j1 phi_i2 - phi_j2 phi_i1)
                double v = 0.0;
                for (std::size_t q = 0; q < rule.points.size(); ++q) {
                    const double w = eval_field(w_field, static_cast<int>(c), lbw,
                                                static_cast<int>(q)).value[0];
                    v += rule.weights[q] * geom.area * w * lb.phi[q * nl + j] * lb.phi[q * nl + i];
                }
                v *= scale;
                const int sj = velocity_space.cell_dofs(c)[j];
                const int si = velocity_space.cell_dofs(c)[i];
                trips.push_back({velocity_space.dof_index(si, 1), velocity_space.dof_index(sj, 0), v});
                trips.push_back({velocity_space.dof_index(si, 0), velocity_space.dof_index(sj, 1), -v});
            }
    }
    return SparseMatrix::from_triplets(velocity_space.dof_count(), velocity_space.dof_count(),
                                       std::move(trips));
}

namespace {

SparseMatrix assemble_convection_impl(const Field& u_field,
                                      const FiniteElementSpace& vorticity_space,
                                      bool skew_correction) {
    check_same_mesh(*u_field.space, vorticity_space);
    const auto& rule = triangle_rule(6);
    const int nl = local_dof_count(vorticity_space.element());
    std::vector<Triplet> trips;
    for (std::size_t c = 0; c < vorticity_space.mesh().triangles.size(); ++c) {
        const auto geom = element_geometry(vorticity_space.mesh(), static_cast<int>(c));
        const auto lb = tabulate(vorticity_space.element(), geom, rule);
        const auto lbu = tabulate(u_field.space->element(), geom, rule);
        const int nq = static_cast<int>(rule.points.size());
        std::vector<PointValue> uq(nq);
        for (int q = 0; q < nq; ++q) uq[q] = eval_field(u_field, static_cast<int>(c), lbu, q);
        for (int i = 0; i < nl; ++i)
            for (int j = 0; j < nl; ++j) {
                double v = 0.0;
                for (int q = 0; q < nq; ++q) {
                    const auto& gj = lb.grad[q * nl + j];
                    double integrand =
                        (uq[q].value[0] * gj[0] + uq[q].value[1] * gj[1]) * lb.phi[q * nl + i];
                    if (skew_correction) {
                        const double divu = uq[q].grad[0][0] + uq[q].grad[1][1];
                        integrand += 0.5 * divu * lb.phi[q * nl + j] * lb.phi[q * nl + i];
                    }
                    v += rule.weights[q] * geom.area * integrand;
                }
                trips.push_back({vorticity_space.cell_dofs(c)[i], vorticity_space.cell_dofs(c)[j], v});
            }
    }
    return SparseMatrix::from_triplets(vorticity_space.dof_count(), vorticity_space.dof_count(),
                                       std::move(trips));
}

}  // namespace

SparseMatrix assemble_convection_skew(const Field& u_field,
                                      const FiniteElementSpace& vorticity_space) {
    return assemble_convection_impl(u_field, vorticity_space, true);
}

SparseMatrix assemble_convection_plain(const Field& u_field,
                                       const FiniteElementSpace& vorticity_space) {
    return assemble_convection_impl(u_field, vorticity_space, false);
}

SparseMatrix assemble_deformation_coupling(const Field& a_field,
                                           const FiniteElementSpace& velocity_space) {
    check_same_mesh(*a_field.space, velocity_space);
    const auto& rule = triangle_rule(6);
    const int nl = local_dof_count(velocity_space.element());
    std::vector<Triplet> trips;
    for (std::size_t c = 0; c < velocity_space.mesh().triangles.size(); ++c) {
        const auto geom = element_geometry(velocity_space.mesh(), static_cast<int>(c));
        const auto lb = tabulate(velocity_space.element(), geom, rule);
        const auto lba = tabulate(a_field.space->element(), geom, rule);
        const int nq = static_cast<int>(rule.points.size());
        std::vector<std::array<double, 2>> aq(nq);
        for (int q = 0; q < nq; ++q)
            aq[q] = eval_field(a_field, static_cast<int>(c), lba, q).value;
        for (int i = 0; i < nl; ++i)
            for (int j = 0; j < nl; ++j) {
                // D(phi_j) a dotted with phi_i, for the four component pairings.
                double vxx = 0.0, vyx = 0.0, vxy = 0.0, vyy = 0.0;
                for (int q = 0; q < nq; ++q) {
                    const auto& gj = lb.grad[q * nl + j];
                    const double pi = lb.phi[q * nl + i];
                    const double w = rule.weights[q] * geom.area;
                    const double a1 = aq[q][0], a2 = aq[q][1];
                    // phi_j = (psi,0): D = [[gx, gy/2],[gy/2, 0]]
                    vxx += w * pi * (gj[0] * a1 + 0.5 * gj[1] * a2);
                    vyx += w * pi * (0.5 * gj[1] * a1);
                    // phi_j = (0,psi): D = [[0, gx/2],[gx/2, gy]]
                    vxy += w * pi * (0.5 * gj[0] * a2);
                    vyy += w * pi * (0.5 * gj[0] * a1 + gj[1] * a2);
                }
                const int sj = velocity_space.cell_dofs(c)[j];
                const int si = velocity_space.cell_dofs(c)[i];
                trips.push_back({velocity_space.dof_index(si, 0), velocity_space.dof_index(sj, 0), vxx});
                trips.push_back({velocity_space.dof_index(si, 1), velocity_space.dof_index(sj, 0), vyx});
                trips.push_back({velocity_space.dof_index(si, 0), velocity_space.dof_index(sj, 1), vxy});
                trips.push_back({velocity_space.dof_index(si, 1), velocity_space.dof_index(sj, 1), vyy});
            }
    }
    return SparseMatrix::from_triplets(velocity_space.dof_count(), velocity_space.dof_count(),
                                       std::move(trips));
}

std::vector<double> assemble_curl_rhs(const ForcingSpec& forcing, double t,
                                      const FiniteElementSpace& vorticity_space) {
    const auto& rule = triangle_rule(6);
    const int nl = local_dof_count(vorticity_space.element());
    std::vector<double> r(vorticity_space.dof_count(), 0.0);
    for (std::size_t c = 0; c < vorticity_space.mesh().triangles.size(); ++c) {
        const auto geom = element_geometry(vorticity_space.mesh(), static_cast<int>(c));
        const auto lb = tabulate(vorticity_space.element(), geom, rule);
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const auto p = geom.point(rule.points[q]);
            const double cf = forcing.curl(p[0], p[1], t);
            const double w = rule.weights[q] * geom.area;
            for (int l = 0; l < nl; ++l)
                r[vorticity_space.cell_dofs(c)[l]] += w * cf * lb.phi[q * nl + l];
        }
    }
    return r;
}

std::vector<double> assemble_forcing_rhs(const ForcingSpec& forcing, double t,
                                         const FiniteElementSpace& velocity_space) {
    const auto& rule = triangle_rule(6);
    const int nl = local_dof_count(velocity_space.element());
    std::vector<double> r(velocity_space.dof_count(), 0.0);
    for (std::size_t c = 0; c < velocity_space.mesh().triangles.size(); ++c) {
        const auto geom = element_geometry(velocity_space.mesh(), static_cast<int>(c));
        const auto lb = tabulate(velocity_space.element(), geom, rule);
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const auto p = geom.point(rule.points[q]);
            const auto f = forcing.value(p[0], p[1], t);
            const double w = rule.weights[q] * geom.area;
            for (int l = 0; l < nl; ++l)
                for (int comp = 0; comp < 2; ++comp)
                    r[velocity_space.dof_index(velocity_space.cell_dofs(c)[l], comp)] +=
                        w * f[comp] * lb.phi[q * nl + l];
        }
    }
    return r;
}

std::vector<double> assemble_wall_pressure_rhs(const Field& pressure,
                                               const FiniteElementSpace& vorticity_space) {
    check_same_mesh(*pressure.space, vorticity_space);
    const auto& mesh = vorticity_space.mesh();

    // Edge -> adjacent triangle lookup.
    std::map<std::pair<int, int>, int> edge_tri;
    auto key = [](int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); };
    for (std::size_t c = 0; c < mesh.triangles.size(); ++c) {
        const auto& tr = mesh.triangles[c];
        for (int e = 0; e < 3; ++e) edge_tri[key(tr[e], tr[(e + 1) % 3])] = static_cast<int>(c);
    }

    const auto& seg = segment_rule(3);
    const int nl = local_dof_count(vorticity_space.element());
    std::vector<double> r(vorticity_space.dof_count(), 0.0);
    std::vector<double> phi(nl);

    // Pass 1: per-edge flux density (grad p x n) = p_x n_y - p_y n_x,
    // constant along each edge (P1 pressure, straight edges).
    std::vector<int> edges;  // indices into mesh.boundary_edges
    std::vector<double> gpxn;
    for (std::size_t i = 0; i < mesh.boundary_edges.size(); ++i) {
        const auto& be = mesh.boundary_edges[i];
        if (be.marker != Marker::wall && be.marker != Marker::plate) continue;
        const int c = edge_tri.at(key(be.a, be.b));
        const auto geom = element_geometry(mesh, c);

        double px = 0.0, py = 0.0;
        const auto& pd = pressure.space->cell_dofs(c);
        for (int l = 0; l < 3; ++l) {
            px += geom.grad_lambda[l][0] * pressure.coeffs[pd[l]];
            py += geom.grad_lambda[l][1] * pressure.coeffs[pd[l]];
        }

        const auto& pa = mesh.nodes[be.a];
        const auto& pb = mesh.nodes[be.b];
        const double ex = pb[0] - pa[0], ey = pb[1] - pa[1];
        const double len = std::sqrt(ex * ex + ey * ey);
        // outward unit normal: perpendicular pointing away from the triangle centroid
        double nx = ey / len, ny = -ex / len;
        const double cx = (geom.verts[0][0] + geom.verts[1][0] + geom.verts[2][0]) / 3.0;
        const double cy = (geom.verts[0][1] + geom.verts[1][1] + geom.verts[2][1]) / 3.0;
        const double mx = 0.5 * (pa[0] + pb[0]), my = 0.5 * (pa[1] + pb[1]);
        if (nx * (cx - mx) + ny * (cy - my) > 0.0) {
            nx = -nx;
            ny = -ny;
        }
        edges.push_back(static_cast<int>(i));
        gpxn.push_back(px * ny - py * nx);
    }

    // 1-2-1 filter of the flux data along each channel-wall chain. The P1
    // pressure gradient is piecewise constant, so the raw flux carries a
    // grid-scale sawtooth; fed back unfiltered it pumps a spurious wall
    // vorticity mode (pressure -> wall flux -> vorticity -> Lamb term ->
    // pressure) that grows fastest on coarse anisotropic wall cells. The
    // filter is an O(h^2) mollification of data that is itself only O(h)
    // accurate. Plate edges are left untouched: the plate flux drives the
    // physical vortex shedding and its cells are fine.
    {
        std::map<int, std::vector<int>> node_pos;  // wall node -> positions
        for (std::size_t k = 0; k < edges.size(); ++k) {
            const auto& be = mesh.boundary_edges[edges[k]];
            if (be.marker != Marker::wall) continue;
            node_pos[be.a].push_back(static_cast<int>(k));
            node_pos[be.b].push_back(static_cast<int>(k));
        }
        std::vector<double> smoothed = gpxn;
        for (std::size_t k = 0; k < edges.size(); ++k) {
            const auto& be = mesh.boundary_edges[edges[k]];
            if (be.marker != Marker::wall) continue;
            double acc = 2.0 * gpxn[k];
            for (int node : {be.a, be.b}) {
                double nb = gpxn[k];  // chain end: fall back to self
                for (int pos : node_pos.at(node))
                    if (pos != static_cast<int>(k)) nb = gpxn[pos];
                acc += nb;
            }
            smoothed[k] = 0.25 * acc;
        }
        gpxn = std::move(smoothed);
    }

    // Pass 2: integrate the flux against the vorticity trace.
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const auto& be = mesh.boundary_edges[edges[k]];
        const int c = edge_tri.at(key(be.a, be.b));
        const auto geom = element_geometry(mesh, c);
        const auto& pa = mesh.nodes[be.a];
        const auto& pb = mesh.nodes[be.b];
        const double ex = pb[0] - pa[0], ey = pb[1] - pa[1];
        const double len = std::sqrt(ex * ex + ey * ey);

        for (std::size_t q = 0; q < seg.points.size(); ++q) {
            const double s = seg.points[q];
            const double x = pa[0] + s * ex, y = pa[1] + s * ey;
            const double l0 = geom.grad_lambda[0][0] * (x - geom.verts[1][0]) +
                              geom.grad_lambda[0][1] * (y - geom.verts[1][1]);
            const double l1 = geom.grad_lambda[1][0] * (x - geom.verts[2][0]) +
                              geom.grad_lambda[1][1] * (y - geom.verts[2][1]);
            shape_values(vorticity_space.element(), {l0, l1, 1.0 - l0 - l1}, phi.data());
            const double w = seg.weights[q] * len * gpxn[k];
            for (int l = 0; l < nl; ++l) r[vorticity_space.cell_dofs(c)[l]] += w * phi[l];
        }
    }
    return r;
}

SparseMatrix assemble_outflow_backflow(const Field& u_field,
                                       const FiniteElementSpace& vorticity_space) {
    check_same_mesh(*u_field.space, vorticity_space);
    const auto& mesh = vorticity_space.mesh();
    const auto& uspace = *u_field.space;

    std::map<std::pair<int, int>, int> edge_tri;
    auto key = [](int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); };
    for (std::size_t c = 0; c < mesh.triangles.size(); ++c) {
        const auto& tr = mesh.triangles[c];
        for (int e = 0; e < 3; ++e) edge_tri[key(tr[e], tr[(e + 1) % 3])] = static_cast<int>(c);
    }

    const auto& seg = segment_rule(3);
    const int nl = local_dof_count(vorticity_space.element());
    const int nlu = local_dof_count(uspace.element());
    std::vector<double> phi(nl), phiu(nlu);
    std::vector<Triplet> trips;

    for (const auto& be : mesh.boundary_edges) {
        if (be.marker != Marker::outflow) continue;
        const int c = edge_tri.at(key(be.a, be.b));
        const auto geom = element_geometry(mesh, c);

        const auto& pa = mesh.nodes[be.a];
        const auto& pb = mesh.nodes[be.b];
        const double ex = pb[0] - pa[0], ey = pb[1] - pa[1];
        const double len = std::sqrt(ex * ex + ey * ey);
        double nx = ey / len, ny = -ex / len;
        const double cx = (geom.verts[0][0] + geom.verts[1][0] + geom.verts[2][0]) / 3.0;
        const double cy = (geom.verts[0][1] + geom.verts[1][1] + geom.verts[2][1]) / 3.0;
        const double mx = 0.5 * (pa[0] + pb[0]), my = 0.5 * (pa[1] + pb[1]);
        if (nx * (cx - mx) + ny * (cy - my) > 0.0) {
            nx = -nx;
            ny = -ny;
        }

        for (std::size_t q = 0; q < seg.points.size(); ++q) {
            const double s = seg.points[q];
            const double x = pa[0] + s * ex, y = pa[1] + s * ey;
            const double l0 = geom.grad_lambda[0][0] * (x - geom.verts[1][0]) +
                              geom.grad_lambda[0][1] * (y - geom.verts[1][1]);
            const double l1 = geom.grad_lambda[1][0] * (x - geom.verts[2][0]) +
                              geom.grad_lambda[1][1] * (y - geom.verts[2][1]);
            const std::array<double, 3> bary = {l0, l1, 1.0 - l0 - l1};

            shape_values(uspace.element(), bary, phiu.data());
            double ux = 0.0, uy = 0.0;
            const auto& ud = uspace.cell_dofs(c);
            for (int l = 0; l < nlu; ++l) {
                ux += phiu[l] * u_field.coeffs[uspace.dof_index(ud[l], 0)];
                uy += phiu[l] * u_field.coeffs[uspace.dof_index(ud[l], 1)];
            }
            const double un = ux * nx + uy * ny;

            // Structural zeros are kept when u.n >= 0 so the step-2 matrix
            // pattern (and the cached symbolic factorization) is constant.
            shape_values(vorticity_space.element(), bary, phi.data());
            const double w = seg.weights[q] * len * (-0.5 * std::min(un, 0.0));
            const auto& wd = vorticity_space.cell_dofs(c);
            for (int i = 0; i < nl; ++i)
                for (int j = 0; j < nl; ++j) trips.push_back({wd[i], wd[j], w * phi[i] * phi[j]});
        }
    }
    const int nw = vorticity_space.dof_count();
    return SparseMatrix::from_triplets(nw, nw, std::move(trips));
}

Field discrete_laplacian(const Field& w_field) {
    const auto& space = *w_field.space;
    const auto M = assemble_mass(space);
    const auto K = assemble_stiffness(space);
    auto rhs = K.apply(w_field.coeffs);
    for (double& v : rhs) v = -v;
    Field out(space);
    out.coeffs = solve(M, rhs);
    return out;
}

Field stokes_operator(const Field& u_field, const FiniteElementSpace& pressure_space) {
    const auto& vel = *u_field.space;
    const auto M = assemble_mass(vel);
    const auto K = assemble_stiffness(vel);
    const auto B = assemble_divergence(vel, pressure_space);
    const auto rhs_u = K.apply(u_field.coeffs);
    const std::vector<double> rhs_p(pressure_space.dof_count(), 0.0);
    const auto res = solve_saddle(M, B, rhs_u, rhs_p, {}, pressure_space.mean_weights());
    Field out(vel);
    out.coeffs = res.velocity;
    return out;
}

}  // namespace vvns
