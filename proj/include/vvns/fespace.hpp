/// @file fespace.hpp
/// @brief P1/P2 Lagrange spaces on triangulations: dof layout (with periodic
///        identification), interpolation, norms, and point evaluation.

#ifndef VVNS_FESPACE_HPP
#define VVNS_FESPACE_HPP

#include <array>
#include <functional>
#include <map>
#include <vector>

#include "vvns/mesh.hpp"

namespace vvns {

enum class ElementType { P1Scalar, P2Scalar, P2Vector };

using ScalarFn = std::function<double(double, double)>;
using VectorFn = std::function<std::array<double, 2>(double, double)>;

/// Dirichlet data on a set of boundary markers.
struct DirichletSpec {
    std::vector<Marker> markers;
    VectorFn value;  // component [0] is used for scalar spaces
};

struct SpaceConstraints {
    bool zero_mean = false;
    std::vector<DirichletSpec> dirichlet;
};

/// Affine geometry of one triangle.
struct ElementGeometry {
    std::array<std::array<double, 2>, 3> verts;
    double area;
    std::array<std::array<double, 2>, 3> grad_lambda;

    std::array<double, 2> point(const std::array<double, 3>& bary) const {
        return {bary[0] * verts[0][0] + bary[1] * verts[1][0] + bary[2] * verts[2][0],
                bary[0] * verts[0][1] + bary[1] * verts[1][1] + bary[2] * verts[2][1]};
    }
};

ElementGeometry element_geometry(const Mesh& mesh, int tri);

/// Local scalar basis values/gradients at a barycentric point. Local dof
/// order: vertices 0,1,2 then (for P2) midpoints of edges (1,2),(2,0),(0,1).
int local_dof_count(ElementType element);  // scalar dofs per cell: 3 or 6
void shape_values(ElementType element, const std::array<double, 3>& bary, double* out);
void shape_gradients(ElementType element, const std::array<double, 3>& bary,
                     const ElementGeometry& geom, std::array<double, 2>* out);

class FiniteElementSpace {
public:
    static FiniteElementSpace build(const Mesh& mesh, ElementType element,
                                    SpaceConstraints constraints = {});

    const Mesh& mesh() const { return *mesh_; }
    ElementType element() const { return element_; }
    int components() const { return element_ == ElementType::P2Vector ? 2 : 1; }
    int scalar_dof_count() const { return scalar_dof_count_; }
    int dof_count() const { return components() * scalar_dof_count_; }
    bool zero_mean() const { return zero_mean_; }

    /// Scalar dofs of a cell, in local dof order.
    const std::vector<int>& cell_dofs(int tri) const { return cell_dofs_[tri]; }

    /// Global dof index for (scalar dof, component).
    int dof_index(int scalar_dof, int comp) const { return components() * scalar_dof + comp; }

    std::array<double, 2> dof_coord(int scalar_dof) const { return dof_coords_[scalar_dof]; }

    /// (dof index, prescribed value), sorted by dof index.
    const std::vector<std::pair<int, double>>& dirichlet_dofs() const { return dirichlet_; }

    /// Scalar dofs lying on boundary edges with the given marker, sorted.
    std::vector<int> boundary_scalar_dofs(Marker marker) const;

    /// Scalar dof sitting at a mesh vertex (slave nodes resolve to their
    /// master's dof).
    int vertex_scalar_dof(int node) const { return vertex_dof_[node]; }

    /// Integral of each dof's basis function (per global dof).
    const std::vector<double>& mean_weights() const { return mean_weights_; }

    double domain_area() const { return domain_area_; }

private:
    const Mesh* mesh_ = nullptr;
    ElementType element_ = ElementType::P1Scalar;
    int scalar_dof_count_ = 0;
    bool zero_mean_ = false;
    std::vector<std::vector<int>> cell_dofs_;
    std::vector<std::array<double, 2>> dof_coords_;
    std::vector<std::pair<int, double>> dirichlet_;
    std::vector<double> mean_weights_;
    double domain_area_ = 0.0;
    std::vector<int> vertex_dof_;                  // node -> scalar dof
    std::map<std::pair<int, int>, int> edge_dof_;  // raw node pair -> scalar dof
};

/// Coefficient vector bound to a space.
struct Field {
    const FiniteElementSpace* space = nullptr;
    std::vector<double> coeffs;

    Field() = default;
    explicit Field(const FiniteElementSpace& s) : space(&s), coeffs(s.dof_count(), 0.0) {}
};

Field interpolate(const FiniteElementSpace& space, const ScalarFn& fn);
Field interpolate(const FiniteElementSpace& space, const VectorFn& fn);

double l2_norm(const Field& field);
double h1_seminorm(const Field& field);
double l2_inner(const Field& a, const Field& b);

/// Discrete mean (mass-weighted average) of a scalar field, or of one
/// component of a vector field.
double field_mean(const Field& field, int comp = 0);

/// Subtracts the per-component mean so the field integrates to zero.
void make_zero_mean(Field& field);

double evaluate_at(const Field& field, double x, double y, int comp = 0);

/// Triangle containing the point, or -1. `hint` is tried first.
int locate_point(const Mesh& mesh, double x, double y, int hint = -1);

}  // namespace vvns

#endif
