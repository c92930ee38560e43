/// @file operators.hpp
/// @brief Assembly of the bilinear/trilinear forms of the scheme, plus the
///        discrete Laplacian and Stokes operators.

#ifndef VVNS_OPERATORS_HPP
#define VVNS_OPERATORS_HPP

#include <vector>

#include "vvns/fespace.hpp"
#include "vvns/forcing.hpp"
#include "vvns/sparse.hpp"

namespace vvns {

/// M_ij = (phi_j, phi_i); symmetric positive definite.
SparseMatrix assemble_mass(const FiniteElementSpace& space);

/// K_ij = (grad phi_j, grad phi_i); constants in the kernel before constraints.
SparseMatrix assemble_stiffness(const FiniteElementSpace& space);

/// B_ij = (div phi_j^u, psi_i^p); rows over pressure dofs, cols over velocity.
SparseMatrix assemble_divergence(const FiniteElementSpace& velocity_space,
                                 const FiniteElementSpace& pressure_space);

/// N(w)_ij = scale * (w x phi_j, phi_i) with w x u := [-u2 w, u1 w]^T.
/// Exactly skew-symmetric at the quadrature level.
SparseMatrix assemble_lamb_coupling(const Field& w_field,
                                    const FiniteElementSpace& velocity_space, double scale = 1.0);

/// C(u)_ij = b*(u, phi_j, phi_i) = (u.grad phi_j, phi_i) + 1/2((div u) phi_j, phi_i).
SparseMatrix assemble_convection_skew(const Field& u_field,
                                      const FiniteElementSpace& vorticity_space);

/// (u.grad phi_j, phi_i) without the skew correction (channel Step 2 form).
SparseMatrix assemble_convection_plain(const Field& u_field,
                                       const FiniteElementSpace& vorticity_space);

/// D_ij = (D(phi_j) a, phi_i) with D(u) = (grad u + grad u^T)/2 and a the
/// extrapolated velocity field.
SparseMatrix assemble_deformation_coupling(const Field& a_field,
                                           const FiniteElementSpace& velocity_space);

/// r_i = (curl f(.,t), phi_i) on the vorticity space.
std::vector<double> assemble_curl_rhs(const ForcingSpec& forcing, double t,
                                      const FiniteElementSpace& vorticity_space);

/// r_i = (f(.,t), phi_i) on the velocity space.
std::vector<double> assemble_forcing_rhs(const ForcingSpec& forcing, double t,
                                         const FiniteElementSpace& velocity_space);

/// r_i = integral over wall/plate boundary of (grad p x n) phi_i ds, the
/// natural vorticity wall term with the Step-1 pressure.
std::vector<double> assemble_wall_pressure_rhs(const Field& pressure,
                                               const FiniteElementSpace& vorticity_space);

/// Backflow stabilization at the outflow: O_ij = -1/2 integral over the
/// outflow boundary of min(u.n, 0) phi_j phi_i ds (positive semidefinite).
/// The skew convection's boundary energy term 1/2 (u.n) w^2 injects
/// enstrophy wherever a vortex core re-enters through the do-nothing
/// boundary; adding O makes the boundary convectively absorbing only.
SparseMatrix assemble_outflow_backflow(const Field& u_field,
                                       const FiniteElementSpace& vorticity_space);

/// Delta_h w: solves (Delta_h w, v) = -(grad w, grad v) for all v.
Field discrete_laplacian(const Field& w_field);

/// A_h u via the saddle-point system with an artificial multiplier.
Field stokes_operator(const Field& u_field, const FiniteElementSpace& pressure_space);

}  // namespace vvns

#endif
