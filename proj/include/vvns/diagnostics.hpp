/// @file diagnostics.hpp
/// @brief Monitored quantities: norms, G-norms, stability-bound constants,
///        drag coefficient, Strouhal number, and pressure rescaling.

#ifndef VVNS_DIAGNOSTICS_HPP
#define VVNS_DIAGNOSTICS_HPP

#include <optional>
#include <span>
#include <vector>

#include "vvns/fespace.hpp"
#include "vvns/forcing.hpp"

namespace vvns {

/// One row of the monitored time series.
struct DiagnosticsRecord {
    double t = 0.0;
    double u_l2 = 0.0, u_h1 = 0.0;
    double w_l2 = 0.0, w_h1 = 0.0;
    double g_u = 0.0, g_w = 0.0;  // G quadratic form of the level pair
    double identity_residual = 0.0;
    double div_residual = 0.0;
    double solver_residual_step1 = 0.0, solver_residual_step2 = 0.0;
    std::optional<double> cd;       // channel only
    std::optional<double> probe_v;  // channel only
};

/// Quadratic form chi^T (G (x) M) chi of the level pair (v0, v1) with
/// G = [[1/2, -1], [-1, 5/2]]; equals  1/2 ||v1||^2 + 1/2 ||2 v1 - v0||^2.
double g_norm(const Field& v0, const Field& v1);

/// Eigenvalues (3 -+ 2 sqrt(2))/2 of G, bounding the G form against the
/// plain L2 pair norm.
double g_lambda_min();
double g_lambda_max();

/// Long-time L2 bound constants of the backward Euler scheme.
/// c0_sq/c1_sq are monotone nonincreasing in the step index n; the dual
/// norm of the forcing is replaced by the upper surrogate lambda*||f||.
struct TheoreticalBounds {
    double alpha = 0.0;   // 1 + nu lambda^-2 dt
    double lambda = 1.0;  // Poincare constant
    double u0_sq = 0.0, w0_sq = 0.0;
    double forcing_term_u = 0.0;  // 2 alpha lambda^2/nu^2 * ||f||_{V*}^2 surrogate
    double forcing_term_w = 0.0;  // 2 alpha lambda^2/nu^2 * ||f||^2

    double c0_sq(long n) const;
    double c1_sq(long n) const;
};

TheoreticalBounds be_bounds(double nu, double dt, double lambda, double u0_l2, double w0_l2,
                            double f_l2);

/// ||f(.,t)||_{L2} by quadrature.
double forcing_l2_norm(const Mesh& mesh, const ForcingSpec& forcing, double t);

/// Kinematic pressure p = P - |u|^2/2 (nodal), re-projected to mean zero.
Field bernoulli_to_kinematic(const Field& P, const Field& u);

/// Drag coefficient from the momentum-equation residual r = rhs - A x of
/// the unconstrained Step-1 system, applied to the discrete test field that
/// is (1,0) on the plate and 0 on the rest of the boundary:
/// C_d = 2/(rho L Umax^2) * sum of residual x-entries on plate dofs, with
/// rho = L = Umax = 1.
double drag_from_residual(std::span<const double> momentum_residual,
                          std::span<const int> plate_scalar_dofs, int components);

/// Dominant-frequency Strouhal number of a uniformly sampled probe signal
/// (zero-frequency bin excluded, no windowing). Throws for a constant
/// signal. If resolution is non-null it receives 1/(N dt_sample).
double strouhal(std::span<const double> probe_series, double dt_sample,
                double* resolution = nullptr);

}  // namespace vvns

#endif
