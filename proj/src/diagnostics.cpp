/// @file diagnostics.cpp

#include "vvns/diagnostics.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "vvns/quadrature.hpp"

namespace vvns {

double g_norm(const Field& v0, const Field& v1) {
    if (v0.space != v1.space) throw std::invalid_argument("g_norm: space mismatch");
    const double n0 = l2_norm(v0), n1 = l2_norm(v1);
    const double ip = l2_inner(v0, v1);
    return 0.5 * n0 * n0 - 2.0 * ip + 2.5 * n1 * n1;
}

double g_lambda_min() { return (3.0 - 2.0 * std::sqrt(2.0)) / 2.0; }
double g_lambda_max() { return (3.0 + 2.0 * std::sqrt(2.0)) / 2.0; }

double TheoreticalBounds::c0_sq(long n) const {
    return std::pow(1.0 / alpha, static_cast<double>(n)) * u0_sq + forcing_term_u;
}

double TheoreticalBounds::c1_sq(long n) const {
    return std::pow(1.0 / alpha, static_cast<double>(n)) * w0_sq + forcing_term_w;
}

TheoreticalBounds be_bounds(double nu, double dt, double lambda, double u0_l2, double w0_l2,
                            double f_l2) {
    if (!(nu > 0.0)) throw std::invalid_argument("be_bounds: viscosity must be positive");
    TheoreticalBounds b;
    b.lambda = lambda;
    b.alpha = 1.0 + nu * dt / (lambda * lambda);
    b.u0_sq = u0_l2 * u0_l2;
    b.w0_sq = w0_l2 * w0_l2;
    const double common = 2.0 * b.alpha * lambda * lambda / (nu * nu);
    // dual-norm surrogate ||f||_{V*} <= lambda ||f||
    b.forcing_term_u = common * (lambda * f_l2) * (lambda * f_l2);
    b.forcing_term_w = common * f_l2 * f_l2;
    return b;
}

double forcing_l2_norm(const Mesh& mesh, const ForcingSpec& forcing, double t) {
    const auto& rule = triangle_rule(6);
    double total = 0.0;
    for (std::size_t c = 0; c < mesh.triangles.size(); ++c) {
        const auto g = element_geometry(mesh, static_cast<int>(c));
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const auto p = g.point(rule.points[q]);
            const auto f = forcing.value(p[0], p[1], t);
            total += rule.weights[q] * g.area * (f[0] * f[0] + f[1] * f[1]);
        }
    }
    return std::sqrt(total);
}

Field bernoulli_to_kinematic(const Field& P, const Field& u) {
    const auto& ps = *P.space;
    const auto& us = *u.space;
    // P1 pressure vertex dofs and P2 velocity vertex dofs share numbering
    // (both enumerate master nodes in node-id order).
    Field p(ps);
    for (int d = 0; d < ps.scalar_dof_count(); ++d) {
        const double ux = u.coeffs[us.dof_index(d, 0)];
        const double uy = u.coeffs[us.dof_index(d, 1)];
        p.coeffs[d] = P.coeffs[d] - 0.5 * (ux * ux + uy * uy);
    }
    make_zero_mean(p);
    return p;
}

double drag_from_residual(std::span<const double> momentum_residual,
                          std::span<const int> plate_scalar_dofs, int components) {
    double sum = 0.0;
    for (int sd : plate_scalar_dofs) sum += momentum_residual[components * sd];  // x component
    return 2.0 * sum;
}

double strouhal(std::span<const double> probe_series, double dt_sample, double* resolution) {
    const std::size_t n = probe_series.size();
    if (n < 64) throw std::invalid_argument("strouhal: need at least 64 samples");
    if (!(dt_sample > 0.0)) throw std::invalid_argument("strouhal: dt_sample must be positive");

    double mean = 0.0;
    for (double v : probe_series) mean += v;
    mean /= static_cast<double>(n);
    double scale = 0.0;
    for (double v : probe_series) scale = std::max(scale, std::abs(v - mean));
    if (scale < 1e-13) throw std::runtime_error("strouhal: constant signal, no shedding frequency");

    // Plain DFT magnitude over the positive nonzero frequencies.
    std::size_t best_k = 0;
    double best_mag = -1.0;
    for (std::size_t k = 1; k <= n / 2; ++k) {
        std::complex<double> acc(0.0, 0.0);
        const double omega = -2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j)
            acc += (probe_series[j] - mean) *
                   std::complex<double>(std::cos(omega * j), std::sin(omega * j));
        const double mag = std::abs(acc);
        if (mag > best_mag) {
            best_mag = mag;
            best_k = k;
        }
    }
    if (resolution) *resolution = 1.0 / (static_cast<double>(n) * dt_sample);
    return static_cast<double>(best_k) / (static_cast<double>(n) * dt_sample);
}

}  // namespace vvns
