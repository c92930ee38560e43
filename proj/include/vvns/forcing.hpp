/// @file forcing.hpp
/// @brief Analytic forcing fields with exact scalar curl.

#ifndef VVNS_FORCING_HPP
#define VVNS_FORCING_HPP

#include <array>
#include <functional>

namespace vvns {

/// f(x,y,t) in R^2 together with its scalar curl d(f2)/dx - d(f1)/dy.
/// Evaluation is deterministic and side-effect free.
struct ForcingSpec {
    std::function<std::array<double, 2>(double, double, double)> value;
    std::function<double(double, double, double)> curl;

    static ForcingSpec zero();

    /// f = (sin y, sin x): steady, mean-zero, divergence-free;
    /// curl f = cos x - cos y.
    static ForcingSpec steady_skew();

    /// Steady random trigonometric sum over wave numbers up to max_mode
    /// (constant mode excluded, so the field is mean-zero). Deterministic
    /// for a given seed.
    static ForcingSpec random_fourier(unsigned seed, int max_mode = 2, double amplitude = 1.0);
};

}  // namespace vvns

#endif
