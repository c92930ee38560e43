/// @file forcing.cpp

#include "vvns/forcing.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace vvns {

ForcingSpec ForcingSpec::zero() {
    ForcingSpec f;
    f.value = [](double, double, double) { return std::array<double, 2>{0.0, 0.0}; };
    f.curl = [](double, double, double) { return 0.0; };
    return f;
}

ForcingSpec ForcingSpec::steady_skew() {
    ForcingSpec f;
    f.value = [](double x, double y, double) { return std::array<double, 2>{std::sin(y), std::sin(x)}; };
    f.curl = [](double x, double y, double) { return std::cos(x) - std::cos(y); };
    return f;
}

namespace {
struct Mode {
    int kx, ky;
    double a1, p1;  // f1 amplitude/phase
    double a2, p2;  // f2 amplitude/phase
};
}  // namespace

ForcingSpec ForcingSpec::random_fourier(unsigned seed, int max_mode, double amplitude) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> amp(-amplitude, amplitude);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    std::vector<Mode> modes;
    for (int kx = 0; kx <= max_mode; ++kx)
        for (int ky = -max_mode; ky <= max_mode; ++ky) {
            if (kx == 0 && ky <= 0) continue;  // skip constant and conjugate duplicates
            modes.push_back({kx, ky, amp(rng), phase(rng), amp(rng), phase(rng)});
        }

    ForcingSpec f;
    f.value = [modes](double x, double y, double) {
        double f1 = 0.0, f2 = 0.0;
        for (const auto& m : modes) {
            const double arg = m.kx * x + m.ky * y;
            f1 += m.a1 * std::cos(arg + m.p1);
            f2 += m.a2 * std::cos(arg + m.p2);
        }
        return std::array<double, 2>{f1, f2};
    };
    f.curl = [modes](double x, double y, double) {
        double c = 0.0;
        for (const auto& m : modes) {
            const double arg = m.kx * x + m.ky * y;
            c += -m.a2 * m.kx * std::sin(arg + m.p2) + m.a1 * m.ky * std::sin(arg + m.p1);
        }
        return c;
    };
    return f;
}

}  // namespace vvns
