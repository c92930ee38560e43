/// @file quadrature.hpp
/// @brief Symmetric Gauss rules on the reference triangle and segment.

#ifndef VVNS_QUADRATURE_HPP
#define VVNS_QUADRATURE_HPP

#include <array>
#include <vector>

namespace vvns {

/// Barycentric points with weights summing to 1 (multiply by the physical
/// triangle area when integrating).
struct TriangleQuadRule {
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;
    int degree = 0;
};

/// Smallest tabulated rule exact for polynomials of the given total degree.
/// Degrees up to 4 get the 6-point rule; up to 6 the 12-point rule.
const TriangleQuadRule& triangle_rule(int degree);

/// Gauss-Legendre points on [0,1] with weights summing to 1.
struct SegmentQuadRule {
    std::vector<double> points;
    std::vector<double> weights;
};

const SegmentQuadRule& segment_rule(int degree);

}  // namespace vvns

#endif
