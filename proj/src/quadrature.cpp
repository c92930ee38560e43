/// @file quadrature.cpp

#include "vvns/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace vvns {

namespace {

TriangleQuadRule make_degree4() {
    // Dunavant degree-4 rule, 6 points, all weights positive.
    TriangleQuadRule r;
    r.degree = 4;
    const double a1 = 0.445948490915965, w1 = 0.223381589678011;
    const double a2 = 0.091576213509771, w2 = 0.109951743655322;
    auto add3 = [&](double a, double w) {
        r.points.push_back({1.0 - 2.0 * a, a, a});
        r.points.push_back({a, 1.0 - 2.0 * a, a});
        r.points.push_back({a, a, 1.0 - 2.0 * a});
        r.weights.insert(r.weights.end(), 3, w);
    };
    add3(a1, w1);
    add3(a2, w2);
    return r;
}

TriangleQuadRule make_degree6() {
    // Dunavant degree-6 rule, 12 points, all weights positive.
    TriangleQuadRule r;
    r.degree = 6;
    auto add3 = [&](double a, double w) {
        r.points.push_back({1.0 - 2.0 * a, a, a});
        r.points.push_back({a, 1.0 - 2.0 * a, a});
        r.points.push_back({a, a, 1.0 - 2.0 * a});
        r.weights.insert(r.weights.end(), 3, w);
    };
    auto add6 = [&](double a, double b, double w) {
        const double c = 1.0 - a - b;
        r.points.push_back({a, b, c});
        r.points.push_back({a, c, b});
        r.points.push_back({b, a, c});
        r.points.push_back({b, c, a});
        r.points.push_back({c, a, b});
        r.points.push_back({c, b, a});
        r.weights.insert(r.weights.end(), 6, w);
    };
    add3(0.249286745170910, 0.116786275726379);
    add3(0.063089014491502, 0.050844906370207);
    add6(0.310352451033785, 0.636502499121399, 0.082851075618374);
    return r;
}

SegmentQuadRule make_segment(int npts) {
    // Gauss-Legendre on [-1,1] mapped to [0,1].
    SegmentQuadRule r;
    std::vector<std::pair<double, double>> xw;
    switch (npts) {
        case 1: xw = {{0.0, 2.0}}; break;
        case 2: {
            const double x = 1.0 / std::sqrt(3.0);
            xw = {{-x, 1.0}, {x, 1.0}};
            break;
        }
        case 3: {
            const double x = std::sqrt(0.6);
            xw = {{-x, 5.0 / 9.0}, {0.0, 8.0 / 9.0}, {x, 5.0 / 9.0}};
            break;
        }
        case 4: {
            const double x1 = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
            const double x2 = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
            const double w1 = (18.0 + std::sqrt(30.0)) / 36.0;
            const double w2 = (18.0 - std::sqrt(30.0)) / 36.0;
            xw = {{-x2, w2}, {-x1, w1}, {x1, w1}, {x2, w2}};
            break;
        }
        default: throw std::invalid_argument("unsupported segment rule size");
    }
    for (auto [x, w] : xw) {
        r.points.push_back(0.5 * (x + 1.0));
        r.weights.push_back(0.5 * w);
    }
    return r;
}

}  // namespace

const TriangleQuadRule& triangle_rule(int degree) {
    static const TriangleQuadRule d4 = make_degree4();
    static const TriangleQuadRule d6 = make_degree6();
    if (degree <= 4) return d4;
    if (degree <= 6) return d6;
    throw std::invalid_argument("no triangle rule for degree " + std::to_string(degree));
}

const SegmentQuadRule& segment_rule(int degree) {
    static const SegmentQuadRule s2 = make_segment(2);
    static const SegmentQuadRule s4 = make_segment(4);
    if (degree <= 3) return s2;
    if (degree <= 7) return s4;
    throw std::invalid_argument("no segment rule for degree " + std::to_string(degree));
}

}  // namespace vvns
