#pragma once

#include <array>
#include <vector>

namespace mcipdg {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Quadrature rule on the reference triangle {(s,t) : s,t >= 0, s+t <= 1}.
/// Weights sum to the reference area 1/2.
struct TriangleRule {
    int degree = 0;
    std::vector<Point2> points;
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [0,1]; weights sum to 1.
struct LineRule {
    std::vector<double> points;
    std::vector<double> weights;
};

/// Symmetric triangle rules exact for polynomials of total degree 2 (3 points)
/// or 4 (6 points). Any other degree throws std::invalid_argument.
TriangleRule triangle_rule(int degree);

/// Gauss-Legendre rule with 2, 3 or 4 points on [0,1].
LineRule gauss_rule(int npoints);

}  // namespace mcipdg
