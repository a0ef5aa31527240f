#include "mcipdg/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mcipdg {

TriangleRule triangle_rule(int degree)
{
    TriangleRule rule;
    rule.degree = degree;
    if (degree == 2) {
        const double a = 1.0 / 6.0;
        rule.points = {{a, a}, {1.0 - 2.0 * a, a}, {a, 1.0 - 2.0 * a}};
        rule.weights.assign(3, 1.0 / 6.0);
        return rule;
    }
    if (degree == 4) {
        // Dunavant's 6-point rule; the two orbits' weights add up to 1/3.
        const double a = 0.445948490915964886318329253883;
        const double b = 0.091576213509770743459571463402;
        const double wa = 0.223381589678011465944827591049;
        const double wb = 1.0 / 3.0 - wa;
        rule.points = {{a, a}, {1.0 - 2.0 * a, a}, {a, 1.0 - 2.0 * a},
                       {b, b}, {1.0 - 2.0 * b, b}, {b, 1.0 - 2.0 * b}};
        rule.weights = {0.5 * wa, 0.5 * wa, 0.5 * wa, 0.5 * wb, 0.5 * wb, 0.5 * wb};
        return rule;
    }
    throw std::invalid_argument("triangle_rule: unsupported degree " + std::to_string(degree) +
                                " (expected 2 or 4)");
}

LineRule gauss_rule(int npoints)
{
    // Nodes and weights on [-1,1], mapped to [0,1] below.
    std::vector<double> x;
    std::vector<double> w;
    switch (npoints) {
    case 2: {
        const double s = 1.0 / std::sqrt(3.0);
        x = {-s, s};
        w = {1.0, 1.0};
        break;
    }
    case 3: {
        const double s = std::sqrt(3.0 / 5.0);
        x = {-s, 0.0, s};
        w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
        break;
    }
    case 4: {
        const double inner = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
        const double outer = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
        const double w_inner = (18.0 + std::sqrt(30.0)) / 36.0;
        const double w_outer = (18.0 - std::sqrt(30.0)) / 36.0;
        x = {-outer, -inner, inner, outer};
        w = {w_outer, w_inner, w_inner, w_outer};
        break;
    }
    default:
        throw std::invalid_argument("gauss_rule: unsupported point count " + std::to_string(npoints) +
                                    " (expected 2, 3 or 4)");
    }
    LineRule rule;
    for (std::size_t i = 0; i < x.size(); ++i) {
        rule.points.push_back(0.5 * (x[i] + 1.0));
        rule.weights.push_back(0.5 * w[i]);
    }
    return rule;
}

}  // namespace mcipdg
