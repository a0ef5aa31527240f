#include "mcipdg/mesh.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace mcipdg;

namespace {

// Exact reference-triangle moment of s^a t^b: a! b! / (a + b + 2)!.
double simplex_moment(int a, int b)
{
    return std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 3.0);
}

Point2 centroid(const TriMesh& m, int e)
{
    const auto& v = m.elements()[e].vertices;
    Point2 c;
    for (int i : v) {
        c.x += m.vertices()[i].x / 3.0;
        c.y += m.vertices()[i].y / 3.0;
    }
    return c;
}

Point2 midpoint(const TriMesh& m, const Edge& e)
{
    const Point2 a = m.vertices()[e.vertices[0]], b = m.vertices()[e.vertices[1]];
    return {(a.x + b.x) / 2, (a.y + b.y) / 2};
}

}  // namespace

TEST_CASE("triangle rules integrate monomials exactly up to their degree")
{
    for (int degree : {2, 4}) {
        const TriangleRule rule = triangle_rule(degree);
        double wsum = 0.0;
        for (double w : rule.weights) {
            CHECK(w > 0.0);
            wsum += w;
        }
        CHECK(wsum == doctest::Approx(0.5).epsilon(1e-15));
        for (int a = 0; a <= degree; ++a) {
            for (int b = 0; a + b <= degree; ++b) {
                double q = 0.0;
                for (std::size_t i = 0; i < rule.points.size(); ++i) {
                    q += rule.weights[i] * std::pow(rule.points[i].x, a) * std::pow(rule.points[i].y, b);
                }
                CHECK(std::abs(q - simplex_moment(a, b)) < 1e-15);
            }
        }
    }
    const TriangleRule r4 = triangle_rule(4);
    double q = 0.0;
    for (std::size_t i = 0; i < r4.points.size(); ++i) {
        q += r4.weights[i] * std::pow(r4.points[i].x * r4.points[i].y, 2);
    }
    CHECK(std::abs(q - 1.0 / 180.0) < 1e-16);
    CHECK_THROWS_AS(triangle_rule(3), std::invalid_argument);
    CHECK_THROWS_AS(triangle_rule(6), std::invalid_argument);
}

TEST_CASE("Gauss rules on [0,1]")
{
    for (int np : {2, 3, 4}) {
        const LineRule rule = gauss_rule(np);
        for (int p = 0; p < 2 * np; ++p) {
            double q = 0.0;
            for (std::size_t i = 0; i < rule.points.size(); ++i) q += rule.weights[i] * std::pow(rule.points[i], p);
            CHECK(std::abs(q - 1.0 / (p + 1)) < 1e-15);
        }
    }
    const LineRule g3 = gauss_rule(3);
    double q = 0.0;
    for (std::size_t i = 0; i < 3; ++i) q += g3.weights[i] * std::pow(g3.points[i], 5);
    CHECK(std::abs(q - 1.0 / 6.0) < 1e-15);
    CHECK_THROWS_AS(gauss_rule(1), std::invalid_argument);
    CHECK_THROWS_AS(gauss_rule(5), std::invalid_argument);
}

TEST_CASE("mesh counts and Euler relation")
{
    for (int n : {1, 2, 3, 10, 50}) {
        const TriMesh m = build_uniform_mesh(n);
        const std::size_t nn = static_cast<std::size_t>(n);
        CHECK(m.elements().size() == 2 * nn * nn);
        CHECK(m.vertices().size() == (nn + 1) * (nn + 1));
        CHECK(m.edges().size() == 3 * nn * nn + 2 * nn);
        CHECK(m.boundary_edges().size() == 4 * nn);
        CHECK(m.num_interior_edges() == 3 * nn * nn - 2 * nn);
        const long euler = static_cast<long>(m.vertices().size()) - static_cast<long>(m.edges().size()) +
                           static_cast<long>(m.elements().size());
        CHECK(euler == 1);
    }
    CHECK(build_uniform_mesh(10).elements().size() == 200);
    const TriMesh one = build_uniform_mesh(1);
    CHECK(one.edges().size() == 5);
    CHECK(one.num_interior_edges() == 1);
    CHECK_THROWS_AS(build_uniform_mesh(0), std::invalid_argument);
}

TEST_CASE("mesh geometry invariants")
{
    for (int n : {1, 3, 7}) {
        const TriMesh m = build_uniform_mesh(n);
        double total = 0.0;
        for (int e = 0; e < static_cast<int>(m.elements().size()); ++e) {
            const double a = std::abs(m.elements()[e].area);
            total += a;
            double ws = 0.0;
            for (double w : m.volume_weights(e)) ws += w;
            CHECK(std::abs(ws - a) < 1e-13);
            for (const Point2& p : m.volume_points(e)) CHECK(m.locate(p) == e);
        }
        CHECK(std::abs(total - 1.0) < 1e-13);

        int short_edges = 0, long_edges = 0;
        for (int id = 0; id < static_cast<int>(m.edges().size()); ++id) {
            const Edge& ed = m.edges()[id];
            if (std::abs(ed.length - 1.0 / n) < 1e-14) ++short_edges;
            else if (std::abs(ed.length - std::sqrt(2.0) / n) < 1e-14) ++long_edges;
            CHECK(std::abs(std::hypot(ed.normal.x, ed.normal.y) - 1.0) < 1e-14);
            const Point2 mid = midpoint(m, ed);
            const Point2 cl = centroid(m, ed.left);
            // Normal points out of `left`.
            CHECK((mid.x - cl.x) * ed.normal.x + (mid.y - cl.y) * ed.normal.y > 0.0);
            double ws = 0.0;
            for (double w : m.edge_weights(id)) ws += w;
            CHECK(std::abs(ws - ed.length) < 1e-14);
            if (ed.kind == EdgeKind::interior) {
                CHECK(ed.left < ed.right);
                CHECK(ed.boundary_index == -1);
                // Equivalently, it points into `right`: the negation of right's outward normal.
                const Point2 cr = centroid(m, ed.right);
                CHECK((cr.x - mid.x) * ed.normal.x + (cr.y - mid.y) * ed.normal.y > 0.0);
            } else {
                CHECK(ed.right == -1);
                CHECK(m.boundary_edges()[ed.boundary_index] == id);
                // Outward normal of the square.
                CHECK(std::abs(std::abs(mid.x * ed.normal.x + mid.y * ed.normal.y) - 0.5) < 1e-14);
            }
        }
        CHECK(short_edges == 2 * n * (n + 1));
        CHECK(long_edges == n * n);
    }
}

TEST_CASE("mesh vertex set is mirror symmetric and the build is deterministic")
{
    const TriMesh m = build_uniform_mesh(5);
    for (const Point2& p : m.vertices()) {
        const Point2 r{-p.x, p.y};
        const bool found = std::any_of(m.vertices().begin(), m.vertices().end(), [&](const Point2& q) {
            return std::abs(q.x - r.x) <= 1e-14 && std::abs(q.y - r.y) <= 1e-14;
        });
        CHECK(found);
    }
    const TriMesh again = build_uniform_mesh(5);
    for (std::size_t i = 0; i < m.vertices().size(); ++i) {
        CHECK(m.vertices()[i].x == again.vertices()[i].x);
        CHECK(m.vertices()[i].y == again.vertices()[i].y);
    }
    for (std::size_t i = 0; i < m.elements().size(); ++i) CHECK(m.elements()[i].vertices == again.elements()[i].vertices);
}

TEST_CASE("cells split along the lower-left to upper-right diagonal with row-major labels")
{
    const TriMesh m = build_uniform_mesh(2);
    // Cell 0 is [-0.5,0]^2: lower triangle label 0, upper triangle label 1.
    const Point2 below{-0.1, -0.4}, above{-0.4, -0.1};
    CHECK(m.locate(below) == 0);
    CHECK(m.locate(above) == 1);
    CHECK(m.locate({0.25, -0.4}) == 2);
    CHECK(m.locate({-0.25, 0.4}) == 5);
    // On the diagonal the lower label wins; a shared vertex goes to the lowest label touching it.
    CHECK(m.locate({-0.25, -0.25}) == 0);
    CHECK(m.locate({0.0, 0.0}) == 0);
    CHECK(m.locate({0.5, 0.5}) == 6);
    CHECK_THROWS_AS(m.locate({0.6, 0.0}), std::out_of_range);
    for (const auto& el : m.elements()) CHECK(el.area > 0.0);
}
