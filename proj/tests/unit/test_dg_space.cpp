#include "mcipdg/dg_space.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <set>

using namespace mcipdg;

namespace {

std::shared_ptr<const DGSpace> make_space(int n, int r)
{
    return std::make_shared<const DGSpace>(std::make_shared<const TriMesh>(build_uniform_mesh(n)), r);
}

DGFunction random_function(const std::shared_ptr<const DGSpace>& space, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    DGFunction f(space);
    for (auto& c : f.coeffs()) c = Complex(u(rng), u(rng));
    return f;
}

}  // namespace

TEST_CASE("dof map is a bijection and the basis is nodal with partition of unity")
{
    for (int r : {1, 2, 3}) {
        const auto space = make_space(3, r);
        CHECK(space->local_dim() == (r + 1) * (r + 2) / 2);
        CHECK(space->ndof() == 18u * space->local_dim());
        std::set<std::size_t> seen;
        for (int e = 0; e < space->num_elements(); ++e) {
            for (int i = 0; i < space->local_dim(); ++i) seen.insert(space->dof(e, i));
        }
        CHECK(seen.size() == space->ndof());
        CHECK(*seen.rbegin() == space->ndof() - 1);

        const LagrangeBasis& basis = space->basis();
        std::vector<double> vals(static_cast<std::size_t>(basis.size()));
        for (int i = 0; i < basis.size(); ++i) {
            basis.values(basis.nodes()[i], vals);
            for (int j = 0; j < basis.size(); ++j) CHECK(std::abs(vals[j] - (i == j ? 1.0 : 0.0)) < 1e-13);
        }
        for (int q = 0; q < space->mesh().volume_points_per_element(); ++q) {
            double s = 0.0;
            for (double v : space->volume_values(q)) s += v;
            CHECK(std::abs(s - 1.0) < 1e-13);
        }
    }
    const LagrangeBasis p1(1);
    CHECK(p1.nodes()[0].x == 0.0);
    CHECK(p1.nodes()[1].x == 1.0);
    CHECK(p1.nodes()[2].y == 1.0);
}

TEST_CASE("evaluation of zero, affine and projected functions")
{
    const auto space = make_space(4, 1);
    const std::vector<Point2> refs{{0.1, 0.2}, {1.0 / 3, 1.0 / 3}, {0.7, 0.1}, {0.0, 0.0}};
    const DGFunction zero(space);
    for (int e = 0; e < space->num_elements(); e += 5) {
        for (const Complex& v : evaluate(zero, e, refs)) CHECK(v == Complex{});
    }

    const DGFunction lin = interpolate(space, [](Point2 p) { return Complex(p.x + 2 * p.y, 0.0); });
    for (int e = 0; e < space->num_elements(); ++e) {
        const auto vals = evaluate_with_gradient(lin, e, refs);
        for (std::size_t i = 0; i < refs.size(); ++i) {
            const Point2 x = space->mesh().elements()[e].map(refs[i]);
            CHECK(std::abs(vals[i].value - Complex(x.x + 2 * x.y)) < 1e-14);
            CHECK(std::abs(vals[i].dx - 1.0) < 1e-12);
            CHECK(std::abs(vals[i].dy - 2.0) < 1e-12);
        }
    }
    CHECK(std::abs(evaluate_at(lin, {0.123, -0.321}) - Complex(0.123 - 0.642)) < 1e-14);
    CHECK_THROWS(evaluate(lin, space->num_elements(), refs));
    CHECK_THROWS(evaluate(lin, -1, refs));

    // L2 projection of x^2 against per-element normal equations in the monomial basis {1, x, y}.
    const DGFunction proj = l2_project(space, [](Point2 p) { return Complex(p.x * p.x, 0.0); });
    const TriMesh& mesh = space->mesh();
    for (int e = 0; e < space->num_elements(); ++e) {
        Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
        Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
        const auto pts = mesh.volume_points(e);
        const auto w = mesh.volume_weights(e);
        for (std::size_t q = 0; q < pts.size(); ++q) {
            const Eigen::Vector3d m(1.0, pts[q].x, pts[q].y);
            g += w[q] * m * m.transpose();
            rhs += w[q] * pts[q].x * pts[q].x * m;
        }
        const Eigen::Vector3d c = g.ldlt().solve(rhs);
        const Point2 ctr = mesh.elements()[e].map({1.0 / 3, 1.0 / 3});
        const double expected = c(0) + c(1) * ctr.x + c(2) * ctr.y;
        const std::vector<Point2> centre{{1.0 / 3, 1.0 / 3}};
        CHECK(std::abs(evaluate(proj, e, centre)[0] - expected) < 1e-13);
    }
}

TEST_CASE("broken norms of constants, affine and continuous functions")
{
    const PenaltySet pen = PenaltySet::defaults(1);
    const auto space = make_space(6, 1);
    const BrokenNorms one = broken_norms(interpolate(space, [](Point2) { return Complex(1.0); }), pen);
    CHECK(one.l2 == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(one.boundary_l2 == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(one.seminorm_1h < 1e-12);
    CHECK(one.norm_1h < 1e-10);

    for (int r : {1, 2}) {
        const auto sp = make_space(4, r);
        const PenaltySet pr = PenaltySet::defaults(r);
        const DGFunction smooth = interpolate(sp, [r](Point2 p) {
            return r == 1 ? Complex(3 * p.x - p.y, p.x) : Complex(p.x * p.y + p.x * p.x, -p.y * p.y);
        });
        const BrokenNorms nm = broken_norms(smooth, pr);
        CHECK(nm.norm_1h * nm.norm_1h - nm.seminorm_1h * nm.seminorm_1h <= 1e-10 * nm.norm_1h * nm.norm_1h);
    }
}

TEST_CASE("jump terms of a single-element indicator match the edge integrals")
{
    for (int r : {1, 2}) {
        const auto space = make_space(3, r);
        PenaltySet pen = PenaltySet::defaults(r);
        pen.gamma0 = 7.0;
        // Element 8 is the lower triangle of the centre cell: all three edges interior.
        // Element 0 has one boundary edge and two interior ones.
        for (auto [element, interior_edges] : {std::pair{8, 3}, std::pair{0, 2}}) {
            DGFunction f(space);
            for (int i = 0; i < space->local_dim(); ++i) f.coeffs()[space->dof(element, i)] = 1.0;
            const BrokenNorms nm = broken_norms(f, pen);
            // [f] = +-1 on each interior edge of the element: gamma0 r / h_e * h_e per edge.
            CHECK(nm.norm_1h * nm.norm_1h == doctest::Approx(interior_edges * pen.gamma0 * r).epsilon(1e-12));
            CHECK(nm.seminorm_1h < 1e-12);
            CHECK(nm.l2 * nm.l2 == doctest::Approx(1.0 / 18.0).epsilon(1e-12));
        }
    }
    const auto space = make_space(2, 1);
    PenaltySet bad = PenaltySet::defaults(1);
    bad.gamma0 = 0.0;
    CHECK_THROWS_AS(broken_norms(DGFunction(space), bad), std::invalid_argument);
    bad = PenaltySet::defaults(1);
    bad.beta1 = -1.0;
    CHECK_THROWS_AS(broken_norms(DGFunction(space), bad), std::invalid_argument);
}

TEST_CASE("norm properties on random functions")
{
    const PenaltySet pen = PenaltySet::defaults(2);
    const auto space = make_space(3, 2);
    const NormGram l2(*space, NormGram::Kind::l2, pen);
    const NormGram h1(*space, NormGram::Kind::broken_h1, pen);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const DGFunction f = random_function(space, seed);
        const BrokenNorms nm = broken_norms(f, pen);
        CHECK(nm.norm_1h >= nm.seminorm_1h);
        CHECK(nm.triple_1h >= nm.norm_1h);
        const Complex c(0.3 * seed, -1.7);
        DGFunction g(space);
        for (std::size_t i = 0; i < f.size(); ++i) g.coeffs()[i] = c * f.coeffs()[i];
        const BrokenNorms ng = broken_norms(g, pen);
        CHECK(ng.l2 == doctest::Approx(std::abs(c) * nm.l2).epsilon(1e-12));
        CHECK(ng.norm_1h == doctest::Approx(std::abs(c) * nm.norm_1h).epsilon(1e-12));
        CHECK(ng.boundary_l2 == doctest::Approx(std::abs(c) * nm.boundary_l2).epsilon(1e-12));
        // The Gram-matrix form agrees with direct quadrature.
        CHECK(l2.norm(f.coeffs()) == doctest::Approx(nm.l2).epsilon(1e-12));
        CHECK(h1.norm(f.coeffs()) == doctest::Approx(nm.norm_1h).epsilon(1e-12));
    }
}

TEST_CASE("error norms vanish for an exactly represented field")
{
    const auto space = make_space(4, 1);
    const PenaltySet pen = PenaltySet::defaults(1);
    auto g = [](Point2 p) { return Complex(2 * p.x - p.y, 0.5 * p.y); };
    auto dg = [](Point2) { return std::array<Complex, 2>{Complex(2.0, 0.0), Complex(-1.0, 0.5)}; };
    const BrokenNorms err = broken_error_norms(interpolate(space, g), g, dg, pen);
    CHECK(err.l2 < 1e-14);
    CHECK(err.norm_1h < 1e-12);
    CHECK(err.boundary_l2 < 1e-14);
}

TEST_CASE("coefficient count is validated")
{
    const auto space = make_space(2, 1);
    CHECK_THROWS_AS(DGFunction(space, std::vector<Complex>(5)), std::invalid_argument);
    CHECK(DGFunction(space).size() == space->ndof());
}
