#include "mcipdg/linalg.hpp"

#include <doctest.h>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <chrono>
#include <cmath>
#include <random>

using namespace mcipdg;

namespace {

struct Csc {
    int n = 0;
    std::vector<int> col_ptr, row_idx;
    std::vector<Complex> values;
    CscView<Complex> view() const { return {n, col_ptr, row_idx, values}; }
};

// Dense column-major input; every entry, zeros included, becomes structural.
Csc dense_to_csc(int n, const std::vector<Complex>& dense)
{
    Csc a;
    a.n = n;
    a.col_ptr.push_back(0);
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) {
            a.row_idx.push_back(r);
            a.values.push_back(dense[static_cast<std::size_t>(c) * n + r]);
        }
        a.col_ptr.push_back(static_cast<int>(a.row_idx.size()));
    }
    return a;
}

std::vector<Complex> random_vector(std::size_t n, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    std::vector<Complex> v(n);
    for (auto& c : v) c = Complex(g(rng), g(rng));
    return v;
}

double norm2(const std::vector<Complex>& v)
{
    double s = 0.0;
    for (const auto& c : v) s += std::norm(c);
    return std::sqrt(s);
}

double rel_diff(const std::vector<Complex>& a, const std::vector<Complex>& b)
{
    std::vector<Complex> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return norm2(d) / norm2(b);
}

SystemMatrix assembled(int n, int r, double k)
{
    auto space = std::make_shared<const DGSpace>(std::make_shared<const TriMesh>(build_uniform_mesh(n)), r);
    return assemble_constant(space, k, PenaltySet::defaults(r));
}

}  // namespace

TEST_CASE("identity and a 2x2 complex system")
{
    Csc eye;
    eye.n = 4;
    for (int i = 0; i < 4; ++i) {
        eye.col_ptr.push_back(i);
        eye.row_idx.push_back(i);
        eye.values.push_back(1.0);
    }
    eye.col_ptr.push_back(4);
    const LUFactors f = lu_factorize(eye.view(), SymbolicLU::analyze(eye.view()));
    CHECK(f.nnz_l() == 4);
    CHECK(f.nnz_u() == 4);
    const std::vector<Complex> b{{1, 2}, {3, 4}, {-5, 0}, {0, 6}};
    CHECK(lu_solve(f, b) == b);

    const Csc a = dense_to_csc(2, {Complex(2, 0), Complex(1, 0), Complex(1, 0), Complex(1, 1)});
    const std::vector<Complex> x = lu_solve(lu_factorize(a.view(), SymbolicLU::analyze(a.view())), std::vector<Complex>{1.0, 0.0});
    const Complex det = Complex(2, 0) * Complex(1, 1) - 1.0;
    CHECK(std::abs(x[0] - Complex(1, 1) / det) < 1e-14);
    CHECK(std::abs(x[1] + 1.0 / det) < 1e-14);
}

TEST_CASE("threshold pivoting handles a zero diagonal")
{
    const Csc a = dense_to_csc(3, {0.0, 1.0, 2.0, 1.0, 0.0, 3.0, 2.0, 3.0, 0.0});
    const LUFactors f = lu_factorize(a.view(), SymbolicLU::analyze(a.view(), Ordering::natural));
    const std::vector<Complex> b{1.0, Complex(0, 1), -2.0};
    const auto x = lu_solve(f, b);
    std::vector<Complex> ax(3);
    csc_multiply(a.view(), x, ax);
    CHECK(rel_diff(ax, b) < 1e-15);
    CHECK(factorization_residual(f, a.view(), 4, 1) < 1e-15);
}

TEST_CASE("singular matrices report the pivot step")
{
    const Csc a = dense_to_csc(3, {1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0});
    try {
        lu_factorize(a.view(), SymbolicLU::analyze(a.view(), Ordering::natural));
        FAIL("expected SingularMatrixError");
    } catch (const SingularMatrixError& e) {
        CHECK(e.pivot_index() == 1);
    }
    // Numerically (not structurally) singular: second column is a multiple of the first.
    const Csc b = dense_to_csc(2, {1.0, 2.0, 3.0, 6.0});
    CHECK_THROWS_AS(lu_factorize(b.view(), SymbolicLU::analyze(b.view(), Ordering::natural)), SingularMatrixError);
}

TEST_CASE("assembled systems: residuals, reuse and repeatability")
{
    std::mt19937_64 rng(7);
    const SystemMatrix a = assembled(2, 1, 1.0);
    CHECK(a.size() == 24);
    const LUFactors f = lu_factorize(a);
    CHECK(factorization_residual(f, a.view(), 3, 11) < 1e-14);
    for (int t = 0; t < 5; ++t) {
        const auto b = random_vector(24, rng);
        const auto x = lu_solve(f, b);
        CHECK(rel_diff(a.multiply(x), b) <= 1e-11);
        CHECK(lu_solve(f, b) == x);
    }
    const std::vector<Complex> zero(24);
    for (const auto& c : lu_solve(f, zero)) CHECK(c == Complex{});
    const std::vector<Complex> ones(24, 1.0);
    const auto x1 = lu_solve(f, a.multiply(ones));
    CHECK(rel_diff(x1, ones) <= 1e-11);

    // Eight right-hand sides through one factorization against eight fresh ones.
    const SystemMatrix big = assembled(5, 2, 4.0);
    const SymbolicLU sym = SymbolicLU::analyze(big.view());
    const LUFactors shared = lu_factorize(big.view(), sym);
    for (int t = 0; t < 8; ++t) {
        const auto b = random_vector(big.size(), rng);
        const auto reuse = lu_solve(shared, b);
        const auto fresh = lu_solve(lu_factorize(big.view(), sym), b);
        CHECK(rel_diff(reuse, fresh) <= 1e-12);
    }
    CHECK_THROWS_AS(lu_solve(shared, std::vector<Complex>(3)), std::invalid_argument);
}

TEST_CASE("agrees with Eigen's sparse LU and AMD reduces fill")
{
    const SystemMatrix a = assembled(8, 2, 6.0);
    const auto view = a.view();
    Eigen::SparseMatrix<Complex> m(a.size(), a.size());
    std::vector<Eigen::Triplet<Complex>> trip;
    for (int c = 0; c < a.size(); ++c) {
        for (int p = view.col_ptr[c]; p < view.col_ptr[c + 1]; ++p) trip.emplace_back(view.row_idx[p], c, view.values[p]);
    }
    m.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<Complex>, Eigen::COLAMDOrdering<int>> oracle;
    oracle.compute(m);
    REQUIRE(oracle.info() == Eigen::Success);

    std::mt19937_64 rng(3);
    const auto b = random_vector(a.size(), rng);
    Eigen::VectorXcd eb(a.size());
    for (int i = 0; i < a.size(); ++i) eb(i) = b[i];
    const Eigen::VectorXcd ex = oracle.solve(eb);
    const std::vector<Complex> expected(ex.data(), ex.data() + ex.size());

    const LUFactors amd = lu_factorize(view, SymbolicLU::analyze(view, Ordering::amd));
    const LUFactors nat = lu_factorize(view, SymbolicLU::analyze(view, Ordering::natural));
    CHECK(rel_diff(lu_solve(amd, b), expected) < 1e-10);
    CHECK(rel_diff(lu_solve(nat, b), expected) < 1e-10);
    CHECK(amd.nnz_l() + amd.nnz_u() < nat.nnz_l() + nat.nnz_u());
}

TEST_CASE("concurrent solves on a shared factorization match serial ones")
{
    const SystemMatrix a = assembled(6, 1, 5.0);
    const LUFactors f = lu_factorize(a);
    std::mt19937_64 rng(5);
    std::vector<std::vector<Complex>> rhs, serial, parallel(16);
    for (int t = 0; t < 16; ++t) {
        rhs.push_back(random_vector(a.size(), rng));
        serial.push_back(lu_solve(f, rhs.back()));
    }
#pragma omp parallel for
    for (int t = 0; t < 16; ++t) parallel[t] = lu_solve(f, rhs[t]);
    for (int t = 0; t < 16; ++t) CHECK(parallel[t] == serial[t]);
}

TEST_CASE("a solve costs a small fraction of a factorization at 15000 unknowns")
{
    const SystemMatrix a = assembled(50, 1, 5.0);
    REQUIRE(a.size() >= 15000);
    const SymbolicLU sym = SymbolicLU::analyze(a.view());
    using Clock = std::chrono::steady_clock;
    auto t0 = Clock::now();
    const LUFactors f = lu_factorize(a.view(), sym);
    const double factor = std::chrono::duration<double>(Clock::now() - t0).count();
    std::mt19937_64 rng(1);
    const auto b = random_vector(a.size(), rng);
    std::vector<Complex> x(b.size()), work(b.size());
    const int reps = 10;
    t0 = Clock::now();
    for (int t = 0; t < reps; ++t) lu_solve(f, b, x, work);
    const double solve = std::chrono::duration<double>(Clock::now() - t0).count() / reps;
    MESSAGE("factorize " << factor << " s, solve " << solve << " s");
    CHECK(solve / factor <= 0.05);
}
