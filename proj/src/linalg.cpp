#include "mcipdg/linalg.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace mcipdg {

std::uint64_t matrix_fingerprint(const CscView<Complex>& a)
{
    std::uint64_t h = fnv1a(a.col_ptr.data(), a.col_ptr.size_bytes());
    h = fnv1a(a.row_idx.data(), a.row_idx.size_bytes(), h);
    return fnv1a(a.values.data(), a.values.size_bytes(), h);
}

SymbolicLU SymbolicLU::analyze(const CscView<Complex>& a, Ordering ordering)
{
    SymbolicLU s;
    s.fingerprint_ = fnv1a(a.col_ptr.data(), a.col_ptr.size_bytes());
    s.fingerprint_ = fnv1a(a.row_idx.data(), a.row_idx.size_bytes(), s.fingerprint_);
    s.column_order_.resize(static_cast<std::size_t>(a.n));
    if (ordering == Ordering::natural) {
        std::iota(s.column_order_.begin(), s.column_order_.end(), 0);
        return s;
    }
    Eigen::SparseMatrix<double, Eigen::ColMajor, int> pattern(a.n, a.n);
    std::vector<Eigen::Triplet<double, int>> entries;
    entries.reserve(a.row_idx.size());
    for (int c = 0; c < a.n; ++c) {
        for (int p = a.col_ptr[c]; p < a.col_ptr[c + 1]; ++p) entries.emplace_back(a.row_idx[p], c, 1.0);
    }
    pattern.setFromTriplets(entries.begin(), entries.end());
    Eigen::AMDOrdering<int> amd;
    Eigen::AMDOrdering<int>::PermutationType perm;
    amd(pattern, perm);
    // perm.indices()[k] is the k-th node in elimination order.
    for (int k = 0; k < a.n; ++k) s.column_order_[k] = perm.indices()[k];
    return s;
}

namespace {

/// Depth-first search from original row j through the graph of the partially
/// built L (columns indexed by pivot step). Finished nodes are pushed onto
/// xi[--top], leaving xi[top..n) in topological order.
int reach_dfs(int j, const std::vector<int>& lp, const std::vector<int>& li, const std::vector<int>& row_step,
              int top, std::vector<int>& xi, std::vector<int>& nodes, std::vector<int>& cursor,
              std::vector<int>& mark, int stamp)
{
    int head = 0;
    nodes[0] = j;
    while (head >= 0) {
        j = nodes[head];
        const int jstep = row_step[j];
        if (mark[j] != stamp) {
            mark[j] = stamp;
            cursor[head] = jstep < 0 ? 0 : lp[jstep] + 1;  // skip the unit diagonal
        }
        bool done = true;
        const int p2 = jstep < 0 ? 0 : lp[jstep + 1];
        for (int p = cursor[head]; p < p2; ++p) {
            const int i = li[p];
            if (mark[i] == stamp) continue;
            cursor[head] = p + 1;
            nodes[++head] = i;
            done = false;
            break;
        }
        if (done) {
            --head;
            xi[--top] = j;
        }
    }
    return top;
}

}  // namespace

LUFactors lu_factorize(const CscView<Complex>& a, const SymbolicLU& symbolic, const LuOptions& options)
{
    const int n = a.n;
    if (symbolic.size() != n) throw std::invalid_argument("lu_factorize: symbolic analysis has a different size");
    LUFactors f;
    f.n = n;
    f.col_order = symbolic.column_order();
    f.row_step.assign(static_cast<std::size_t>(n), -1);
    f.source_fingerprint = matrix_fingerprint(a);
    f.l_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
    f.u_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
    const std::size_t guess = 4 * a.row_idx.size() + static_cast<std::size_t>(n);
    f.l_idx.reserve(guess);
    f.l_val.reserve(guess);
    f.u_idx.reserve(guess);
    f.u_val.reserve(guess);

    std::vector<Complex> x(static_cast<std::size_t>(n), 0.0);
    std::vector<int> xi(static_cast<std::size_t>(n));
    std::vector<int> nodes(static_cast<std::size_t>(n)), cursor(static_cast<std::size_t>(n));
    std::vector<int> mark(static_cast<std::size_t>(n), -1);
    double max_diag = 0.0;

    for (int k = 0; k < n; ++k) {
        f.l_ptr[k] = static_cast<int>(f.l_idx.size());
        f.u_ptr[k] = static_cast<int>(f.u_idx.size());
        const int col = f.col_order[k];

        // Sparse triangular solve x = L \ A(:, col), restricted to the reach of A(:, col).
        int top = n;
        for (int p = a.col_ptr[col]; p < a.col_ptr[col + 1]; ++p) {
            const int i = a.row_idx[p];
            if (mark[i] != k) top = reach_dfs(i, f.l_ptr, f.l_idx, f.row_step, top, xi, nodes, cursor, mark, k);
        }
        for (int p = top; p < n; ++p) x[xi[p]] = 0.0;
        for (int p = a.col_ptr[col]; p < a.col_ptr[col + 1]; ++p) x[a.row_idx[p]] = a.values[p];
        for (int px = top; px < n; ++px) {
            const int j = xi[px];
            const int jstep = f.row_step[j];
            if (jstep < 0) continue;
            const Complex xj = x[j];
            for (int p = f.l_ptr[jstep] + 1; p < f.l_ptr[jstep + 1]; ++p) x[f.l_idx[p]] -= f.l_val[p] * xj;
        }

        // Choose the pivot among rows not yet eliminated; U gets the rest.
        int ipiv = -1;
        double best = -1.0;
        for (int p = top; p < n; ++p) {
            const int i = xi[p];
            if (f.row_step[i] < 0) {
                const double t = std::abs(x[i]);
                if (t > best) {
                    best = t;
                    ipiv = i;
                }
            } else {
                f.u_idx.push_back(f.row_step[i]);
                f.u_val.push_back(x[i]);
            }
        }
        if (ipiv < 0 || !(best > 0.0)) {
            throw SingularMatrixError("lu_factorize: structurally or numerically zero pivot at step " + std::to_string(k), k);
        }
        if (f.row_step[col] < 0 && std::abs(x[col]) >= options.pivot_threshold * best) ipiv = col;
        const Complex pivot = x[ipiv];
        const double apiv = std::abs(pivot);
        if (!std::isfinite(apiv) || apiv < options.singular_tolerance * max_diag) {
            throw SingularMatrixError("lu_factorize: pivot " + std::to_string(apiv) + " below tolerance at step " +
                                          std::to_string(k),
                                      k);
        }
        max_diag = std::max(max_diag, apiv);
        f.u_idx.push_back(k);
        f.u_val.push_back(pivot);
        f.row_step[ipiv] = k;
        f.l_idx.push_back(ipiv);
        f.l_val.push_back(1.0);
        for (int p = top; p < n; ++p) {
            const int i = xi[p];
            if (f.row_step[i] < 0) {
                f.l_idx.push_back(i);
                f.l_val.push_back(x[i] / pivot);
            }
            x[i] = 0.0;
        }
    }
    f.l_ptr[n] = static_cast<int>(f.l_idx.size());
    f.u_ptr[n] = static_cast<int>(f.u_idx.size());
    for (auto& i : f.l_idx) i = f.row_step[i];
    f.l_idx.shrink_to_fit();
    f.l_val.shrink_to_fit();
    f.u_idx.shrink_to_fit();
    f.u_val.shrink_to_fit();
    return f;
}

LUFactors lu_factorize(const SystemMatrix& a, const LuOptions& options)
{
    const auto view = a.view();
    return lu_factorize(view, SymbolicLU::analyze(view), options);
}

void lu_solve(const LUFactors& f, std::span<const Complex> b, std::span<Complex> x, std::span<Complex> work)
{
    const int n = f.n;
    if (b.size() != static_cast<std::size_t>(n) || x.size() != static_cast<std::size_t>(n) ||
        work.size() < static_cast<std::size_t>(n)) {
        throw std::invalid_argument("lu_solve: dimension mismatch");
    }
    Complex* y = work.data();
    for (int i = 0; i < n; ++i) y[f.row_step[i]] = b[i];
    for (int j = 0; j < n; ++j) {
        const Complex yj = y[j];
        for (int p = f.l_ptr[j] + 1; p < f.l_ptr[j + 1]; ++p) y[f.l_idx[p]] -= f.l_val[p] * yj;
    }
    for (int j = n - 1; j >= 0; --j) {
        const int last = f.u_ptr[j + 1] - 1;
        y[j] /= f.u_val[last];
        const Complex yj = y[j];
        for (int p = f.u_ptr[j]; p < last; ++p) y[f.u_idx[p]] -= f.u_val[p] * yj;
    }
    for (int k = 0; k < n; ++k) x[f.col_order[k]] = y[k];
}

std::vector<Complex> lu_solve(const LUFactors& f, std::span<const Complex> b)
{
    std::vector<Complex> x(static_cast<std::size_t>(f.n)), work(static_cast<std::size_t>(f.n));
    lu_solve(f, b, x, work);
    return x;
}

double factorization_residual(const LUFactors& f, const CscView<Complex>& a, int probes, std::uint64_t seed)
{
    const int n = f.n;
    double norm_a = 0.0;
    for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int p = a.col_ptr[c]; p < a.col_ptr[c + 1]; ++p) s += std::abs(a.values[p]);
        norm_a = std::max(norm_a, s);
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<Complex> v(static_cast<std::size_t>(n)), qv(v.size()), av(v.size()), uv(v.size()), luv(v.size());
    double worst = 0.0;
    for (int t = 0; t < probes; ++t) {
        double vnorm = 0.0;
        for (auto& e : v) {
            e = Complex(normal(rng), normal(rng));
            vnorm += std::norm(e);
        }
        vnorm = std::sqrt(vnorm);
        // P A Q v
        for (int k = 0; k < n; ++k) qv[f.col_order[k]] = v[k];
        csc_multiply(a, qv, av);
        // L U v
        std::fill(uv.begin(), uv.end(), Complex{});
        for (int j = 0; j < n; ++j) {
            for (int p = f.u_ptr[j]; p < f.u_ptr[j + 1]; ++p) uv[f.u_idx[p]] += f.u_val[p] * v[j];
        }
        std::fill(luv.begin(), luv.end(), Complex{});
        for (int j = 0; j < n; ++j) {
            for (int p = f.l_ptr[j]; p < f.l_ptr[j + 1]; ++p) luv[f.l_idx[p]] += f.l_val[p] * uv[j];
        }
        double diff = 0.0;
        for (int i = 0; i < n; ++i) diff += std::norm(luv[f.row_step[i]] - av[i]);
        worst = std::max(worst, std::sqrt(diff) / (norm_a * vnorm));
    }
    return worst;
}

}  // namespace mcipdg
