#pragma once

#include "mcipdg/assembly.hpp"
#include "mcipdg/sparse.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace mcipdg {

enum class Ordering { amd, natural };

/// Fill-reducing column order computed once per sparsity pattern (approximate
/// minimum degree on A + A^T). Reusable across matrices sharing the pattern.
class SymbolicLU {
public:
    static SymbolicLU analyze(const CscView<Complex>& a, Ordering ordering = Ordering::amd);

    int size() const { return static_cast<int>(column_order_.size()); }
    const std::vector<int>& column_order() const { return column_order_; }
    std::uint64_t pattern_fingerprint() const { return fingerprint_; }

private:
    std::vector<int> column_order_;  // step k eliminates column column_order_[k]
    std::uint64_t fingerprint_ = 0;
};

struct LuOptions {
    /// Diagonal pivot kept when |a_diag| >= threshold * max |candidate|.
    double pivot_threshold = 0.1;
    /// Pivots below tolerance * (largest |U_kk| so far) are treated as singular.
    double singular_tolerance = 1e-14;
};

class SingularMatrixError : public std::runtime_error {
public:
    SingularMatrixError(const std::string& what, int pivot) : std::runtime_error(what), pivot_(pivot) {}
    int pivot_index() const { return pivot_; }

private:
    int pivot_;
};

/// P A Q = L U with L unit lower triangular and U upper triangular, both CSC
/// in pivot-step numbering. Immutable; concurrent solves only read it.
struct LUFactors {
    int n = 0;
    std::vector<int> row_step;   // row_step[i]: pivot step that eliminated original row i
    std::vector<int> col_order;  // col_order[k]: original column eliminated at step k
    std::vector<int> l_ptr, l_idx;
    std::vector<Complex> l_val;  // unit diagonal stored first in each column
    std::vector<int> u_ptr, u_idx;
    std::vector<Complex> u_val;  // diagonal stored last in each column
    std::uint64_t source_fingerprint = 0;

    std::size_t nnz_l() const { return l_idx.size(); }
    std::size_t nnz_u() const { return u_idx.size(); }
};

LUFactors lu_factorize(const CscView<Complex>& a, const SymbolicLU& symbolic, const LuOptions& options = {});
LUFactors lu_factorize(const SystemMatrix& a, const LuOptions& options = {});

/// x = A^{-1} b. `work` must hold n entries; b and x may alias.
void lu_solve(const LUFactors& f, std::span<const Complex> b, std::span<Complex> x, std::span<Complex> work);
std::vector<Complex> lu_solve(const LUFactors& f, std::span<const Complex> b);

/// max over random probes v of ||(L U - P A Q) v|| / (||A||_1 ||v||).
double factorization_residual(const LUFactors& f, const CscView<Complex>& a, int probes, std::uint64_t seed);

/// Hash of a matrix's structure and values.
std::uint64_t matrix_fingerprint(const CscView<Complex>& a);

}  // namespace mcipdg
