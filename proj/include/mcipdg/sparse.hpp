#pragma once

#include "mcipdg/mesh.hpp"

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mcipdg {

using Complex = std::complex<double>;

/// Read-only view of a square compressed-sparse-column matrix.
template <class T>
struct CscView {
    int n = 0;
    std::span<const int> col_ptr;
    std::span<const int> row_idx;
    std::span<const T> values;
};

/// Block sparsity of the DG coupling: element K's rows couple to element L's
/// columns iff K == L or K and L share an edge. Columns are stored CSC with
/// row indices sorted; the pattern is structurally symmetric.
class BlockPattern {
public:
    BlockPattern(const TriMesh& mesh, int local_dim);

    int size() const { return n_; }
    int local_dim() const { return ldim_; }
    std::size_t nnz() const { return row_idx_.size(); }
    const std::vector<int>& col_ptr() const { return col_ptr_; }
    const std::vector<int>& row_idx() const { return row_idx_; }

    /// Storage position of entry (row = dof(K, i), col = dof(L, j)); K and L must be coupled.
    std::size_t position(int row_element, int i, int col_element, int j) const;

    /// Hash of the structure, used to tie factorizations to their source pattern.
    std::uint64_t fingerprint() const { return fingerprint_; }

    template <class T>
    CscView<T> view(std::span<const T> values) const
    {
        return {n_, col_ptr_, row_idx_, values};
    }

private:
    int n_ = 0;
    int ldim_ = 0;
    std::vector<int> col_ptr_;
    std::vector<int> row_idx_;
    std::vector<std::array<int, 4>> neighbors_;  // sorted, self included, -1 padded
    std::uint64_t fingerprint_ = 0;
};

/// y = A x for a CSC matrix with scalar type T acting on complex vectors.
template <class T>
void csc_multiply(const CscView<T>& a, std::span<const Complex> x, std::span<Complex> y)
{
    for (auto& v : y) v = 0.0;
    for (int c = 0; c < a.n; ++c) {
        const Complex xc = x[c];
        for (int p = a.col_ptr[c]; p < a.col_ptr[c + 1]; ++p) y[a.row_idx[p]] += a.values[p] * xc;
    }
}

/// 64-bit FNV-1a over raw bytes.
std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace mcipdg
