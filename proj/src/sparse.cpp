#include "mcipdg/sparse.hpp"

#include <algorithm>
#include <stdexcept>

namespace mcipdg {

std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t seed)
{
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < bytes; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

BlockPattern::BlockPattern(const TriMesh& mesh, int local_dim) : ldim_(local_dim)
{
    const int ne = static_cast<int>(mesh.elements().size());
    n_ = ne * ldim_;
    neighbors_.assign(static_cast<std::size_t>(ne), {-1, -1, -1, -1});
    for (int e = 0; e < ne; ++e) {
        std::vector<int> list{e};
        for (int id : mesh.elements()[e].edges) {
            const Edge& edge = mesh.edges()[id];
            if (edge.kind == EdgeKind::interior) list.push_back(edge.left == e ? edge.right : edge.left);
        }
        std::sort(list.begin(), list.end());
        std::copy(list.begin(), list.end(), neighbors_[e].begin());
    }

    col_ptr_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (int e = 0; e < ne; ++e) {
        int count = 0;
        for (int k : neighbors_[e]) count += (k >= 0);
        for (int j = 0; j < ldim_; ++j) {
            const int col = e * ldim_ + j;
            col_ptr_[col + 1] = col_ptr_[col] + count * ldim_;
        }
    }
    row_idx_.resize(static_cast<std::size_t>(col_ptr_.back()));
    for (int e = 0; e < ne; ++e) {
        for (int j = 0; j < ldim_; ++j) {
            int p = col_ptr_[e * ldim_ + j];
            for (int k : neighbors_[e]) {
                if (k < 0) continue;
                for (int i = 0; i < ldim_; ++i) row_idx_[p++] = k * ldim_ + i;
            }
        }
    }
    fingerprint_ = fnv1a(col_ptr_.data(), col_ptr_.size() * sizeof(int));
    fingerprint_ = fnv1a(row_idx_.data(), row_idx_.size() * sizeof(int), fingerprint_);
}

std::size_t BlockPattern::position(int row_element, int i, int col_element, int j) const
{
    const auto& nb = neighbors_[static_cast<std::size_t>(col_element)];
    int rank = 0;
    for (; rank < 4; ++rank) {
        if (nb[rank] == row_element) break;
    }
    if (rank == 4) throw std::out_of_range("BlockPattern::position: elements are not coupled");
    return static_cast<std::size_t>(col_ptr_[col_element * ldim_ + j]) + static_cast<std::size_t>(rank * ldim_ + i);
}

}  // namespace mcipdg
