#include "mcipdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

namespace mcipdg {

Point2 Element::map(Point2 ref) const
{
    return {origin.x + jacobian[0] * ref.x + jacobian[1] * ref.y,
            origin.y + jacobian[2] * ref.x + jacobian[3] * ref.y};
}

Point2 Element::to_reference(Point2 x) const
{
    const double dx = x.x - origin.x;
    const double dy = x.y - origin.y;
    return {inv_jacobian[0] * dx + inv_jacobian[1] * dy, inv_jacobian[2] * dx + inv_jacobian[3] * dy};
}

std::span<const Point2> TriMesh::volume_points(int element) const
{
    const std::size_t nq = tri_rule_.weights.size();
    return {vol_points_.data() + static_cast<std::size_t>(element) * nq, nq};
}

std::span<const double> TriMesh::volume_weights(int element) const
{
    const std::size_t nq = tri_rule_.weights.size();
    return {vol_weights_.data() + static_cast<std::size_t>(element) * nq, nq};
}

std::span<const Point2> TriMesh::edge_points(int edge) const
{
    const std::size_t nq = edge_rule_.weights.size();
    return {edge_points_.data() + static_cast<std::size_t>(edge) * nq, nq};
}

std::span<const double> TriMesh::edge_weights(int edge) const
{
    const std::size_t nq = edge_rule_.weights.size();
    return {edge_weights_.data() + static_cast<std::size_t>(edge) * nq, nq};
}

int TriMesh::locate(Point2 x) const
{
    constexpr double tol = 1e-12;
    if (!(x.x >= -0.5 - tol && x.x <= 0.5 + tol && x.y >= -0.5 - tol && x.y <= 0.5 + tol)) {
        throw std::out_of_range("TriMesh::locate: point outside the domain");
    }
    const int ci = static_cast<int>(std::floor((x.x + 0.5) * n_));
    const int cj = static_cast<int>(std::floor((x.y + 0.5) * n_));
    int best = std::numeric_limits<int>::max();
    for (int j = cj - 1; j <= cj + 1; ++j) {
        for (int i = ci - 1; i <= ci + 1; ++i) {
            if (i < 0 || j < 0 || i >= n_ || j >= n_) continue;
            for (int t = 0; t < 2; ++t) {
                const int label = 2 * (j * n_ + i) + t;
                const Point2 ref = elements_[label].to_reference(x);
                if (ref.x >= -tol && ref.y >= -tol && ref.x + ref.y <= 1.0 + tol) {
                    best = std::min(best, label);
                }
            }
        }
    }
    if (best == std::numeric_limits<int>::max()) {
        throw std::out_of_range("TriMesh::locate: no element contains the point");
    }
    return best;
}

TriMesh build_uniform_mesh(int n, QuadratureOptions quad)
{
    if (n < 1) throw std::invalid_argument("build_uniform_mesh: n must be >= 1");

    TriMesh mesh;
    mesh.n_ = n;
    mesh.tri_rule_ = triangle_rule(quad.triangle_degree);
    mesh.edge_rule_ = gauss_rule(quad.edge_points);

    const double h = 1.0 / n;
    mesh.vertices_.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            mesh.vertices_.push_back({-0.5 + i * h, -0.5 + j * h});
        }
    }
    // Exact endpoint so that the right/top boundary sits at 0.5.
    for (auto& v : mesh.vertices_) {
        if (std::abs(v.x - 0.5) < 1e-12) v.x = 0.5;
        if (std::abs(v.y - 0.5) < 1e-12) v.y = 0.5;
    }

    auto vid = [n](int i, int j) { return j * (n + 1) + i; };
    mesh.elements_.reserve(2 * static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int v00 = vid(i, j);
            const int v10 = vid(i + 1, j);
            const int v01 = vid(i, j + 1);
            const int v11 = vid(i + 1, j + 1);
            for (const auto& tri : {std::array<int, 3>{v00, v10, v11}, std::array<int, 3>{v00, v11, v01}}) {
                Element el;
                el.vertices = tri;
                const Point2 a = mesh.vertices_[tri[0]];
                const Point2 b = mesh.vertices_[tri[1]];
                const Point2 c = mesh.vertices_[tri[2]];
                el.origin = a;
                el.jacobian = {b.x - a.x, c.x - a.x, b.y - a.y, c.y - a.y};
                const double det = el.jacobian[0] * el.jacobian[3] - el.jacobian[1] * el.jacobian[2];
                el.area = 0.5 * det;
                el.inv_jacobian = {el.jacobian[3] / det, -el.jacobian[1] / det, -el.jacobian[2] / det,
                                   el.jacobian[0] / det};
                mesh.elements_.push_back(el);
            }
        }
    }

    std::map<std::pair<int, int>, int> edge_ids;
    for (int e = 0; e < static_cast<int>(mesh.elements_.size()); ++e) {
        Element& el = mesh.elements_[e];
        for (int l = 0; l < 3; ++l) {
            const int a = el.vertices[l];
            const int b = el.vertices[(l + 1) % 3];
            const auto key = std::minmax(a, b);
            auto it = edge_ids.find(key);
            if (it == edge_ids.end()) {
                Edge edge;
                edge.vertices = {a, b};
                const double dx = mesh.vertices_[b].x - mesh.vertices_[a].x;
                const double dy = mesh.vertices_[b].y - mesh.vertices_[a].y;
                edge.length = std::hypot(dx, dy);
                edge.normal = {dy / edge.length, -dx / edge.length};
                edge.tangent = {dx / edge.length, dy / edge.length};
                edge.left = e;
                const int id = static_cast<int>(mesh.edges_.size());
                mesh.edges_.push_back(edge);
                edge_ids.emplace(key, id);
                el.edges[l] = id;
            } else {
                mesh.edges_[it->second].right = e;
                el.edges[l] = it->second;
            }
        }
    }
    for (int id = 0; id < static_cast<int>(mesh.edges_.size()); ++id) {
        Edge& edge = mesh.edges_[id];
        if (edge.right < 0) {
            edge.kind = EdgeKind::boundary;
            edge.boundary_index = static_cast<int>(mesh.boundary_edges_.size());
            mesh.boundary_edges_.push_back(id);
        }
    }

    const auto& tr = mesh.tri_rule_;
    mesh.vol_points_.reserve(mesh.elements_.size() * tr.weights.size());
    for (const auto& el : mesh.elements_) {
        for (std::size_t q = 0; q < tr.weights.size(); ++q) {
            mesh.vol_points_.push_back(el.map(tr.points[q]));
            mesh.vol_weights_.push_back(tr.weights[q] * 2.0 * std::abs(el.area));
        }
    }
    const auto& lr = mesh.edge_rule_;
    for (const auto& edge : mesh.edges_) {
        const Point2 a = mesh.vertices_[edge.vertices[0]];
        const Point2 b = mesh.vertices_[edge.vertices[1]];
        for (std::size_t q = 0; q < lr.weights.size(); ++q) {
            const double t = lr.points[q];
            mesh.edge_points_.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
            mesh.edge_weights_.push_back(lr.weights[q] * edge.length);
        }
    }
    return mesh;
}

}  // namespace mcipdg
