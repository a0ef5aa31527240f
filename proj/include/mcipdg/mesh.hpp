#pragma once

#include "mcipdg/quadrature.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace mcipdg {

struct QuadratureOptions {
    int triangle_degree = 4;
    int edge_points = 3;
};

enum class EdgeKind { interior, boundary };

/// Affine triangle x = origin + B * (s,t), with B's columns v1-v0 and v2-v0.
struct Element {
    std::array<int, 3> vertices{};
    std::array<int, 3> edges{};   // edges[i] joins vertices i and (i+1)%3
    double area = 0.0;            // signed; positive for counter-clockwise vertices
    Point2 origin;
    std::array<double, 4> jacobian{};      // row-major B
    std::array<double, 4> inv_jacobian{};  // row-major B^{-1}

    Point2 map(Point2 ref) const;
    Point2 to_reference(Point2 x) const;
};

struct Edge {
    std::array<int, 2> vertices{};
    double length = 0.0;
    Point2 normal;   // unit; points out of `left`
    Point2 tangent;  // unit; normal rotated by +90 degrees
    int left = -1;   // adjacent element with the smaller label
    int right = -1;  // other adjacent element, -1 on the boundary
    EdgeKind kind = EdgeKind::interior;
    int boundary_index = -1;  // position among boundary edges, -1 if interior
};

/// Uniform triangulation of (-0.5, 0.5)^2 with 2n^2 congruent right isosceles triangles.
/// Immutable once built.
class TriMesh {
public:
    TriMesh() = default;

    int subdivisions() const { return n_; }
    double h() const { return 1.0 / n_; }

    const std::vector<Point2>& vertices() const { return vertices_; }
    const std::vector<Element>& elements() const { return elements_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& boundary_edges() const { return boundary_edges_; }
    std::size_t num_interior_edges() const { return edges_.size() - boundary_edges_.size(); }

    const TriangleRule& triangle_rule() const { return tri_rule_; }
    const LineRule& edge_rule() const { return edge_rule_; }
    int volume_points_per_element() const { return static_cast<int>(tri_rule_.weights.size()); }
    int points_per_edge() const { return static_cast<int>(edge_rule_.weights.size()); }

    /// Physical quadrature points / weights of one element (weights sum to |area|).
    std::span<const Point2> volume_points(int element) const;
    std::span<const double> volume_weights(int element) const;

    /// Physical points / weights along one edge, ordered from vertices[0] to vertices[1].
    std::span<const Point2> edge_points(int edge) const;
    std::span<const double> edge_weights(int edge) const;

    /// Element owning a point; points on shared edges or vertices go to the
    /// lowest label among the containing elements. Points outside the closed
    /// square throw std::out_of_range.
    int locate(Point2 x) const;

    friend TriMesh build_uniform_mesh(int n, QuadratureOptions quad);

private:
    int n_ = 0;
    std::vector<Point2> vertices_;
    std::vector<Element> elements_;
    std::vector<Edge> edges_;
    std::vector<int> boundary_edges_;
    TriangleRule tri_rule_;
    LineRule edge_rule_;
    std::vector<Point2> vol_points_;
    std::vector<double> vol_weights_;
    std::vector<Point2> edge_points_;
    std::vector<double> edge_weights_;
};

/// Cells are numbered row-major from the lower-left corner; each cell is cut by
/// its lower-left to upper-right diagonal and contributes its lower triangle
/// (label 2c) before its upper triangle (label 2c+1).
TriMesh build_uniform_mesh(int n, QuadratureOptions quad = {});

}  // namespace mcipdg
