#pragma once

#include "mcipdg/mesh.hpp"
#include "mcipdg/penalties.hpp"
#include "mcipdg/sparse.hpp"

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace mcipdg {

/// Nodal Lagrange basis of P_r on the reference triangle, nodes on the
/// barycentric lattice {(i/r, j/r) : i + j <= r} ordered with j outer. For r = 1
/// the nodes are the three reference vertices in element-vertex order.
class LagrangeBasis {
public:
    explicit LagrangeBasis(int degree);

    int degree() const { return r_; }
    int size() const { return static_cast<int>(nodes_.size()); }
    const std::vector<Point2>& nodes() const { return nodes_; }

    void values(Point2 ref, std::span<double> out) const;
    /// Mixed reference derivative d^{ds}/ds d^{dt}/dt of every basis function.
    void derivatives(Point2 ref, int ds, int dt, std::span<double> out) const;
    /// Order-`order` derivative along the reference direction (ms, mt).
    void directional(Point2 ref, double ms, double mt, int order, std::span<double> out) const;

private:
    int r_;
    std::vector<Point2> nodes_;
    std::vector<std::array<int, 2>> monomials_;
    std::vector<double> coeffs_;  // coeffs_[i * size + m]: basis i in the monomial basis
};

/// Traces of one element's basis on one edge, tabulated at the edge quadrature
/// points. Derivatives use the edge's stored normal and tangent (n_e, tau_e).
struct EdgeTrace {
    int element = -1;
    double sign = 1.0;                // +1 on the `left` side, -1 on the `right` side: [v] = sum of sign * v
    std::vector<double> value;        // [q * ldim + i]
    std::vector<double> dtau;         // [q * ldim + i]
    std::vector<std::vector<double>> dn;  // dn[j-1][q * ldim + i], j = 1..r
};

/// Broken polynomial space of degree r over a TriMesh; immutable.
class DGSpace {
public:
    DGSpace(std::shared_ptr<const TriMesh> mesh, int degree);

    const TriMesh& mesh() const { return *mesh_; }
    const std::shared_ptr<const TriMesh>& mesh_ptr() const { return mesh_; }
    int degree() const { return basis_.degree(); }
    int local_dim() const { return basis_.size(); }
    int num_elements() const { return static_cast<int>(mesh_->elements().size()); }
    std::size_t ndof() const { return static_cast<std::size_t>(num_elements()) * local_dim(); }
    std::size_t dof(int element, int local) const
    {
        return static_cast<std::size_t>(element) * local_dim() + static_cast<std::size_t>(local);
    }

    const LagrangeBasis& basis() const { return basis_; }
    const BlockPattern& pattern() const { return *pattern_; }
    const std::shared_ptr<const BlockPattern>& pattern_ptr() const { return pattern_; }

    /// Basis values at volume quadrature point q (identical on every element).
    std::span<const double> volume_values(int q) const;
    /// Physical gradients of the basis at volume quadrature point q of `element`.
    void volume_gradients(int element, int q, std::span<double> gx, std::span<double> gy) const;

    /// side 0 is the edge's `left` element, side 1 the `right` one (interior edges only).
    const EdgeTrace& trace(int edge, int side) const;

private:
    std::shared_ptr<const TriMesh> mesh_;
    LagrangeBasis basis_;
    std::shared_ptr<const BlockPattern> pattern_;
    std::vector<double> vol_values_;     // [q * ldim + i]
    std::vector<double> vol_ref_ds_;
    std::vector<double> vol_ref_dt_;
    std::vector<std::array<EdgeTrace, 2>> traces_;
};

/// Coefficient vector over a DGSpace.
class DGFunction {
public:
    DGFunction() = default;
    explicit DGFunction(std::shared_ptr<const DGSpace> space);
    DGFunction(std::shared_ptr<const DGSpace> space, std::vector<Complex> coeffs);

    const DGSpace& space() const { return *space_; }
    const std::shared_ptr<const DGSpace>& space_ptr() const { return space_; }
    std::span<Complex> coeffs() { return coeffs_; }
    std::span<const Complex> coeffs() const { return coeffs_; }
    std::size_t size() const { return coeffs_.size(); }

private:
    std::shared_ptr<const DGSpace> space_;
    std::vector<Complex> coeffs_;
};

struct PointValue {
    Complex value;
    Complex dx;
    Complex dy;
};

/// Values (and physical gradients) of f at reference points of one element.
std::vector<Complex> evaluate(const DGFunction& f, int element, std::span<const Point2> ref_points);
std::vector<PointValue> evaluate_with_gradient(const DGFunction& f, int element, std::span<const Point2> ref_points);

/// Value of f at a physical point, using TriMesh::locate's ownership rule.
Complex evaluate_at(const DGFunction& f, Point2 x);

/// f at every volume quadrature point, laid out [element * nq + q].
std::vector<Complex> values_at_volume_points(const DGFunction& f);
/// f at every boundary-edge quadrature point, laid out [boundary_index * nqe + q].
std::vector<Complex> values_at_boundary_points(const DGFunction& f);

using ScalarField = std::function<Complex(Point2)>;
using GradientField = std::function<std::array<Complex, 2>(Point2)>;

/// Nodal interpolant.
DGFunction interpolate(std::shared_ptr<const DGSpace> space, const ScalarField& g);
/// Elementwise L2 projection computed with the mesh's volume quadrature.
DGFunction l2_project(std::shared_ptr<const DGSpace> space, const ScalarField& g);

struct BrokenNorms {
    double l2 = 0.0;
    double seminorm_1h = 0.0;
    double norm_1h = 0.0;
    double boundary_l2 = 0.0;
    double triple_1h = 0.0;  // norm_1h plus the weighted normal-derivative average; diagnostic only
};

/// L2(D), broken H1 seminorm, penalty-weighted broken H1 norm and L2(boundary) norm.
BrokenNorms broken_norms(const DGFunction& f, const PenaltySet& penalties);

/// The same norms applied to (exact - f) for a smooth exact field, whose own
/// jumps vanish.
BrokenNorms broken_error_norms(const DGFunction& f, const ScalarField& exact, const GradientField& exact_gradient,
                               const PenaltySet& penalties);

/// Real symmetric matrix G on the space's pattern with u^H G u = a squared norm.
/// Lets repeated norm evaluations cost one sparse product each.
class NormGram {
public:
    enum class Kind { l2, broken_h1 };
    NormGram(const DGSpace& space, Kind kind, const PenaltySet& penalties);
    double norm(std::span<const Complex> u) const;

private:
    std::shared_ptr<const BlockPattern> pattern_;
    std::vector<double> values_;
};

}  // namespace mcipdg
