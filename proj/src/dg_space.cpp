#include "mcipdg/dg_space.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace mcipdg {

namespace {

double falling(int p, int a)
{
    double f = 1.0;
    for (int i = 0; i < a; ++i) f *= (p - i);
    return f;
}

double ipow(double x, int e)
{
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

double binomial(int n, int k)
{
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

}  // namespace

LagrangeBasis::LagrangeBasis(int degree) : r_(degree)
{
    if (degree < 1) throw std::invalid_argument("LagrangeBasis: degree must be >= 1");
    for (int j = 0; j <= r_; ++j) {
        for (int i = 0; i + j <= r_; ++i) nodes_.push_back({static_cast<double>(i) / r_, static_cast<double>(j) / r_});
    }
    for (int total = 0; total <= r_; ++total) {
        for (int b = 0; b <= total; ++b) monomials_.push_back({total - b, b});
    }
    const int m = size();
    Eigen::MatrixXd vander(m, m);
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k < m; ++k) {
            vander(i, k) = ipow(nodes_[i].x, monomials_[k][0]) * ipow(nodes_[i].y, monomials_[k][1]);
        }
    }
    // Column i of V^{-1} holds basis i's monomial coefficients.
    const Eigen::MatrixXd inv = vander.fullPivLu().inverse();
    coeffs_.resize(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k < m; ++k) coeffs_[static_cast<std::size_t>(i) * m + k] = inv(k, i);
    }
}

void LagrangeBasis::values(Point2 ref, std::span<double> out) const
{
    derivatives(ref, 0, 0, out);
}

void LagrangeBasis::derivatives(Point2 ref, int ds, int dt, std::span<double> out) const
{
    const int m = size();
    std::vector<double> mono(static_cast<std::size_t>(m), 0.0);
    for (int k = 0; k < m; ++k) {
        const int p = monomials_[k][0];
        const int q = monomials_[k][1];
        if (p < ds || q < dt) continue;
        mono[k] = falling(p, ds) * falling(q, dt) * ipow(ref.x, p - ds) * ipow(ref.y, q - dt);
    }
    for (int i = 0; i < m; ++i) {
        double v = 0.0;
        for (int k = 0; k < m; ++k) v += coeffs_[static_cast<std::size_t>(i) * m + k] * mono[k];
        out[i] = v;
    }
}

void LagrangeBasis::directional(Point2 ref, double ms, double mt, int order, std::span<double> out) const
{
    const int m = size();
    std::vector<double> part(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) out[i] = 0.0;
    for (int a = 0; a <= order; ++a) {
        const double c = binomial(order, a) * ipow(ms, a) * ipow(mt, order - a);
        if (c == 0.0) continue;
        derivatives(ref, a, order - a, part);
        for (int i = 0; i < m; ++i) out[i] += c * part[i];
    }
}

DGSpace::DGSpace(std::shared_ptr<const TriMesh> mesh, int degree) : mesh_(std::move(mesh)), basis_(degree)
{
    if (!mesh_) throw std::invalid_argument("DGSpace: null mesh");
    pattern_ = std::make_shared<const BlockPattern>(*mesh_, basis_.size());

    const int ldim = local_dim();
    const auto& rule = mesh_->triangle_rule();
    const int nq = static_cast<int>(rule.weights.size());
    vol_values_.resize(static_cast<std::size_t>(nq) * ldim);
    vol_ref_ds_.resize(vol_values_.size());
    vol_ref_dt_.resize(vol_values_.size());
    for (int q = 0; q < nq; ++q) {
        std::span<double> v(vol_values_.data() + q * ldim, static_cast<std::size_t>(ldim));
        basis_.values(rule.points[q], v);
        basis_.derivatives(rule.points[q], 1, 0, {vol_ref_ds_.data() + q * ldim, static_cast<std::size_t>(ldim)});
        basis_.derivatives(rule.points[q], 0, 1, {vol_ref_dt_.data() + q * ldim, static_cast<std::size_t>(ldim)});
    }

    const int nqe = mesh_->points_per_edge();
    const int r = degree;
    traces_.resize(mesh_->edges().size());
    for (std::size_t id = 0; id < mesh_->edges().size(); ++id) {
        const Edge& edge = mesh_->edges()[id];
        const auto pts = mesh_->edge_points(static_cast<int>(id));
        for (int side = 0; side < 2; ++side) {
            const int el_id = side == 0 ? edge.left : edge.right;
            if (el_id < 0) continue;
            const Element& el = mesh_->elements()[el_id];
            EdgeTrace& tr = traces_[id][side];
            tr.element = el_id;
            tr.sign = side == 0 ? 1.0 : -1.0;
            tr.value.resize(static_cast<std::size_t>(nqe) * ldim);
            tr.dtau.resize(tr.value.size());
            tr.dn.assign(static_cast<std::size_t>(r), std::vector<double>(tr.value.size()));
            const auto& bi = el.inv_jacobian;
            const double ns = bi[0] * edge.normal.x + bi[1] * edge.normal.y;
            const double nt = bi[2] * edge.normal.x + bi[3] * edge.normal.y;
            const double ts = bi[0] * edge.tangent.x + bi[1] * edge.tangent.y;
            const double tt = bi[2] * edge.tangent.x + bi[3] * edge.tangent.y;
            for (int q = 0; q < nqe; ++q) {
                const Point2 ref = el.to_reference(pts[q]);
                const std::size_t off = static_cast<std::size_t>(q) * ldim;
                basis_.values(ref, {tr.value.data() + off, static_cast<std::size_t>(ldim)});
                basis_.directional(ref, ts, tt, 1, {tr.dtau.data() + off, static_cast<std::size_t>(ldim)});
                for (int j = 1; j <= r; ++j) {
                    basis_.directional(ref, ns, nt, j, {tr.dn[j - 1].data() + off, static_cast<std::size_t>(ldim)});
                }
            }
        }
    }
}

std::span<const double> DGSpace::volume_values(int q) const
{
    const auto ldim = static_cast<std::size_t>(local_dim());
    return {vol_values_.data() + static_cast<std::size_t>(q) * ldim, ldim};
}

void DGSpace::volume_gradients(int element, int q, std::span<double> gx, std::span<double> gy) const
{
    const auto& bi = mesh_->elements()[element].inv_jacobian;
    const int ldim = local_dim();
    const double* ds = vol_ref_ds_.data() + q * ldim;
    const double* dt = vol_ref_dt_.data() + q * ldim;
    for (int i = 0; i < ldim; ++i) {
        gx[i] = ds[i] * bi[0] + dt[i] * bi[2];
        gy[i] = ds[i] * bi[1] + dt[i] * bi[3];
    }
}

const EdgeTrace& DGSpace::trace(int edge, int side) const
{
    const EdgeTrace& tr = traces_.at(static_cast<std::size_t>(edge)).at(static_cast<std::size_t>(side));
    if (tr.element < 0) throw std::out_of_range("DGSpace::trace: boundary edge has no right side");
    return tr;
}

DGFunction::DGFunction(std::shared_ptr<const DGSpace> space) : space_(std::move(space))
{
    if (!space_) throw std::invalid_argument("DGFunction: null space");
    coeffs_.assign(space_->ndof(), Complex{});
}

DGFunction::DGFunction(std::shared_ptr<const DGSpace> space, std::vector<Complex> coeffs)
    : space_(std::move(space)), coeffs_(std::move(coeffs))
{
    if (!space_) throw std::invalid_argument("DGFunction: null space");
    if (coeffs_.size() != space_->ndof()) {
        throw std::invalid_argument("DGFunction: coefficient count " + std::to_string(coeffs_.size()) +
                                    " does not match ndof " + std::to_string(space_->ndof()));
    }
}

namespace {

void check_element(const DGSpace& space, int element)
{
    if (element < 0 || element >= space.num_elements()) {
        throw std::out_of_range("element label " + std::to_string(element) + " out of range");
    }
}

}  // namespace

std::vector<Complex> evaluate(const DGFunction& f, int element, std::span<const Point2> ref_points)
{
    const DGSpace& space = f.space();
    check_element(space, element);
    const int ldim = space.local_dim();
    std::vector<double> phi(static_cast<std::size_t>(ldim));
    std::vector<Complex> out;
    out.reserve(ref_points.size());
    const auto c = f.coeffs().subspan(space.dof(element, 0), static_cast<std::size_t>(ldim));
    for (const Point2& p : ref_points) {
        space.basis().values(p, phi);
        Complex v{};
        for (int i = 0; i < ldim; ++i) v += c[i] * phi[i];
        out.push_back(v);
    }
    return out;
}

std::vector<PointValue> evaluate_with_gradient(const DGFunction& f, int element, std::span<const Point2> ref_points)
{
    const DGSpace& space = f.space();
    check_element(space, element);
    const int ldim = space.local_dim();
    const auto& bi = space.mesh().elements()[element].inv_jacobian;
    std::vector<double> phi(static_cast<std::size_t>(ldim)), ds(phi.size()), dt(phi.size());
    const auto c = f.coeffs().subspan(space.dof(element, 0), static_cast<std::size_t>(ldim));
    std::vector<PointValue> out;
    out.reserve(ref_points.size());
    for (const Point2& p : ref_points) {
        space.basis().values(p, phi);
        space.basis().derivatives(p, 1, 0, ds);
        space.basis().derivatives(p, 0, 1, dt);
        PointValue pv{};
        for (int i = 0; i < ldim; ++i) {
            pv.value += c[i] * phi[i];
            pv.dx += c[i] * (ds[i] * bi[0] + dt[i] * bi[2]);
            pv.dy += c[i] * (ds[i] * bi[1] + dt[i] * bi[3]);
        }
        out.push_back(pv);
    }
    return out;
}

Complex evaluate_at(const DGFunction& f, Point2 x)
{
    const int element = f.space().mesh().locate(x);
    const Point2 ref = f.space().mesh().elements()[element].to_reference(x);
    return evaluate(f, element, std::span<const Point2>(&ref, 1)).front();
}

std::vector<Complex> values_at_volume_points(const DGFunction& f)
{
    const DGSpace& space = f.space();
    const int ne = space.num_elements();
    const int nq = space.mesh().volume_points_per_element();
    const int ldim = space.local_dim();
    std::vector<Complex> out(static_cast<std::size_t>(ne) * nq);
    const auto c = f.coeffs();
#pragma omp parallel for schedule(static)
    for (int e = 0; e < ne; ++e) {
        const Complex* ce = c.data() + space.dof(e, 0);
        for (int q = 0; q < nq; ++q) {
            const auto phi = space.volume_values(q);
            Complex v{};
            for (int i = 0; i < ldim; ++i) v += ce[i] * phi[i];
            out[static_cast<std::size_t>(e) * nq + q] = v;
        }
    }
    return out;
}

std::vector<Complex> values_at_boundary_points(const DGFunction& f)
{
    const DGSpace& space = f.space();
    const TriMesh& mesh = space.mesh();
    const int nqe = mesh.points_per_edge();
    const int ldim = space.local_dim();
    const auto& bedges = mesh.boundary_edges();
    std::vector<Complex> out(bedges.size() * static_cast<std::size_t>(nqe));
    const auto c = f.coeffs();
    for (std::size_t b = 0; b < bedges.size(); ++b) {
        const EdgeTrace& tr = space.trace(bedges[b], 0);
        const Complex* ce = c.data() + space.dof(tr.element, 0);
        for (int q = 0; q < nqe; ++q) {
            Complex v{};
            for (int i = 0; i < ldim; ++i) v += ce[i] * tr.value[static_cast<std::size_t>(q) * ldim + i];
            out[b * nqe + q] = v;
        }
    }
    return out;
}

DGFunction interpolate(std::shared_ptr<const DGSpace> space, const ScalarField& g)
{
    DGFunction f(space);
    const auto& nodes = space->basis().nodes();
    for (int e = 0; e < space->num_elements(); ++e) {
        const Element& el = space->mesh().elements()[e];
        for (int i = 0; i < space->local_dim(); ++i) f.coeffs()[space->dof(e, i)] = g(el.map(nodes[i]));
    }
    return f;
}

DGFunction l2_project(std::shared_ptr<const DGSpace> space, const ScalarField& g)
{
    DGFunction f(space);
    const int ldim = space->local_dim();
    const int nq = space->mesh().volume_points_per_element();
    for (int e = 0; e < space->num_elements(); ++e) {
        const auto pts = space->mesh().volume_points(e);
        const auto w = space->mesh().volume_weights(e);
        Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(ldim, ldim);
        Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(ldim);
        for (int q = 0; q < nq; ++q) {
            const auto phi = space->volume_values(q);
            const Complex gv = g(pts[q]);
            for (int i = 0; i < ldim; ++i) {
                rhs(i) += w[q] * gv * phi[i];
                for (int j = 0; j < ldim; ++j) mass(i, j) += w[q] * phi[i] * phi[j];
            }
        }
        const Eigen::VectorXcd x = mass.cast<Complex>().ldlt().solve(rhs);
        for (int i = 0; i < ldim; ++i) f.coeffs()[space->dof(e, i)] = x(i);
    }
    return f;
}

namespace {

BrokenNorms norms_impl(const DGFunction& f, const ScalarField* exact, const GradientField* exact_grad,
                       const PenaltySet& penalties)
{
    const DGSpace& space = f.space();
    const TriMesh& mesh = space.mesh();
    const int r = space.degree();
    penalties.validate(r);
    const int ldim = space.local_dim();
    const int nq = mesh.volume_points_per_element();
    const int nqe = mesh.points_per_edge();
    const auto c = f.coeffs();
    std::vector<double> gx(static_cast<std::size_t>(ldim)), gy(gx.size());

    double l2 = 0.0, semi = 0.0;
    for (int e = 0; e < space.num_elements(); ++e) {
        const auto pts = mesh.volume_points(e);
        const auto w = mesh.volume_weights(e);
        const Complex* ce = c.data() + space.dof(e, 0);
        for (int q = 0; q < nq; ++q) {
            const auto phi = space.volume_values(q);
            space.volume_gradients(e, q, gx, gy);
            Complex v{}, vx{}, vy{};
            for (int i = 0; i < ldim; ++i) {
                v += ce[i] * phi[i];
                vx += ce[i] * gx[i];
                vy += ce[i] * gy[i];
            }
            if (exact) {
                v = (*exact)(pts[q]) - v;
                const auto g = (*exact_grad)(pts[q]);
                vx = g[0] - vx;
                vy = g[1] - vy;
            }
            l2 += w[q] * std::norm(v);
            semi += w[q] * (std::norm(vx) + std::norm(vy));
        }
    }

    double jumps = 0.0, averages = 0.0, boundary = 0.0;
    for (int id = 0; id < static_cast<int>(mesh.edges().size()); ++id) {
        const Edge& edge = mesh.edges()[id];
        const auto w = mesh.edge_weights(id);
        const auto pts = mesh.edge_points(id);
        if (edge.kind == EdgeKind::boundary) {
            const EdgeTrace& tr = space.trace(id, 0);
            const Complex* ce = c.data() + space.dof(tr.element, 0);
            for (int q = 0; q < nqe; ++q) {
                Complex v{};
                for (int i = 0; i < ldim; ++i) v += ce[i] * tr.value[static_cast<std::size_t>(q) * ldim + i];
                if (exact) v = (*exact)(pts[q]) - v;
                boundary += w[q] * std::norm(v);
            }
            continue;
        }
        const double he = edge.length;
        const double w0 = penalties.gamma0 * r / he;
        const double wt = penalties.beta1 * r / he;
        for (int q = 0; q < nqe; ++q) {
            Complex jump{}, jump_t{}, avg_n{};
            std::vector<Complex> jump_n(static_cast<std::size_t>(r));
            for (int side = 0; side < 2; ++side) {
                const EdgeTrace& tr = space.trace(id, side);
                const Complex* ce = c.data() + space.dof(tr.element, 0);
                const std::size_t off = static_cast<std::size_t>(q) * ldim;
                for (int i = 0; i < ldim; ++i) {
                    jump += tr.sign * ce[i] * tr.value[off + i];
                    jump_t += tr.sign * ce[i] * tr.dtau[off + i];
                    avg_n += 0.5 * ce[i] * tr.dn[0][off + i];
                    for (int j = 1; j <= r; ++j) jump_n[j - 1] += tr.sign * ce[i] * tr.dn[j - 1][off + i];
                }
            }
            if (exact) {
                const auto g = (*exact_grad)(pts[q]);
                avg_n = g[0] * edge.normal.x + g[1] * edge.normal.y - avg_n;
            }
            double term = w0 * std::norm(jump) + wt * std::norm(jump_t);
            for (int j = 1; j <= r; ++j) {
                term += penalties.gamma_j(j) * std::pow(he / r, 2 * j - 1) * std::norm(jump_n[j - 1]);
            }
            jumps += w[q] * term;
            averages += w[q] * he / (penalties.gamma0 * r) * std::norm(avg_n);
        }
    }

    BrokenNorms out;
    out.l2 = std::sqrt(l2);
    out.seminorm_1h = std::sqrt(semi);
    out.norm_1h = std::sqrt(semi + jumps);
    out.boundary_l2 = std::sqrt(boundary);
    out.triple_1h = std::sqrt(semi + jumps + averages);
    return out;
}

}  // namespace

BrokenNorms broken_norms(const DGFunction& f, const PenaltySet& penalties)
{
    return norms_impl(f, nullptr, nullptr, penalties);
}

BrokenNorms broken_error_norms(const DGFunction& f, const ScalarField& exact, const GradientField& exact_gradient,
                               const PenaltySet& penalties)
{
    return norms_impl(f, &exact, &exact_gradient, penalties);
}

NormGram::NormGram(const DGSpace& space, Kind kind, const PenaltySet& penalties) : pattern_(space.pattern_ptr())
{
    const TriMesh& mesh = space.mesh();
    const int r = space.degree();
    const int ldim = space.local_dim();
    const int nq = mesh.volume_points_per_element();
    const int nqe = mesh.points_per_edge();
    values_.assign(pattern_->nnz(), 0.0);
    std::vector<double> gx(static_cast<std::size_t>(ldim)), gy(gx.size());
    if (kind == Kind::broken_h1) penalties.validate(r);

    for (int e = 0; e < space.num_elements(); ++e) {
        const auto w = mesh.volume_weights(e);
        for (int q = 0; q < nq; ++q) {
            const auto phi = space.volume_values(q);
            space.volume_gradients(e, q, gx, gy);
            for (int j = 0; j < ldim; ++j) {
                for (int i = 0; i < ldim; ++i) {
                    const double v = kind == Kind::l2 ? phi[i] * phi[j] : gx[i] * gx[j] + gy[i] * gy[j];
                    values_[pattern_->position(e, i, e, j)] += w[q] * v;
                }
            }
        }
    }
    if (kind == Kind::l2) return;

    for (int id = 0; id < static_cast<int>(mesh.edges().size()); ++id) {
        const Edge& edge = mesh.edges()[id];
        if (edge.kind == EdgeKind::boundary) continue;
        const double he = edge.length;
        const double w0 = penalties.gamma0 * r / he;
        const double wt = penalties.beta1 * r / he;
        const auto w = mesh.edge_weights(id);
        for (int s = 0; s < 2; ++s) {
            const EdgeTrace& ts = space.trace(id, s);
            for (int t = 0; t < 2; ++t) {
                const EdgeTrace& tt = space.trace(id, t);
                const double sign = ts.sign * tt.sign;
                for (int q = 0; q < nqe; ++q) {
                    const std::size_t off = static_cast<std::size_t>(q) * ldim;
                    for (int j = 0; j < ldim; ++j) {
                        for (int i = 0; i < ldim; ++i) {
                            double v = w0 * ts.value[off + i] * tt.value[off + j] +
                                       wt * ts.dtau[off + i] * tt.dtau[off + j];
                            for (int d = 1; d <= r; ++d) {
                                v += penalties.gamma_j(d) * std::pow(he / r, 2 * d - 1) * ts.dn[d - 1][off + i] *
                                     tt.dn[d - 1][off + j];
                            }
                            values_[pattern_->position(ts.element, i, tt.element, j)] += w[q] * sign * v;
                        }
                    }
                }
            }
        }
    }
}

double NormGram::norm(std::span<const Complex> u) const
{
    const auto& cp = pattern_->col_ptr();
    const auto& ri = pattern_->row_idx();
    double acc = 0.0;
    for (int c = 0; c < pattern_->size(); ++c) {
        Complex col{};
        for (int p = cp[c]; p < cp[c + 1]; ++p) col += std::conj(u[ri[p]]) * values_[p];
        acc += std::real(col * u[c]);
    }
    return std::sqrt(std::max(acc, 0.0));
}

}  // namespace mcipdg
