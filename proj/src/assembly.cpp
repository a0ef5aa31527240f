#include "mcipdg/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mcipdg {

Complex SystemMatrix::at(int row, int col) const
{
    const auto& cp = pattern->col_ptr();
    const auto& ri = pattern->row_idx();
    const auto begin = ri.begin() + cp[col];
    const auto end = ri.begin() + cp[col + 1];
    const auto it = std::lower_bound(begin, end, row);
    if (it == end || *it != row) return 0.0;
    return values[static_cast<std::size_t>(it - ri.begin())];
}

std::vector<Complex> SystemMatrix::multiply(std::span<const Complex> x) const
{
    if (x.size() != static_cast<std::size_t>(size())) throw std::invalid_argument("SystemMatrix::multiply: size mismatch");
    std::vector<Complex> y(x.size());
    csc_multiply(view(), x, y);
    return y;
}

namespace {

struct LocalBlock {
    std::vector<double> stiffness;  // [i * ldim + j], i test, j trial
    std::vector<double> penalty;
};

/// Interior-edge contribution with test functions on side s and trial functions on side t.
void edge_block(const DGSpace& space, const PenaltySet& pen, int edge_id, int s, int t, LocalBlock& out)
{
    const TriMesh& mesh = space.mesh();
    const Edge& edge = mesh.edges()[edge_id];
    const int ldim = space.local_dim();
    const int r = space.degree();
    const int nqe = mesh.points_per_edge();
    const auto w = mesh.edge_weights(edge_id);
    const EdgeTrace& ts = space.trace(edge_id, s);
    const EdgeTrace& tt = space.trace(edge_id, t);
    const double he = edge.length;
    const double w0 = pen.gamma0 / he;
    const double wt = pen.beta1 / he;
    const double sign = ts.sign * tt.sign;

    out.stiffness.assign(static_cast<std::size_t>(ldim) * ldim, 0.0);
    out.penalty.assign(out.stiffness.size(), 0.0);
    for (int q = 0; q < nqe; ++q) {
        const std::size_t off = static_cast<std::size_t>(q) * ldim;
        for (int i = 0; i < ldim; ++i) {
            for (int j = 0; j < ldim; ++j) {
                // -<{d_n phi_j}, [phi_i]> - <[phi_j], {d_n phi_i}>
                const double flux = 0.5 * tt.dn[0][off + j] * ts.sign * ts.value[off + i] +
                                    tt.sign * tt.value[off + j] * 0.5 * ts.dn[0][off + i];
                double p = w0 * ts.value[off + i] * tt.value[off + j] + wt * ts.dtau[off + i] * tt.dtau[off + j];
                for (int d = 1; d <= r; ++d) {
                    p += pen.gamma_j(d) * std::pow(he, 2 * d - 1) * ts.dn[d - 1][off + i] * tt.dn[d - 1][off + j];
                }
                out.stiffness[static_cast<std::size_t>(i) * ldim + j] -= w[q] * flux;
                out.penalty[static_cast<std::size_t>(i) * ldim + j] += w[q] * sign * p;
            }
        }
    }
}

void volume_block(const DGSpace& space, int e, std::vector<double>& stiff, std::vector<double>& mass)
{
    const int ldim = space.local_dim();
    const int nq = space.mesh().volume_points_per_element();
    const auto w = space.mesh().volume_weights(e);
    std::vector<double> gx(static_cast<std::size_t>(ldim)), gy(gx.size());
    stiff.assign(static_cast<std::size_t>(ldim) * ldim, 0.0);
    mass.assign(stiff.size(), 0.0);
    for (int q = 0; q < nq; ++q) {
        const auto phi = space.volume_values(q);
        space.volume_gradients(e, q, gx, gy);
        for (int i = 0; i < ldim; ++i) {
            for (int j = 0; j < ldim; ++j) {
                stiff[static_cast<std::size_t>(i) * ldim + j] += w[q] * (gx[i] * gx[j] + gy[i] * gy[j]);
                mass[static_cast<std::size_t>(i) * ldim + j] += w[q] * phi[i] * phi[j];
            }
        }
    }
}

void boundary_block(const DGSpace& space, int edge_id, const double* alpha, std::vector<double>& out)
{
    const int ldim = space.local_dim();
    const int nqe = space.mesh().points_per_edge();
    const auto w = space.mesh().edge_weights(edge_id);
    const EdgeTrace& tr = space.trace(edge_id, 0);
    out.assign(static_cast<std::size_t>(ldim) * ldim, 0.0);
    for (int q = 0; q < nqe; ++q) {
        const double wq = alpha ? w[q] * alpha[q] : w[q];
        const std::size_t off = static_cast<std::size_t>(q) * ldim;
        for (int i = 0; i < ldim; ++i) {
            for (int j = 0; j < ldim; ++j) out[static_cast<std::size_t>(i) * ldim + j] += wq * tr.value[off + i] * tr.value[off + j];
        }
    }
}

void scatter(const BlockPattern& pattern, int row_el, int col_el, const std::vector<double>& block,
             std::vector<double>& dest)
{
    const int ldim = pattern.local_dim();
    for (int i = 0; i < ldim; ++i) {
        for (int j = 0; j < ldim; ++j) {
            dest[pattern.position(row_el, i, col_el, j)] += block[static_cast<std::size_t>(i) * ldim + j];
        }
    }
}

void element_rows(const DGSpace& space, const PenaltySet& pen, int e, FormComponents& parts)
{
    const TriMesh& mesh = space.mesh();
    const BlockPattern& pattern = space.pattern();
    std::vector<double> stiff, mass, bnd;
    volume_block(space, e, stiff, mass);
    scatter(pattern, e, e, stiff, parts.stiffness);
    scatter(pattern, e, e, mass, parts.mass);
    LocalBlock blk;
    for (int id : mesh.elements()[e].edges) {
        const Edge& edge = mesh.edges()[id];
        if (edge.kind == EdgeKind::boundary) {
            boundary_block(space, id, nullptr, bnd);
            scatter(pattern, e, e, bnd, parts.boundary);
            continue;
        }
        const int s = edge.left == e ? 0 : 1;
        for (int t = 0; t < 2; ++t) {
            edge_block(space, pen, id, s, t, blk);
            const int col_el = t == 0 ? edge.left : edge.right;
            scatter(pattern, e, col_el, blk.stiffness, parts.stiffness);
            scatter(pattern, e, col_el, blk.penalty, parts.penalty);
        }
    }
}

}  // namespace

FormComponents assemble_components(const DGSpace& space, const PenaltySet& penalties, Execution exec)
{
    penalties.validate(space.degree());
    const std::size_t nnz = space.pattern().nnz();
    FormComponents parts{std::vector<double>(nnz, 0.0), std::vector<double>(nnz, 0.0), std::vector<double>(nnz, 0.0),
                         std::vector<double>(nnz, 0.0)};
    const int ne = space.num_elements();

    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
        for (int e = 0; e < ne; ++e) element_rows(space, penalties, e, parts);
        return parts;
    }

    const TriMesh& mesh = space.mesh();
    const BlockPattern& pattern = space.pattern();
    std::vector<double> stiff, mass, bnd;
    for (int e = 0; e < ne; ++e) {
        volume_block(space, e, stiff, mass);
        scatter(pattern, e, e, stiff, parts.stiffness);
        scatter(pattern, e, e, mass, parts.mass);
    }
    LocalBlock blk;
    for (int id = 0; id < static_cast<int>(mesh.edges().size()); ++id) {
        const Edge& edge = mesh.edges()[id];
        if (edge.kind == EdgeKind::boundary) {
            boundary_block(space, id, nullptr, bnd);
            scatter(pattern, edge.left, edge.left, bnd, parts.boundary);
            continue;
        }
        for (int s = 0; s < 2; ++s) {
            for (int t = 0; t < 2; ++t) {
                edge_block(space, penalties, id, s, t, blk);
                const int row_el = s == 0 ? edge.left : edge.right;
                const int col_el = t == 0 ? edge.left : edge.right;
                scatter(pattern, row_el, col_el, blk.stiffness, parts.stiffness);
                scatter(pattern, row_el, col_el, blk.penalty, parts.penalty);
            }
        }
    }
    return parts;
}

Assembler::Assembler(std::shared_ptr<const DGSpace> space, PenaltySet penalties)
    : space_(std::move(space)), penalties_(std::move(penalties))
{
    if (!space_) throw std::invalid_argument("Assembler: null space");
    parts_ = assemble_components(*space_, penalties_);
}

void Assembler::fill(double k, const MediaSample* media, double epsilon, SystemMatrix& out) const
{
    if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("assembly: wavenumber k must be > 0");
    const DGSpace& space = *space_;
    const TriMesh& mesh = space.mesh();
    if (media) check_media_layout(mesh, *media);

    out.pattern = space.pattern_ptr();
    out.k = k;
    out.penalties = penalties_;
    out.kind = media ? CoefficientKind::sampled : CoefficientKind::constant;
    out.epsilon = media ? epsilon : 0.0;
    out.sample_index = media ? media->sample_index() : -1;
    out.media_fingerprint = media ? media->fingerprint() : 0;

    const std::size_t nnz = parts_.stiffness.size();
    out.values.resize(nnz);
    for (std::size_t p = 0; p < nnz; ++p) out.values[p] = Complex(parts_.stiffness[p], parts_.penalty[p]);

    const int ldim = space.local_dim();
    const int nq = mesh.volume_points_per_element();
    const int nqe = mesh.points_per_edge();
    const int ne = space.num_elements();
    const double k2 = k * k;
    const BlockPattern& pattern = space.pattern();

#pragma omp parallel
    {
        std::vector<double> mass(static_cast<std::size_t>(ldim) * ldim), bnd;
        std::vector<double> alpha_b(static_cast<std::size_t>(nqe));
#pragma omp for schedule(static)
        for (int e = 0; e < ne; ++e) {
            const auto w = mesh.volume_weights(e);
            std::fill(mass.begin(), mass.end(), 0.0);
            for (int q = 0; q < nq; ++q) {
                double wq = w[q];
                if (media) {
                    const double a = 1.0 + epsilon * media->volume()[static_cast<std::size_t>(e) * nq + q];
                    wq *= a * a;
                }
                const auto phi = space.volume_values(q);
                for (int i = 0; i < ldim; ++i) {
                    for (int j = 0; j < ldim; ++j) mass[static_cast<std::size_t>(i) * ldim + j] += wq * phi[i] * phi[j];
                }
            }
            for (int i = 0; i < ldim; ++i) {
                for (int j = 0; j < ldim; ++j) {
                    out.values[pattern.position(e, i, e, j)] -= k2 * mass[static_cast<std::size_t>(i) * ldim + j];
                }
            }
            for (int id : mesh.elements()[e].edges) {
                const Edge& edge = mesh.edges()[id];
                if (edge.kind != EdgeKind::boundary) continue;
                const double* alpha = nullptr;
                if (media) {
                    for (int q = 0; q < nqe; ++q) {
                        alpha_b[q] = 1.0 + epsilon * media->boundary()[static_cast<std::size_t>(edge.boundary_index) * nqe + q];
                    }
                    alpha = alpha_b.data();
                }
                boundary_block(space, id, alpha, bnd);
                for (int i = 0; i < ldim; ++i) {
                    for (int j = 0; j < ldim; ++j) {
                        out.values[pattern.position(e, i, e, j)] +=
                            Complex(0.0, k * bnd[static_cast<std::size_t>(i) * ldim + j]);
                    }
                }
            }
        }
    }
}

SystemMatrix Assembler::constant(double k) const
{
    SystemMatrix a;
    fill(k, nullptr, 0.0, a);
    return a;
}

void Assembler::variable(double k, const MediaSample& media, double epsilon, SystemMatrix& out) const
{
    if (!(epsilon >= 0.0 && epsilon < 1.0)) throw std::invalid_argument("assembly: epsilon must lie in [0, 1)");
    fill(k, &media, epsilon, out);
}

SystemMatrix Assembler::variable(double k, const MediaSample& media, double epsilon) const
{
    SystemMatrix a;
    variable(k, media, epsilon, a);
    return a;
}

SystemMatrix assemble_constant(std::shared_ptr<const DGSpace> space, double k, const PenaltySet& penalties)
{
    return Assembler(std::move(space), penalties).constant(k);
}

SystemMatrix assemble_variable(std::shared_ptr<const DGSpace> space, double k, const PenaltySet& penalties,
                               const MediaSample& media, double epsilon)
{
    return Assembler(std::move(space), penalties).variable(k, media, epsilon);
}

void assemble_rhs(const DGSpace& space, std::span<const Complex> volume_data, std::span<const Complex> boundary_data,
                  std::span<Complex> out)
{
    const TriMesh& mesh = space.mesh();
    const int ldim = space.local_dim();
    const int nq = mesh.volume_points_per_element();
    const int nqe = mesh.points_per_edge();
    const int ne = space.num_elements();
    if (volume_data.size() != static_cast<std::size_t>(ne) * nq) {
        throw std::invalid_argument("assemble_rhs: volume data must hold one value per volume quadrature point");
    }
    if (!boundary_data.empty() && boundary_data.size() != mesh.boundary_edges().size() * nqe) {
        throw std::invalid_argument("assemble_rhs: boundary data must hold one value per boundary quadrature point");
    }
    if (out.size() != space.ndof()) throw std::invalid_argument("assemble_rhs: output size mismatch");

#pragma omp parallel for schedule(static)
    for (int e = 0; e < ne; ++e) {
        Complex* be = out.data() + space.dof(e, 0);
        for (int i = 0; i < ldim; ++i) be[i] = 0.0;
        const auto w = mesh.volume_weights(e);
        for (int q = 0; q < nq; ++q) {
            const Complex wf = w[q] * volume_data[static_cast<std::size_t>(e) * nq + q];
            const auto phi = space.volume_values(q);
            for (int i = 0; i < ldim; ++i) be[i] += wf * phi[i];
        }
        if (boundary_data.empty()) continue;
        for (int id : mesh.elements()[e].edges) {
            const Edge& edge = mesh.edges()[id];
            if (edge.kind != EdgeKind::boundary) continue;
            const auto wb = mesh.edge_weights(id);
            const EdgeTrace& tr = space.trace(id, 0);
            for (int q = 0; q < nqe; ++q) {
                const Complex wg = wb[q] * boundary_data[static_cast<std::size_t>(edge.boundary_index) * nqe + q];
                for (int i = 0; i < ldim; ++i) be[i] += wg * tr.value[static_cast<std::size_t>(q) * ldim + i];
            }
        }
    }
}

std::vector<Complex> assemble_rhs(const DGSpace& space, std::span<const Complex> volume_data,
                                  std::span<const Complex> boundary_data)
{
    std::vector<Complex> b(space.ndof());
    assemble_rhs(space, volume_data, boundary_data, b);
    return b;
}

void write_matrix_coordinates(const SystemMatrix& a, const std::string& path)
{
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path);
    const auto& cp = a.pattern->col_ptr();
    const auto& ri = a.pattern->row_idx();
    for (int c = 0; c < a.size(); ++c) {
        for (int p = cp[c]; p < cp[c + 1]; ++p) {
            std::fprintf(f, "%d %d %.17g %.17g\n", ri[p] + 1, c + 1, a.values[p].real(), a.values[p].imag());
        }
    }
    std::fclose(f);
}

}  // namespace mcipdg
