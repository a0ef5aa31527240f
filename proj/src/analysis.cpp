#include "mcipdg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mcipdg {

namespace fs = std::filesystem;

DGFunction solve_deterministic(const Discretization& disc, double k, std::span<const Complex> volume_data,
                               std::span<const Complex> boundary_data)
{
    const SystemMatrix a = disc.assembler->constant(k);
    const LUFactors f = lu_factorize(a);
    const std::vector<Complex> b = assemble_rhs(*disc.space, volume_data, boundary_data);
    return DGFunction(disc.space, lu_solve(f, b));
}

DGFunction solve_deterministic(const Discretization& disc, const RunConfig& config)
{
    const MediaSample media = sample_media(*disc.mesh, config.noise, 0);
    const auto src = source_at_volume_points(config.source, *disc.mesh, media, 0.0, config.k);
    return solve_deterministic(disc, config.k, src, {});
}

Complex PlaneWave::value(Point2 p) const
{
    return std::exp(Complex(0.0, k * (p.x * std::cos(theta) + p.y * std::sin(theta))));
}

std::array<Complex, 2> PlaneWave::gradient(Point2 p) const
{
    const Complex u = value(p);
    const Complex ik(0.0, k);
    return {ik * std::cos(theta) * u, ik * std::sin(theta) * u};
}

std::vector<Complex> PlaneWave::impedance_data(const TriMesh& mesh) const
{
    const int nqe = mesh.points_per_edge();
    std::vector<Complex> g(mesh.boundary_edges().size() * static_cast<std::size_t>(nqe));
    for (std::size_t b = 0; b < mesh.boundary_edges().size(); ++b) {
        const int id = mesh.boundary_edges()[b];
        const Point2 nu = mesh.edges()[id].normal;
        const auto pts = mesh.edge_points(id);
        for (int q = 0; q < nqe; ++q) {
            const auto grad = gradient(pts[q]);
            g[b * nqe + q] = grad[0] * nu.x + grad[1] * nu.y + Complex(0.0, k) * value(pts[q]);
        }
    }
    return g;
}

ConvergenceStudy run_manufactured_convergence(const RunConfig& base, const StudySpec& spec)
{
    base.validate();
    spec.validate(base);
    const PlaneWave wave{base.k, spec.theta};
    ConvergenceStudy study;
    for (int n : spec.mesh_sizes) {
        const Discretization disc = Discretization::build(n, base.degree, base.penalties, base.quadrature);
        const TriMesh& mesh = *disc.mesh;
        const std::vector<Complex> volume(mesh.elements().size() * mesh.volume_points_per_element());
        const DGFunction u = solve_deterministic(disc, base.k, volume, wave.impedance_data(mesh));
        const BrokenNorms err = broken_error_norms(
            u, [&](Point2 p) { return wave.value(p); }, [&](Point2 p) { return wave.gradient(p); }, base.penalties);
        ConvergenceRow row;
        row.n = n;
        row.h = mesh.h();
        row.l2_error = err.l2;
        row.h1_error = err.norm_1h;
        row.rel_l2_error = err.l2;  // ||u*||_{L2(D)} = 1: |u*| = 1 on a unit-area domain
        row.mesh_parameter = std::pow(base.k, 3) * row.h * row.h / (base.degree * base.degree);
        if (!study.rows.empty()) {
            const ConvergenceRow& prev = study.rows.back();
            const double lh = std::log(prev.h / row.h);
            row.l2_rate = std::log(prev.l2_error / row.l2_error) / lh;
            row.h1_rate = std::log(prev.h1_error / row.h1_error) / lh;
        }
        if (row.mesh_parameter > 1.0) {
            study.warnings.push_back("n = " + std::to_string(n) + ": k^3 h^2 / r^2 = " + format_real(row.mesh_parameter) +
                                     " > 1, pre-asymptotic mesh");
        }
        study.rows.push_back(row);
    }
    return study;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("log_log_slope: need two or more points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double m = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

MScalingStudy run_m_scaling(const RunConfig& base, const StudySpec& spec)
{
    spec.validate(base);
    RunConfig cfg = base;
    cfg.samples = spec.m_ref;
    cfg.modes = spec.mode + 1;
    MultiModesOptions opts;
    for (int m : spec.m_values) {
        const int batches = std::min(kMaxBatches, spec.m_ref / m);
        for (int b = 1; b <= batches; ++b) opts.checkpoints.push_back(b * m);
    }
    std::sort(opts.checkpoints.begin(), opts.checkpoints.end());
    opts.checkpoints.erase(std::unique(opts.checkpoints.begin(), opts.checkpoints.end()), opts.checkpoints.end());
    const RunResult run = run_multimodes(cfg, opts);

    std::map<int, std::span<const Complex>> prefix_mean;
    for (const auto& cp : run.checkpoints) prefix_mean[cp.samples] = cp.phi[spec.mode].coeffs();

    MScalingStudy study;
    study.mode = spec.mode;
    study.m_ref = spec.m_ref;
    study.counters = run.counters;
    const DGFunction& reference = run.phi[spec.mode];
    std::vector<double> ms, errs;
    for (int m : spec.m_values) {
        MScalingRow row;
        row.samples = m;
        row.batches = std::min(kMaxBatches, spec.m_ref / m);
        double sq = 0.0;
        std::vector<Complex> batch(reference.coeffs().size());
        for (int b = 0; b < row.batches; ++b) {
            // Batch mean from prefix means: (b + 1) * mean_{(b+1)m} - b * mean_{bm}.
            const auto hi = prefix_mean.at((b + 1) * m);
            for (std::size_t i = 0; i < batch.size(); ++i) {
                Complex v = static_cast<double>(b + 1) * hi[i];
                if (b > 0) v -= static_cast<double>(b) * prefix_mean.at(b * m)[i];
                batch[i] = v;
            }
            const double e = compare_fields(DGFunction(reference.space_ptr(), batch), reference).abs_l2;
            if (b == 0) row.prefix_error = e;
            sq += e * e;
        }
        row.error = std::sqrt(sq / row.batches);
        study.rows.push_back(row);
        ms.push_back(m);
        errs.push_back(row.error);
    }
    study.slope = log_log_slope(ms, errs);
    return study;
}

namespace {

SweepStudy sweep(const RunConfig& base, const std::vector<double>& epsilons, std::vector<int> modes)
{
    if (modes.empty()) modes.push_back(base.modes);
    const Discretization disc = Discretization::build(base);
    SweepStudy study;
    for (double eps : epsilons) {
        RunConfig cfg = base;
        cfg.epsilon = eps;
        cfg.modes = modes.back();
        const BaselineResult classical = run_classical(disc, cfg);
        const RunResult multi = run_multimodes(disc, cfg);
        for (int n : modes) {
            const FieldDifference d = compare_fields(multi.truncated(n), classical.psi_tilde);
            study.rows.push_back({eps, n, d.abs_l2, d.rel_l2});
        }
        study.timings.push_back({eps, multi.counters, classical.counters});
    }
    return study;
}

}  // namespace

SweepStudy run_modes_sweep(const RunConfig& base, const StudySpec& spec)
{
    spec.validate(base);
    return sweep(base, {base.epsilon}, spec.n_values);
}

SweepStudy run_epsilon_sweep(const RunConfig& base, const StudySpec& spec)
{
    spec.validate(base);
    return sweep(base, spec.epsilon_values, spec.n_values);
}

namespace {

class Table {
public:
    explicit Table(const std::string& header) : text_(header + "\n") {}
    Table& row(const std::vector<std::string>& cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i) text_ += (i ? "," : "") + cells[i];
        text_ += '\n';
        return *this;
    }
    const std::string& text() const { return text_; }

private:
    std::string text_;
};

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw std::runtime_error("write error on '" + path.string() + "'");
}

std::string counters_text(const char* method, const SolverCounters& c)
{
    std::ostringstream o;
    o << "method = " << method << '\n'
      << "factorizations = " << c.factorizations << '\n'
      << "solves = " << c.solves << '\n'
      << "assembly_seconds = " << format_real(c.assembly_seconds) << '\n'
      << "factor_seconds = " << format_real(c.factor_seconds) << '\n'
      << "solve_seconds = " << format_real(c.solve_seconds) << '\n'
      << "rhs_seconds = " << format_real(c.rhs_seconds) << '\n'
      << "reduction_seconds = " << format_real(c.reduction_seconds) << '\n'
      << "total_seconds = " << format_real(c.total_seconds) << '\n';
    return o.str();
}

std::string as_int(long v) { return std::to_string(v); }
std::string as_real(double v) { return format_real(v); }

struct Outputs {
    fs::path root;
    std::string report;

    explicit Outputs(const std::string& dir) : root(dir)
    {
        for (const char* sub : {"fields", "sections", "tables"}) fs::create_directories(root / sub);
    }
    void field(const std::string& name, const DGFunction& f) const
    {
        write_field_csv(f, (root / "fields" / (name + ".csv")).string());
        write_cross_section_csv(cross_section(f, kSectionSamples), (root / "sections" / (name + "_diagonal.csv")).string());
    }
    void table(const std::string& name, const Table& t) const { write_text(root / "tables" / (name + ".csv"), t.text()); }
    void finish() const { write_text(root / "report.txt", report); }
};

void write_modes(Outputs& out, const RunConfig& cfg, const RunResult& run)
{
    Table modes("n,mean_l2,mean_h1,decay_ratio,phi_l2");
    for (int n = 0; n < static_cast<int>(run.phi.size()); ++n) {
        modes.row({as_int(n), as_real(run.mode_l2[n]), as_real(run.mode_h1[n]), as_real(run.decay_ratio[n]), as_real(l2_norm(run.phi[n]))});
    }
    out.table("modes", modes);
    out.table("multimodes_counts", Table("factorizations,solves,psi_l2")
                                       .row({as_int(run.counters.factorizations), as_int(run.counters.solves), as_real(l2_norm(run.psi))}));
    out.field("psi", run.psi);
    for (int n = 0; n < static_cast<int>(run.phi.size()); ++n) out.field("phi_" + std::to_string(n), run.phi[n]);
    out.field("multimodes_sample_0", run.first_sample);

    std::ostringstream o;
    o << "\n[multimodes]\n" << counters_text("multimodes", run.counters);
    o << "sigma_hat = " << as_real(run.sigma_hat) << '\n';
    for (int n = 1; n < static_cast<int>(run.decay_ratio.size()); ++n) {
        o << "rho_" << n << " = " << as_real(run.decay_ratio[n]) << '\n';
    }
    if (run.sigma_hat >= 1.0) o << "note = sigma_hat >= 1 (C0_hint = " << as_real(cfg.c0_hint) << "); decay is judged by rho_n\n";
    out.report += o.str();
}

void write_classical(Outputs& out, const BaselineResult& base)
{
    out.table("classical_counts", Table("factorizations,solves,psi_tilde_l2")
                                      .row({as_int(base.counters.factorizations), as_int(base.counters.solves),
                                            as_real(l2_norm(base.psi_tilde))}));
    out.field("psi_tilde", base.psi_tilde);
    out.field("classical_sample_0", base.first_sample);
    out.report += "\n[classical]\n" + counters_text("classical", base.counters);
}

void write_sweep(Outputs& out, const std::string& name, const SweepStudy& s)
{
    Table t("epsilon,N,abs_l2,rel_l2");
    for (const auto& r : s.rows) t.row({as_real(r.epsilon), as_int(r.modes), as_real(r.abs_l2), as_real(r.rel_l2)});
    out.table(name, t);
    std::ostringstream o;
    o << "\n[timings]\nepsilon,multimodes_seconds,classical_seconds,ratio,multimodes_factorizations,classical_factorizations\n";
    for (const auto& tm : s.timings) {
        o << as_real(tm.epsilon) << ',' << as_real(tm.multimodes.total_seconds) << ',' << as_real(tm.classical.total_seconds) << ','
          << as_real(tm.classical.total_seconds / tm.multimodes.total_seconds) << ',' << tm.multimodes.factorizations << ','
          << tm.classical.factorizations << '\n';
    }
    out.report += o.str();
}

}  // namespace

void run_full(const ConfigFile& config, Command command, const std::string& out_dir)
{
    const RunConfig& cfg = config.run;
    cfg.validate();
    Outputs out(out_dir);
    out.report = "# configuration\n" + echo_config(config);

    switch (command) {
    case Command::solve_det: {
        const Discretization disc = Discretization::build(cfg);
        const DGFunction u = solve_deterministic(disc, cfg);
        out.field("deterministic", u);
        const BrokenNorms nrm = broken_norms(u, cfg.penalties);
        out.table("deterministic", Table("ndof,l2,seminorm_1h,norm_1h,boundary_l2")
                                       .row({as_int(static_cast<long>(disc.space->ndof())), as_real(nrm.l2), as_real(nrm.seminorm_1h),
                                             as_real(nrm.norm_1h), as_real(nrm.boundary_l2)}));
        out.report += "\n[deterministic]\nndof = " + std::to_string(disc.space->ndof()) + "\nl2 = " + as_real(nrm.l2) + '\n';
        break;
    }
    case Command::run_modes: {
        const RunResult run = run_multimodes(cfg);
        write_modes(out, cfg, run);
        write_media_snapshot_csv(*Discretization::build(cfg).mesh, cfg.noise, cfg.epsilon, cfg.samples,
                                 (out.root / "fields" / "media_mean.csv").string());
        break;
    }
    case Command::run_classical: {
        write_classical(out, run_classical(cfg));
        break;
    }
    case Command::compare: {
        const Discretization disc = Discretization::build(cfg);
        const BaselineResult base = run_classical(disc, cfg);
        const RunResult run = run_multimodes(disc, cfg);
        write_modes(out, cfg, run);
        write_classical(out, base);
        Table t("N,abs_l2,rel_l2");
        for (int n = 1; n <= cfg.modes; ++n) {
            const FieldDifference d = compare_fields(run.truncated(n), base.psi_tilde);
            t.row({as_int(n), as_real(d.abs_l2), as_real(d.rel_l2)});
        }
        out.table("compare", t);
        out.report += "\n[comparison]\ncost_ratio = " + as_real(base.counters.total_seconds / run.counters.total_seconds) + '\n';
        break;
    }
    case Command::study: {
        if (!config.study) throw std::invalid_argument("study command needs 'study = <kind>' in the config");
        const StudySpec& spec = *config.study;
        out.report += "\n[study]\nkind = " + std::string(study_kind_name(spec.kind)) + '\n';
        switch (spec.kind) {
        case StudyKind::manufactured_convergence: {
            const ConvergenceStudy s = run_manufactured_convergence(cfg, spec);
            Table t("n,h,l2_error,h1_error,rel_l2_error,l2_rate,h1_rate,mesh_parameter");
            for (const auto& r : s.rows) {
                t.row({as_int(r.n), as_real(r.h), as_real(r.l2_error), as_real(r.h1_error), as_real(r.rel_l2_error), as_real(r.l2_rate), as_real(r.h1_rate),
                       as_real(r.mesh_parameter)});
            }
            out.table("manufactured_convergence", t);
            for (const auto& w : s.warnings) out.report += "warning = " + w + '\n';
            break;
        }
        case StudyKind::m_scaling: {
            const MScalingStudy s = run_m_scaling(cfg, spec);
            Table t("M,batches,error,prefix_error");
            for (const auto& r : s.rows)
                t.row({as_int(r.samples), as_int(r.batches), as_real(r.error), as_real(r.prefix_error)});
            out.table("m_scaling", t);
            out.table("m_scaling_slope", Table("mode,M_ref,slope").row({as_int(s.mode), as_int(s.m_ref), as_real(s.slope)}));
            out.report += "slope = " + as_real(s.slope) + '\n' + counters_text("multimodes", s.counters);
            break;
        }
        case StudyKind::modes_sweep:
            write_sweep(out, "modes_sweep", run_modes_sweep(cfg, spec));
            break;
        case StudyKind::epsilon_sweep:
            write_sweep(out, "epsilon_sweep", run_epsilon_sweep(cfg, spec));
            break;
        case StudyKind::compare: {
            StudySpec one = spec;
            one.n_values = {cfg.modes};
            write_sweep(out, "compare", run_epsilon_sweep(cfg, one));
            break;
        }
        }
        break;
    }
    }
    out.finish();
}

}  // namespace mcipdg
