#include "mcipdg/multimodes.hpp"

#include "parallel_blocks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mcipdg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void add_counters(SolverCounters& into, const SolverCounters& c)
{
    into.factorizations += c.factorizations;
    into.solves += c.solves;
    into.assembly_seconds += c.assembly_seconds;
    into.factor_seconds += c.factor_seconds;
    into.solve_seconds += c.solve_seconds;
    into.rhs_seconds += c.rhs_seconds;
    into.reduction_seconds += c.reduction_seconds;
}

}  // namespace

void RunConfig::validate() const
{
    if (!(std::isfinite(k) && k > 0.0)) throw std::invalid_argument("config: k must be > 0");
    if (!(epsilon >= 0.0 && epsilon < 1.0)) throw std::invalid_argument("config: epsilon must lie in [0, 1)");
    if (modes < 1) throw std::invalid_argument("config: N must be >= 1");
    if (samples < 1) throw std::invalid_argument("config: M must be >= 1");
    if (n < 1) throw std::invalid_argument("config: n must be >= 1");
    if (degree < 1) throw std::invalid_argument("config: r must be >= 1");
    if (!(std::isfinite(c0_hint) && c0_hint > 0.0)) throw std::invalid_argument("config: C0_hint must be > 0");
    if (!(std::isfinite(source.value.real()) && std::isfinite(source.value.imag()))) {
        throw std::invalid_argument("config: constant source value must be finite");
    }
    penalties.validate(degree);
    noise.validate();
}

Discretization Discretization::build(int n, int degree, const PenaltySet& penalties, QuadratureOptions quad)
{
    Discretization d;
    d.mesh = std::make_shared<const TriMesh>(build_uniform_mesh(n, quad));
    d.space = std::make_shared<const DGSpace>(d.mesh, degree);
    d.assembler = std::make_shared<const Assembler>(d.space, penalties);
    return d;
}

Discretization Discretization::build(const RunConfig& config)
{
    config.validate();
    return build(config.n, config.degree, config.penalties, config.quadrature);
}

DGFunction RunResult::truncated(int modes) const
{
    if (modes < 1 || modes > static_cast<int>(phi.size())) {
        throw std::invalid_argument("RunResult::truncated: mode count out of range");
    }
    DGFunction out(psi.space_ptr());
    double weight = 1.0;
    for (int n = 0; n < modes; ++n) {
        const auto c = phi[n].coeffs();
        for (std::size_t i = 0; i < c.size(); ++i) out.coeffs()[i] += weight * c[i];
        weight *= epsilon;
    }
    return out;
}

ModeSources mode_rhs_update(const DGFunction& u_n, const DGFunction& u_prev, const MediaSample& media, double k)
{
    if (u_n.space_ptr() != u_prev.space_ptr()) throw std::invalid_argument("mode_rhs_update: functions live on different spaces");
    const TriMesh& mesh = u_n.space().mesh();
    check_media_layout(mesh, media);
    ModeSources out;
    out.volume = values_at_volume_points(u_n);
    const std::vector<Complex> prev = values_at_volume_points(u_prev);
    const double k2 = k * k;
    const auto eta = media.volume();
    for (std::size_t i = 0; i < out.volume.size(); ++i) {
        out.volume[i] = 2.0 * k2 * eta[i] * out.volume[i] + k2 * eta[i] * eta[i] * prev[i];
    }
    out.boundary = values_at_boundary_points(u_n);
    const auto eta_b = media.boundary();
    for (std::size_t i = 0; i < out.boundary.size(); ++i) out.boundary[i] *= Complex(0.0, -k * eta_b[i]);
    return out;
}

DGFunction sample_average(std::span<const DGFunction> samples)
{
    if (samples.empty()) throw std::invalid_argument("sample_average: empty sample list");
    DGFunction mean(samples.front().space_ptr());
    for (const auto& s : samples) {
        if (s.space_ptr() != mean.space_ptr()) throw std::invalid_argument("sample_average: samples live on different spaces");
        for (std::size_t i = 0; i < s.size(); ++i) mean.coeffs()[i] += s.coeffs()[i];
    }
    const double inv = 1.0 / static_cast<double>(samples.size());
    for (auto& c : mean.coeffs()) c *= inv;
    return mean;
}

MultiModesSolver::MultiModesSolver(Discretization disc, RunConfig config, MultiModesOptions options)
    : disc_(std::move(disc)), config_(std::move(config)), options_(options)
{
    config_.validate();
    auto t0 = Clock::now();
    matrix_ = disc_.assembler->constant(config_.k);
    setup_.assembly_seconds = seconds_since(t0);
    symbolic_ = SymbolicLU::analyze(matrix_.view());
    if (!options_.refactor_every_solve) {
        t0 = Clock::now();
        factors_ = lu_factorize(matrix_.view(), symbolic_);
        setup_.factor_seconds = seconds_since(t0);
        setup_.factorizations = 1;
    }
}

MultiModesSolver::SampleModes MultiModesSolver::solve_sample(std::int64_t j) const
{
    const DGSpace& space = *disc_.space;
    const auto& space_ptr = disc_.space;
    const TriMesh& mesh = *disc_.mesh;
    SampleModes out;
    out.index = j;

    auto t0 = Clock::now();
    const MediaSample media = sample_media(mesh, config_.noise, j);
    out.media_fingerprint = media.fingerprint();
    ModeSources src;
    src.volume = source_at_volume_points(config_.source, mesh, media, config_.epsilon, config_.k);
    out.counters.rhs_seconds += seconds_since(t0);

    DGFunction u_prev(space_ptr);
    DGFunction u_n(space_ptr);
    std::vector<Complex> b(space.ndof()), work(space.ndof());
    for (int n = 0; n < config_.modes; ++n) {
        t0 = Clock::now();
        assemble_rhs(space, src.volume, src.boundary, b);
        out.counters.rhs_seconds += seconds_since(t0);

        if (options_.refactor_every_solve) {
            t0 = Clock::now();
            const LUFactors fresh = lu_factorize(matrix_.view(), symbolic_);
            out.counters.factor_seconds += seconds_since(t0);
            ++out.counters.factorizations;
            t0 = Clock::now();
            lu_solve(fresh, b, u_n.coeffs(), work);
        } else {
            t0 = Clock::now();
            lu_solve(factors_, b, u_n.coeffs(), work);
        }
        out.counters.solve_seconds += seconds_since(t0);
        ++out.counters.solves;

        for (const Complex& c : u_n.coeffs()) {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
                throw std::runtime_error("non-finite solution in sample " + std::to_string(j) + ", mode " +
                                         std::to_string(n));
            }
        }
        out.modes.emplace_back(u_n.coeffs().begin(), u_n.coeffs().end());

        if (n + 1 < config_.modes) {
            t0 = Clock::now();
            src = mode_rhs_update(u_n, u_prev, media, config_.k);
            out.counters.rhs_seconds += seconds_since(t0);
            std::swap(u_prev, u_n);
        }
    }
    return out;
}

RunResult run_multimodes(const RunConfig& config, const MultiModesOptions& options)
{
    return run_multimodes(Discretization::build(config), config, options);
}

RunResult run_multimodes(const Discretization& disc, const RunConfig& config, const MultiModesOptions& options)
{
    const auto t_start = Clock::now();
    MultiModesSolver solver(disc, config, options);
    const auto& space = disc.space;
    const int N = config.modes;
    const int M = config.samples;
    const std::size_t ndof = space->ndof();

    const NormGram l2_gram(*space, NormGram::Kind::l2, config.penalties);
    const NormGram h1_gram(*space, NormGram::Kind::broken_h1, config.penalties);

    RunResult result;
    result.epsilon = config.epsilon;
    result.counters = solver.setup_counters();
    std::vector<std::vector<Complex>> phi_sum(static_cast<std::size_t>(N), std::vector<Complex>(ndof));
    std::vector<Complex> psi_sum(ndof);
    std::vector<double> l2_sum(static_cast<std::size_t>(N), 0.0), h1_sum(static_cast<std::size_t>(N), 0.0);
    result.media_fingerprints.reserve(static_cast<std::size_t>(M));

    std::vector<MultiModesSolver::SampleModes> block(kSampleBlock);
    std::vector<std::vector<double>> block_l2(kSampleBlock), block_h1(kSampleBlock);
    for (int start = 0; start < M; start += kSampleBlock) {
        const int count = std::min(kSampleBlock, M - start);
        auto body = [&](int b) {
            block[b] = solver.solve_sample(start + b);
            block_l2[b].assign(static_cast<std::size_t>(N), 0.0);
            block_h1[b].assign(static_cast<std::size_t>(N), 0.0);
            for (int n = 0; n < N; ++n) {
                block_l2[b][n] = l2_gram.norm(block[b].modes[n]);
                block_h1[b][n] = h1_gram.norm(block[b].modes[n]);
            }
        };
        detail::run_indexed(count, options.execution == Execution::parallel, body);

        // Reduction strictly in sample-index order.
        const auto t0 = Clock::now();
        for (int b = 0; b < count; ++b) {
            const auto& s = block[b];
            double weight = 1.0;
            std::vector<Complex> u_total(ndof);
            for (int n = 0; n < N; ++n) {
                const auto& u = s.modes[n];
                for (std::size_t i = 0; i < ndof; ++i) {
                    phi_sum[n][i] += u[i];
                    u_total[i] += weight * u[i];
                }
                l2_sum[n] += block_l2[b][n];
                h1_sum[n] += block_h1[b][n];
                weight *= config.epsilon;
            }
            for (std::size_t i = 0; i < ndof; ++i) psi_sum[i] += u_total[i];
            if (s.index == 0) result.first_sample = DGFunction(space, std::move(u_total));
            result.media_fingerprints.push_back(s.media_fingerprint);
            add_counters(result.counters, s.counters);
            const int done = start + b + 1;
            if (std::find(options.checkpoints.begin(), options.checkpoints.end(), done) != options.checkpoints.end()) {
                PhiCheckpoint cp;
                cp.samples = done;
                const double inv = 1.0 / static_cast<double>(done);
                for (int n = 0; n < N; ++n) {
                    std::vector<Complex> mean(phi_sum[n]);
                    for (auto& c : mean) c *= inv;
                    cp.phi.emplace_back(space, std::move(mean));
                }
                result.checkpoints.push_back(std::move(cp));
            }
        }
        result.counters.reduction_seconds += std::chrono::duration<double>(Clock::now() - t0).count();
    }

    const double inv_m = 1.0 / static_cast<double>(M);
    for (auto& c : psi_sum) c *= inv_m;
    result.psi = DGFunction(space, std::move(psi_sum));
    for (int n = 0; n < N; ++n) {
        for (auto& c : phi_sum[n]) c *= inv_m;
        result.phi.emplace_back(space, std::move(phi_sum[n]));
        result.mode_l2.push_back(l2_sum[n] * inv_m);
        result.mode_h1.push_back(h1_sum[n] * inv_m);
    }
    result.decay_ratio.assign(static_cast<std::size_t>(N), 0.0);
    for (int n = 1; n < N; ++n) {
        result.decay_ratio[n] =
            result.mode_l2[n - 1] > 0.0 ? config.epsilon * result.mode_l2[n] / result.mode_l2[n - 1] : 0.0;
    }
    result.sigma_hat = 4.0 * config.epsilon * std::sqrt(config.c0_hint) * (1.0 + config.k);
    result.counters.total_seconds = seconds_since(t_start);
    return result;
}

}  // namespace mcipdg
