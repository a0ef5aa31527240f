#include "mcipdg/classical_mc.hpp"

#include "parallel_blocks.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mcipdg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct SampleSolution {
    std::vector<Complex> u;
    std::uint64_t media_fingerprint = 0;
    double assembly = 0.0, factor = 0.0, solve = 0.0, rhs = 0.0, total = 0.0;
};

}  // namespace

BaselineResult run_classical(const RunConfig& config, Execution execution)
{
    return run_classical(Discretization::build(config), config, execution);
}

BaselineResult run_classical(const Discretization& disc, const RunConfig& config, Execution execution)
{
    config.validate();
    const auto t_start = Clock::now();
    const DGSpace& space = *disc.space;
    const TriMesh& mesh = *disc.mesh;
    const std::size_t ndof = space.ndof();
    const int M = config.samples;

    BaselineResult result;
    auto t0 = Clock::now();
    const SystemMatrix reference = disc.assembler->constant(config.k);
    const SymbolicLU symbolic = SymbolicLU::analyze(reference.view());
    result.counters.assembly_seconds += seconds_since(t0);

    auto solve_one = [&](std::int64_t j, SystemMatrix& a) {
        SampleSolution s;
        const auto ts = Clock::now();
        auto t = Clock::now();
        const MediaSample media = sample_media(mesh, config.noise, j);
        s.media_fingerprint = media.fingerprint();
        const auto src = source_at_volume_points(config.source, mesh, media, config.epsilon, config.k);
        const std::vector<Complex> b = assemble_rhs(space, src, {});
        s.rhs = seconds_since(t);
        t = Clock::now();
        disc.assembler->variable(config.k, media, config.epsilon, a);
        s.assembly = seconds_since(t);
        t = Clock::now();
        const LUFactors f = lu_factorize(a.view(), symbolic);
        s.factor = seconds_since(t);
        t = Clock::now();
        s.u = lu_solve(f, b);
        s.solve = seconds_since(t);
        for (const Complex& c : s.u) {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
                throw std::runtime_error("non-finite baseline solution in sample " + std::to_string(j));
            }
        }
        s.total = seconds_since(ts);
        return s;
    };

    std::vector<Complex> sum(ndof);
    std::vector<SampleSolution> block(kSampleBlock);
    std::vector<SystemMatrix> scratch(kSampleBlock);
    result.sample_seconds.reserve(static_cast<std::size_t>(M));
    result.media_fingerprints.reserve(static_cast<std::size_t>(M));
    for (int start = 0; start < M; start += kSampleBlock) {
        const int count = std::min(kSampleBlock, M - start);
        detail::run_indexed(count, execution == Execution::parallel,
                            [&](int b) { block[b] = solve_one(start + b, scratch[b]); });
        t0 = Clock::now();
        for (int b = 0; b < count; ++b) {
            SampleSolution& s = block[b];
            for (std::size_t i = 0; i < ndof; ++i) sum[i] += s.u[i];
            result.sample_seconds.push_back(s.total);
            result.media_fingerprints.push_back(s.media_fingerprint);
            result.counters.assembly_seconds += s.assembly;
            result.counters.factor_seconds += s.factor;
            result.counters.solve_seconds += s.solve;
            result.counters.rhs_seconds += s.rhs;
            ++result.counters.factorizations;
            ++result.counters.solves;
            if (start + b == 0) result.first_sample = DGFunction(disc.space, std::move(s.u));
        }
        result.counters.reduction_seconds += seconds_since(t0);
    }
    const double inv_m = 1.0 / static_cast<double>(M);
    for (auto& c : sum) c *= inv_m;
    result.psi_tilde = DGFunction(disc.space, std::move(sum));
    result.counters.total_seconds = seconds_since(t_start);
    return result;
}

double l2_norm(const DGFunction& f)
{
    const NormGram gram(f.space(), NormGram::Kind::l2, PenaltySet::defaults(f.space().degree()));
    return gram.norm(f.coeffs());
}

FieldDifference compare_fields(const DGFunction& a, const DGFunction& b)
{
    if (a.space_ptr() != b.space_ptr()) throw std::invalid_argument("compare_fields: functions live on different spaces");
    const NormGram gram(a.space(), NormGram::Kind::l2, PenaltySet::defaults(a.space().degree()));
    std::vector<Complex> d(a.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.coeffs()[i] - b.coeffs()[i];
    FieldDifference out;
    out.abs_l2 = gram.norm(d);
    const double nb = gram.norm(b.coeffs());
    if (nb > 0.0) {
        out.rel_l2 = out.abs_l2 / nb;
    } else {
        out.rel_l2 = out.abs_l2 > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    return out;
}

}  // namespace mcipdg
