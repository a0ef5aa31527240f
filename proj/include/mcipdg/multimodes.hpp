#pragma once

#include "mcipdg/assembly.hpp"
#include "mcipdg/dg_space.hpp"
#include "mcipdg/linalg.hpp"
#include "mcipdg/mesh.hpp"
#include "mcipdg/randomness.hpp"
#include "mcipdg/sources.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace mcipdg {

struct RunConfig {
    double k = 1.0;
    double epsilon = 0.0;
    int modes = 1;    // N
    int samples = 1;  // M
    int n = 10;       // mesh subdivisions, h = 1/n
    int degree = 1;   // r
    PenaltySet penalties = PenaltySet::defaults(1);
    NoiseSpec noise;
    SourceSpec source;
    double c0_hint = 1.0;
    QuadratureOptions quadrature;

    /// Throws std::invalid_argument on k <= 0, epsilon outside [0,1), N, M, n < 1,
    /// invalid penalties / noise, or C0_hint <= 0.
    void validate() const;
};

/// Wall-clock seconds per phase plus operation counts. Seconds inside the
/// parallel sample loop are summed over workers.
struct SolverCounters {
    long factorizations = 0;
    long solves = 0;
    double assembly_seconds = 0.0;
    double factor_seconds = 0.0;
    double solve_seconds = 0.0;
    double rhs_seconds = 0.0;
    double reduction_seconds = 0.0;
    double total_seconds = 0.0;
};

/// Mesh, broken space and the coefficient-independent part of the form.
struct Discretization {
    std::shared_ptr<const TriMesh> mesh;
    std::shared_ptr<const DGSpace> space;
    std::shared_ptr<const Assembler> assembler;

    static Discretization build(int n, int degree, const PenaltySet& penalties, QuadratureOptions quad = {});
    static Discretization build(const RunConfig& config);
};

/// Mode means over the first `samples` samples of a longer run.
struct PhiCheckpoint {
    int samples = 0;
    std::vector<DGFunction> phi;
};

struct RunResult {
    double epsilon = 0.0;
    DGFunction psi;                // Psi_N = (1/M) sum_j U_N(omega_j)
    std::vector<DGFunction> phi;   // Phi_n = (1/M) sum_j u_n(omega_j), n = 0..N-1
    DGFunction first_sample;       // U_N(omega_0)
    std::vector<double> mode_l2;   // sample mean of ||u_n||_{L2}
    std::vector<double> mode_h1;   // sample mean of the broken H1 norm of u_n
    std::vector<double> decay_ratio;  // epsilon * mode_l2[n] / mode_l2[n-1]; entry 0 unused (0)
    double sigma_hat = 0.0;        // 4 epsilon sqrt(C0_hint) (1 + k); reported, never used to gate
    SolverCounters counters;
    std::vector<std::uint64_t> media_fingerprints;
    std::vector<PhiCheckpoint> checkpoints;

    /// sum_{n < modes} epsilon^n Phi_n, i.e. Psi for a smaller mode count.
    DGFunction truncated(int modes) const;
};

struct MultiModesOptions {
    Execution execution = Execution::parallel;
    /// Refactorize the (unchanged) constant matrix before every solve; used to
    /// check that reusing one factorization changes nothing.
    bool refactor_every_solve = false;
    /// Sample counts at which the running mode means are recorded. A prefix
    /// mean equals the mean of a separate run with that M, bit for bit.
    std::vector<int> checkpoints;
};

/// S_{n+1} and Q_{n+1} at quadrature points.
struct ModeSources {
    std::vector<Complex> volume;    // [element * nq + q]
    std::vector<Complex> boundary;  // [boundary_index * nqe + q]
};

/// S_{n+1} = 2k^2 eta u_n + k^2 eta^2 u_{n-1} at volume points,
/// Q_{n+1} = -i k eta u_n at boundary points.
ModeSources mode_rhs_update(const DGFunction& u_n, const DGFunction& u_prev, const MediaSample& media, double k);

/// Coefficientwise arithmetic mean, summed in list order.
DGFunction sample_average(std::span<const DGFunction> samples);

/// One shared factorization of the constant-coefficient matrix and the per-sample
/// mode recursion on top of it.
class MultiModesSolver {
public:
    MultiModesSolver(Discretization disc, RunConfig config, MultiModesOptions options = {});

    struct SampleModes {
        std::int64_t index = 0;
        std::vector<std::vector<Complex>> modes;  // u_0 .. u_{N-1}
        std::uint64_t media_fingerprint = 0;
        SolverCounters counters;
    };

    /// All N modes of sample j. Safe to call concurrently.
    SampleModes solve_sample(std::int64_t j) const;

    const Discretization& discretization() const { return disc_; }
    const RunConfig& config() const { return config_; }
    const LUFactors& factors() const { return factors_; }
    const SystemMatrix& matrix() const { return matrix_; }
    const SolverCounters& setup_counters() const { return setup_; }

private:
    Discretization disc_;
    RunConfig config_;
    MultiModesOptions options_;
    SystemMatrix matrix_;
    SymbolicLU symbolic_;
    LUFactors factors_;
    SolverCounters setup_;
};

RunResult run_multimodes(const RunConfig& config, const MultiModesOptions& options = {});
RunResult run_multimodes(const Discretization& disc, const RunConfig& config, const MultiModesOptions& options = {});

/// Samples are processed in blocks of this size; within a block they run
/// concurrently, and blocks are reduced in sample-index order.
inline constexpr int kSampleBlock = 16;

}  // namespace mcipdg
