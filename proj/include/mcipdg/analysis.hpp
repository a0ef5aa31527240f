#pragma once

#include "mcipdg/classical_mc.hpp"
#include "mcipdg/config.hpp"
#include "mcipdg/field_io.hpp"
#include "mcipdg/multimodes.hpp"

#include <string>
#include <vector>

namespace mcipdg {

/// Solves the constant-coefficient problem A u = b for volume data F and
/// impedance data G given at quadrature points (G may be empty).
DGFunction solve_deterministic(const Discretization& disc, double k, std::span<const Complex> volume_data,
                               std::span<const Complex> boundary_data);

/// The epsilon = 0 solution for the configured source.
DGFunction solve_deterministic(const Discretization& disc, const RunConfig& config);

/// u(x) = exp(i k (x cos(theta) + y sin(theta))); solves the homogeneous equation.
struct PlaneWave {
    double k = 1.0;
    double theta = 0.3;
    Complex value(Point2 p) const;
    std::array<Complex, 2> gradient(Point2 p) const;
    /// Impedance data du/dnu + i k u at every boundary quadrature point.
    std::vector<Complex> impedance_data(const TriMesh& mesh) const;
};

struct ConvergenceRow {
    int n = 0;
    double h = 0.0;
    double l2_error = 0.0;
    double h1_error = 0.0;     // penalty-weighted broken H1 norm of the error
    double rel_l2_error = 0.0;
    double l2_rate = 0.0;      // against the previous row; 0 on the first
    double h1_rate = 0.0;
    double mesh_parameter = 0.0;  // k^3 h^2 / r^2
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    std::vector<std::string> warnings;
};

ConvergenceStudy run_manufactured_convergence(const RunConfig& base, const StudySpec& spec);

struct MScalingRow {
    int samples = 0;
    int batches = 0;
    double error = 0.0;         // RMS over disjoint M-sample batches of ||Phi_mode(M) - Phi_mode(M_ref)||_{L2}
    double prefix_error = 0.0;  // the same norm for the first M samples only
};

struct MScalingStudy {
    int mode = 0;
    int m_ref = 0;
    std::vector<MScalingRow> rows;
    double slope = 0.0;  // least-squares slope of log(error) vs log(M); NaN if any error is 0
    SolverCounters counters;
};

/// One run with M_ref samples. For each M the error is the root mean square over
/// up to kMaxBatches disjoint consecutive M-sample batches of that run, each
/// compared with the full M_ref mean; a single batch leaves the slope too noisy
/// when the solution operator concentrates the randomness in a few directions.
inline constexpr int kMaxBatches = 64;
MScalingStudy run_m_scaling(const RunConfig& base, const StudySpec& spec);

struct SweepRow {
    double epsilon = 0.0;
    int modes = 0;
    double abs_l2 = 0.0;
    double rel_l2 = 0.0;
};

struct SweepTiming {
    double epsilon = 0.0;
    SolverCounters multimodes;
    SolverCounters classical;
};

struct SweepStudy {
    std::vector<SweepRow> rows;
    std::vector<SweepTiming> timings;
};

/// Psi_N against the classical mean for every N in the list, at base.epsilon.
SweepStudy run_modes_sweep(const RunConfig& base, const StudySpec& spec);
/// Every epsilon in the list crossed with every N in the list (or base N if
/// the list is empty).
SweepStudy run_epsilon_sweep(const RunConfig& base, const StudySpec& spec);

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

enum class Command { solve_det, run_modes, run_classical, compare, study };

/// Runs one command and writes report.txt plus fields/, sections/ and tables/
/// under `out_dir`. Everything except report.txt is independent of timing and
/// thread count.
void run_full(const ConfigFile& config, Command command, const std::string& out_dir);

/// Number of points in exported diagonal sections.
inline constexpr int kSectionSamples = 401;

}  // namespace mcipdg
