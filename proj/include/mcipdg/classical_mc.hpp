#pragma once

#include "mcipdg/dg_space.hpp"
#include "mcipdg/multimodes.hpp"

#include <cstdint>
#include <vector>

namespace mcipdg {

/// Per-sample variable-coefficient Monte Carlo: one fresh factorization per sample.
struct BaselineResult {
    DGFunction psi_tilde;      // (1/M) sum_j u(omega_j)
    DGFunction first_sample;   // u(omega_0)
    std::vector<double> sample_seconds;
    SolverCounters counters;
    std::vector<std::uint64_t> media_fingerprints;
};

/// The mode count in `config` is ignored. The fill-reducing order is computed
/// once and shared by every sample's numeric factorization.
BaselineResult run_classical(const RunConfig& config, Execution execution = Execution::parallel);
BaselineResult run_classical(const Discretization& disc, const RunConfig& config,
                             Execution execution = Execution::parallel);

struct FieldDifference {
    double abs_l2 = 0.0;
    double rel_l2 = 0.0;  // infinite when ||b|| = 0 and a != b
};

/// ||a - b||_{L2} and its ratio to ||b||_{L2}, with b the reference.
FieldDifference compare_fields(const DGFunction& a, const DGFunction& b);

/// ||f||_{L2(D)} through the mass matrix.
double l2_norm(const DGFunction& f);

}  // namespace mcipdg
