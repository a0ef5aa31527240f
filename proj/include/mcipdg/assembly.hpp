#pragma once

#include "mcipdg/dg_space.hpp"
#include "mcipdg/penalties.hpp"
#include "mcipdg/randomness.hpp"
#include "mcipdg/sparse.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace mcipdg {

enum class CoefficientKind { constant, sampled };

/// Complex-symmetric IP-DG operator stored on the DG block pattern (CSC).
struct SystemMatrix {
    std::shared_ptr<const BlockPattern> pattern;
    std::vector<Complex> values;
    double k = 0.0;
    PenaltySet penalties;
    CoefficientKind kind = CoefficientKind::constant;
    double epsilon = 0.0;
    std::int64_t sample_index = -1;
    std::uint64_t media_fingerprint = 0;

    int size() const { return pattern->size(); }
    CscView<Complex> view() const { return pattern->view<Complex>(values); }
    /// Entry lookup; zero outside the pattern.
    Complex at(int row, int col) const;
    std::vector<Complex> multiply(std::span<const Complex> x) const;
};

/// The real parts of a_h split by term, each on the space's block pattern:
///   A = stiffness - k^2 * mass + i*k * boundary + i * penalty
/// where `stiffness` holds the volume gradient term and the interior-edge
/// consistency fluxes, and `penalty` holds L1 + sum_j J_j.
struct FormComponents {
    std::vector<double> stiffness;
    std::vector<double> mass;
    std::vector<double> boundary;
    std::vector<double> penalty;
};

/// Execution route for the assembly kernels. `parallel` loops over elements
/// with each element writing only its own rows; `serial_reference` is a plain
/// element-then-edge loop kept as an independent check.
enum class Execution { parallel, serial_reference };

FormComponents assemble_components(const DGSpace& space, const PenaltySet& penalties,
                                   Execution exec = Execution::parallel);

/// Holds the coefficient-independent parts of the form so that repeated
/// assembly (classical Monte Carlo) only refills the mass and boundary blocks.
class Assembler {
public:
    Assembler(std::shared_ptr<const DGSpace> space, PenaltySet penalties);

    const DGSpace& space() const { return *space_; }
    const std::shared_ptr<const DGSpace>& space_ptr() const { return space_; }
    const PenaltySet& penalties() const { return penalties_; }
    const FormComponents& components() const { return parts_; }

    SystemMatrix constant(double k) const;
    /// Mass term weighted by alpha^2 and boundary term by alpha, alpha = 1 + epsilon*eta
    /// at quadrature points. Writes into `out`, reusing its storage.
    void variable(double k, const MediaSample& media, double epsilon, SystemMatrix& out) const;
    SystemMatrix variable(double k, const MediaSample& media, double epsilon) const;

private:
    void fill(double k, const MediaSample* media, double epsilon, SystemMatrix& out) const;

    std::shared_ptr<const DGSpace> space_;
    PenaltySet penalties_;
    FormComponents parts_;
};

SystemMatrix assemble_constant(std::shared_ptr<const DGSpace> space, double k, const PenaltySet& penalties);
SystemMatrix assemble_variable(std::shared_ptr<const DGSpace> space, double k, const PenaltySet& penalties,
                               const MediaSample& media, double epsilon);

/// Load vector b_i = (S, phi_i)_D + <Q, phi_i>_{boundary}. S is laid out
/// [element * nq + q]; Q is [boundary_index * nqe + q] or empty for Q = 0.
std::vector<Complex> assemble_rhs(const DGSpace& space, std::span<const Complex> volume_data,
                                  std::span<const Complex> boundary_data);
void assemble_rhs(const DGSpace& space, std::span<const Complex> volume_data,
                  std::span<const Complex> boundary_data, std::span<Complex> out);

/// Writes "row col re im" lines (1-based indices, 17 significant digits).
void write_matrix_coordinates(const SystemMatrix& a, const std::string& path);

}  // namespace mcipdg
