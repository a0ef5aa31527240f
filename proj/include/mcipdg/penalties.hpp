#pragma once

#include <vector>

namespace mcipdg {

/// Interior-penalty parameters, uniform over edges. The assembler multiplies
/// the penalty terms by the imaginary unit; the values here are real.
struct PenaltySet {
    double gamma0 = 10.0;
    std::vector<double> gamma{0.1};  // gamma[j-1] penalizes the jump of the j-th normal derivative
    double beta1 = 0.1;

    /// gamma0 = 10, beta1 = 0.1, gamma_j = 0.1 for j = 1..r.
    static PenaltySet defaults(int degree);

    /// gamma_j for j = 0..r (j = 0 is gamma0); zero beyond the stored range.
    double gamma_j(int j) const;

    /// Throws std::invalid_argument unless gamma0 > 0, every other entry is
    /// finite and nonnegative, and gamma covers degrees 1..r.
    void validate(int degree) const;

    PenaltySet scaled(double factor) const;
};

}  // namespace mcipdg
