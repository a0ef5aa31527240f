#include "mcipdg/penalties.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mcipdg {

PenaltySet PenaltySet::defaults(int degree)
{
    PenaltySet p;
    p.gamma0 = 10.0;
    p.beta1 = 0.1;
    p.gamma.assign(static_cast<std::size_t>(degree > 0 ? degree : 1), 0.1);
    return p;
}

double PenaltySet::gamma_j(int j) const
{
    if (j == 0) return gamma0;
    if (j < 0 || j > static_cast<int>(gamma.size())) return 0.0;
    return gamma[static_cast<std::size_t>(j - 1)];
}

void PenaltySet::validate(int degree) const
{
    if (!(std::isfinite(gamma0) && gamma0 > 0.0)) {
        throw std::invalid_argument("penalty gamma0 must be finite and > 0");
    }
    if (!(std::isfinite(beta1) && beta1 >= 0.0)) {
        throw std::invalid_argument("penalty beta1 must be finite and >= 0");
    }
    if (static_cast<int>(gamma.size()) < degree) {
        throw std::invalid_argument("penalty set provides gamma_j for j <= " + std::to_string(gamma.size()) +
                                    " but degree is " + std::to_string(degree));
    }
    for (std::size_t j = 0; j < gamma.size(); ++j) {
        if (!(std::isfinite(gamma[j]) && gamma[j] >= 0.0)) {
            throw std::invalid_argument("penalty gamma" + std::to_string(j + 1) + " must be finite and >= 0");
        }
    }
}

PenaltySet PenaltySet::scaled(double factor) const
{
    PenaltySet p = *this;
    p.gamma0 *= factor;
    p.beta1 *= factor;
    for (auto& g : p.gamma) g *= factor;
    return p;
}

}  // namespace mcipdg
