#pragma once

#include "mcipdg/mesh.hpp"
#include "mcipdg/randomness.hpp"
#include "mcipdg/sparse.hpp"

#include <vector>

namespace mcipdg {

struct SourceSpec {
    enum class Kind { constant, radial_wave };
    Kind kind = Kind::constant;
    Complex value = 1.0;  // used by Kind::constant

    static SourceSpec constant(Complex v = 1.0) { return {Kind::constant, v}; }
    static SourceSpec radial_wave() { return {Kind::radial_wave, 0.0}; }
};

/// sin(k*alpha*rho)/rho with rho = |x|; below rho = 1e-8 the limit k*alpha is returned.
Complex radial_wave(double k, double alpha, Point2 x);

/// Source value with the local refractive index already known.
Complex eval_source(const SourceSpec& spec, double alpha, double k, Point2 x);

/// Source value at a quadrature point, alpha looked up from the medium.
Complex eval_source(const SourceSpec& spec, const MediaSample& media, double epsilon, double k, Point2 x,
                    QuadKey key);

/// f(omega_j, .) at every volume quadrature point, laid out [element * nq + q].
std::vector<Complex> source_at_volume_points(const SourceSpec& spec, const TriMesh& mesh, const MediaSample& media,
                                             double epsilon, double k);

}  // namespace mcipdg
