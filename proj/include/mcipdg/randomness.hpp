#pragma once

#include "mcipdg/mesh.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace mcipdg {

/// Philox4x32-10 block function: a counter-based generator, so any draw is a
/// pure function of (key, counter).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Uniform noise on [lower, upper]. lower == upper is accepted as a degenerate
/// (constant) medium.
struct NoiseSpec {
    double lower = -1.0;
    double upper = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

enum class Site : std::uint32_t { volume = 0, boundary = 1 };

/// Quadrature-point address: (element, q) for Site::volume, (boundary edge index, q) for Site::boundary.
struct QuadKey {
    Site site = Site::volume;
    int index = 0;
    int q = 0;
};

/// Uniform in [0, 1) drawn for (seed, sample, site, index, q).
double keyed_uniform(std::uint64_t seed, std::uint64_t sample, QuadKey key);

/// One realization of eta at every volume and boundary-edge quadrature point.
class MediaSample {
public:
    MediaSample() = default;
    MediaSample(std::int64_t sample_index, NoiseSpec spec, int volume_points_per_element, int points_per_edge,
                std::vector<double> volume, std::vector<double> boundary);

    std::int64_t sample_index() const { return sample_index_; }
    const NoiseSpec& spec() const { return spec_; }
    int volume_points_per_element() const { return nq_; }
    int points_per_edge() const { return nqe_; }
    std::span<const double> volume() const { return volume_; }
    std::span<const double> boundary() const { return boundary_; }

    /// Throws std::out_of_range for an unknown key.
    double eta(QuadKey key) const;
    std::uint64_t fingerprint() const;

private:
    std::int64_t sample_index_ = 0;
    NoiseSpec spec_;
    int nq_ = 0;
    int nqe_ = 0;
    std::vector<double> volume_;    // [element * nq + q]
    std::vector<double> boundary_;  // [boundary_index * nqe + q]
};

MediaSample sample_media(const TriMesh& mesh, const NoiseSpec& spec, std::int64_t sample_index);

/// Throws std::invalid_argument if the sample was not drawn on this mesh's quadrature layout.
void check_media_layout(const TriMesh& mesh, const MediaSample& media);

/// alpha = 1 + epsilon * eta at one quadrature point.
double alpha_at(const MediaSample& media, double epsilon, QuadKey key);

/// Elementwise mean of alpha over a set of samples' volume points, one value
/// per element (snapshot of the average medium).
std::vector<double> mean_alpha_per_element(const TriMesh& mesh, const NoiseSpec& spec, double epsilon,
                                           std::int64_t samples);

}  // namespace mcipdg
