#include "mcipdg/randomness.hpp"

#include "mcipdg/sparse.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mcipdg {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo)
{
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key)
{
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return ctr;
}

void NoiseSpec::validate() const
{
    if (!(std::isfinite(lower) && std::isfinite(upper)) || lower > upper) {
        throw std::invalid_argument("noise interval must be finite with lower <= upper");
    }
}

double keyed_uniform(std::uint64_t seed, std::uint64_t sample, QuadKey key)
{
    const std::array<std::uint32_t, 4> ctr{
        static_cast<std::uint32_t>(sample), static_cast<std::uint32_t>(sample >> 32),
        static_cast<std::uint32_t>(key.index),
        (static_cast<std::uint32_t>(key.q) << 1) | static_cast<std::uint32_t>(key.site)};
    const auto out = philox4x32(ctr, {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
    const std::uint64_t bits = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

MediaSample::MediaSample(std::int64_t sample_index, NoiseSpec spec, int volume_points_per_element,
                         int points_per_edge, std::vector<double> volume, std::vector<double> boundary)
    : sample_index_(sample_index), spec_(spec), nq_(volume_points_per_element), nqe_(points_per_edge),
      volume_(std::move(volume)), boundary_(std::move(boundary))
{
}

double MediaSample::eta(QuadKey key) const
{
    if (key.site == Site::volume) {
        if (key.q < 0 || key.q >= nq_ || key.index < 0 ||
            static_cast<std::size_t>(key.index) * nq_ >= volume_.size()) {
            throw std::out_of_range("MediaSample: unknown volume key");
        }
        return volume_[static_cast<std::size_t>(key.index) * nq_ + key.q];
    }
    if (key.q < 0 || key.q >= nqe_ || key.index < 0 ||
        static_cast<std::size_t>(key.index) * nqe_ >= boundary_.size()) {
        throw std::out_of_range("MediaSample: unknown boundary key");
    }
    return boundary_[static_cast<std::size_t>(key.index) * nqe_ + key.q];
}

std::uint64_t MediaSample::fingerprint() const
{
    std::uint64_t h = fnv1a(volume_.data(), volume_.size() * sizeof(double));
    return fnv1a(boundary_.data(), boundary_.size() * sizeof(double), h);
}

MediaSample sample_media(const TriMesh& mesh, const NoiseSpec& spec, std::int64_t sample_index)
{
    spec.validate();
    if (sample_index < 0) throw std::invalid_argument("sample_media: sample index must be >= 0");
    const int nq = mesh.volume_points_per_element();
    const int nqe = mesh.points_per_edge();
    const int ne = static_cast<int>(mesh.elements().size());
    const int nb = static_cast<int>(mesh.boundary_edges().size());
    const double width = spec.upper - spec.lower;
    const auto j = static_cast<std::uint64_t>(sample_index);

    std::vector<double> volume(static_cast<std::size_t>(ne) * nq);
    for (int e = 0; e < ne; ++e) {
        for (int q = 0; q < nq; ++q) {
            volume[static_cast<std::size_t>(e) * nq + q] =
                spec.lower + width * keyed_uniform(spec.seed, j, {Site::volume, e, q});
        }
    }
    std::vector<double> boundary(static_cast<std::size_t>(nb) * nqe);
    for (int b = 0; b < nb; ++b) {
        for (int q = 0; q < nqe; ++q) {
            boundary[static_cast<std::size_t>(b) * nqe + q] =
                spec.lower + width * keyed_uniform(spec.seed, j, {Site::boundary, b, q});
        }
    }
    return MediaSample(sample_index, spec, nq, nqe, std::move(volume), std::move(boundary));
}

void check_media_layout(const TriMesh& mesh, const MediaSample& media)
{
    const std::size_t nv = mesh.elements().size() * static_cast<std::size_t>(mesh.volume_points_per_element());
    const std::size_t nb = mesh.boundary_edges().size() * static_cast<std::size_t>(mesh.points_per_edge());
    if (media.volume().size() != nv || media.boundary().size() != nb ||
        media.volume_points_per_element() != mesh.volume_points_per_element() ||
        media.points_per_edge() != mesh.points_per_edge()) {
        throw std::invalid_argument("media sample does not match the mesh quadrature layout");
    }
}

double alpha_at(const MediaSample& media, double epsilon, QuadKey key)
{
    if (epsilon < 0.0) throw std::invalid_argument("alpha_at: epsilon must be >= 0");
    return 1.0 + epsilon * media.eta(key);
}

std::vector<double> mean_alpha_per_element(const TriMesh& mesh, const NoiseSpec& spec, double epsilon,
                                           std::int64_t samples)
{
    const int nq = mesh.volume_points_per_element();
    std::vector<double> mean(mesh.elements().size(), 0.0);
    for (std::int64_t j = 0; j < samples; ++j) {
        const MediaSample m = sample_media(mesh, spec, j);
        for (std::size_t e = 0; e < mean.size(); ++e) {
            double s = 0.0;
            for (int q = 0; q < nq; ++q) s += 1.0 + epsilon * m.volume()[e * nq + q];
            mean[e] += s / nq;
        }
    }
    for (auto& v : mean) v /= static_cast<double>(samples);
    return mean;
}

}  // namespace mcipdg
