#include "mcipdg/sources.hpp"

#include <cmath>

namespace mcipdg {

Complex radial_wave(double k, double alpha, Point2 x)
{
    const double rho = std::hypot(x.x, x.y);
    if (rho < 1e-8) return k * alpha;
    return std::sin(k * alpha * rho) / rho;
}

Complex eval_source(const SourceSpec& spec, double alpha, double k, Point2 x)
{
    switch (spec.kind) {
    case SourceSpec::Kind::constant:
        return spec.value;
    case SourceSpec::Kind::radial_wave:
        return radial_wave(k, alpha, x);
    }
    return 0.0;
}

Complex eval_source(const SourceSpec& spec, const MediaSample& media, double epsilon, double k, Point2 x,
                    QuadKey key)
{
    if (spec.kind == SourceSpec::Kind::constant) return spec.value;
    return eval_source(spec, alpha_at(media, epsilon, key), k, x);
}

std::vector<Complex> source_at_volume_points(const SourceSpec& spec, const TriMesh& mesh, const MediaSample& media,
                                             double epsilon, double k)
{
    check_media_layout(mesh, media);
    const int nq = mesh.volume_points_per_element();
    const int ne = static_cast<int>(mesh.elements().size());
    std::vector<Complex> out(static_cast<std::size_t>(ne) * nq);
    const auto eta = media.volume();
    for (int e = 0; e < ne; ++e) {
        const auto pts = mesh.volume_points(e);
        for (int q = 0; q < nq; ++q) {
            const std::size_t idx = static_cast<std::size_t>(e) * nq + q;
            out[idx] = eval_source(spec, 1.0 + epsilon * eta[idx], k, pts[q]);
        }
    }
    return out;
}

}  // namespace mcipdg
