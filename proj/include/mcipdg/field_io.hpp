#pragma once

#include "mcipdg/dg_space.hpp"
#include "mcipdg/randomness.hpp"

#include <string>
#include <vector>

namespace mcipdg {

struct FieldRow {
    double x = 0.0, y = 0.0;
    int element = 0;
    Complex value;
};

/// `x,y,element,re,im,abs` at the three vertices of every element, in element
/// then vertex order. Coordinates repeat across elements because f is discontinuous.
void write_field_csv(const DGFunction& f, const std::string& path);
std::vector<FieldRow> read_field_csv(const std::string& path);

/// Rebuilds a degree-1 function from a vertex dump (vertex values are its nodal
/// coefficients). Throws for other degrees or a dump from a different mesh.
DGFunction field_from_rows(std::shared_ptr<const DGSpace> space, const std::vector<FieldRow>& rows);

struct SectionRow {
    double t = 0.0, x = 0.0, y = 0.0;
    Complex value;
};

/// f along the diagonal y = x, t in [0, 1] from (-0.5,-0.5) to (0.5,0.5),
/// `samples` equally spaced points (at least 2).
std::vector<SectionRow> cross_section(const DGFunction& f, int samples);
void write_cross_section_csv(const std::vector<SectionRow>& rows, const std::string& path);

/// Sign changes of the real part along a section, ignoring exact zeros.
int count_zero_crossings(const std::vector<SectionRow>& rows);

/// `element,x,y,mean_alpha`: per-element mean of alpha over `samples` media
/// samples, at element centroids.
void write_media_snapshot_csv(const TriMesh& mesh, const NoiseSpec& spec, double epsilon, std::int64_t samples,
                              const std::string& path);

}  // namespace mcipdg
