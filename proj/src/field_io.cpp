#include "mcipdg/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace mcipdg {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const { std::fclose(f); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_for_write(const std::string& path)
{
    File f(std::fopen(path.c_str(), "w"));
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    return f;
}

void check_write(const File& f, const std::string& path)
{
    if (std::ferror(f.get())) throw std::runtime_error("write error on '" + path + "'");
}

}  // namespace

void write_field_csv(const DGFunction& f, const std::string& path)
{
    const TriMesh& mesh = f.space().mesh();
    const std::array<Point2, 3> corners{Point2{0.0, 0.0}, Point2{1.0, 0.0}, Point2{0.0, 1.0}};
    File out = open_for_write(path);
    std::fprintf(out.get(), "x,y,element,re,im,abs\n");
    for (int e = 0; e < f.space().num_elements(); ++e) {
        const auto vals = evaluate(f, e, corners);
        for (int v = 0; v < 3; ++v) {
            const Point2 p = mesh.vertices()[mesh.elements()[e].vertices[v]];
            std::fprintf(out.get(), "%.17g,%.17g,%d,%.17g,%.17g,%.17g\n", p.x, p.y, e, vals[v].real(),
                         vals[v].imag(), std::abs(vals[v]));
        }
    }
    check_write(out, path);
}

std::vector<FieldRow> read_field_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != "x,y,element,re,im,abs") {
        throw std::runtime_error("'" + path + "' is not a field dump");
    }
    std::vector<FieldRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        FieldRow r;
        double re = 0.0, im = 0.0, mag = 0.0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%d,%lf,%lf,%lf", &r.x, &r.y, &r.element, &re, &im, &mag) != 6) {
            throw std::runtime_error("malformed field row in '" + path + "': " + line);
        }
        r.value = Complex(re, im);
        rows.push_back(r);
    }
    return rows;
}

DGFunction field_from_rows(std::shared_ptr<const DGSpace> space, const std::vector<FieldRow>& rows)
{
    if (space->degree() != 1) throw std::invalid_argument("field_from_rows: only degree-1 spaces are determined by vertex values");
    if (rows.size() != 3 * static_cast<std::size_t>(space->num_elements())) {
        throw std::invalid_argument("field_from_rows: row count does not match the mesh");
    }
    DGFunction f(space);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const int e = static_cast<int>(i / 3);
        if (rows[i].element != e) throw std::invalid_argument("field_from_rows: rows out of element order");
        f.coeffs()[space->dof(e, static_cast<int>(i % 3))] = rows[i].value;
    }
    return f;
}

std::vector<SectionRow> cross_section(const DGFunction& f, int samples)
{
    if (samples < 2) throw std::invalid_argument("cross_section: need at least 2 samples");
    std::vector<SectionRow> rows(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        SectionRow& r = rows[i];
        r.t = static_cast<double>(i) / (samples - 1);
        r.x = -0.5 + r.t;
        r.y = r.x;
        r.value = evaluate_at(f, {r.x, r.y});
    }
    return rows;
}

void write_cross_section_csv(const std::vector<SectionRow>& rows, const std::string& path)
{
    File out = open_for_write(path);
    std::fprintf(out.get(), "t,x,y,re,im,abs\n");
    for (const auto& r : rows) {
        std::fprintf(out.get(), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.x, r.y, r.value.real(),
                     r.value.imag(), std::abs(r.value));
    }
    check_write(out, path);
}

int count_zero_crossings(const std::vector<SectionRow>& rows)
{
    int crossings = 0;
    int last_sign = 0;
    for (const auto& r : rows) {
        const double v = r.value.real();
        const int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
        if (s == 0) continue;
        if (last_sign != 0 && s != last_sign) ++crossings;
        last_sign = s;
    }
    return crossings;
}

void write_media_snapshot_csv(const TriMesh& mesh, const NoiseSpec& spec, double epsilon, std::int64_t samples,
                              const std::string& path)
{
    if (samples < 1) throw std::invalid_argument("media snapshot: need at least one sample");
    const auto mean = mean_alpha_per_element(mesh, spec, epsilon, samples);
    File out = open_for_write(path);
    std::fprintf(out.get(), "element,x,y,mean_alpha\n");
    for (std::size_t e = 0; e < mean.size(); ++e) {
        const Point2 c = mesh.elements()[e].map({1.0 / 3.0, 1.0 / 3.0});
        std::fprintf(out.get(), "%zu,%.17g,%.17g,%.17g\n", e, c.x, c.y, mean[e]);
    }
    check_write(out, path);
}

}  // namespace mcipdg
