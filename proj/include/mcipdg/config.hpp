#pragma once

#include "mcipdg/multimodes.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mcipdg {

enum class StudyKind { manufactured_convergence, m_scaling, modes_sweep, epsilon_sweep, compare };

struct StudySpec {
    StudyKind kind = StudyKind::compare;
    std::vector<int> mesh_sizes;
    std::vector<int> m_values;
    int m_ref = 0;
    std::vector<int> n_values;  // mode counts
    std::vector<double> epsilon_values;
    int mode = 0;               // mode index tracked by m_scaling
    double theta = 0.3;         // plane-wave angle of the manufactured solution

    /// Lists must be nonempty where the kind needs them and strictly ascending.
    void validate(const RunConfig& base) const;
};

struct ConfigFile {
    RunConfig run;
    std::optional<StudySpec> study;
};

/// Flat `key = value` text; `#` starts a comment. Reals accept `a/b`.
/// Unknown keys, duplicate keys and malformed values throw std::invalid_argument
/// naming the line.
ConfigFile parse_config(const std::string& text);
ConfigFile load_config(const std::string& path);

/// Canonical text form; parse_config(echo_config(c)) reproduces c exactly.
std::string echo_config(const ConfigFile& config);

const char* study_kind_name(StudyKind kind);
StudyKind parse_study_kind(const std::string& name);

/// "%.17g".
std::string format_real(double v);

}  // namespace mcipdg
