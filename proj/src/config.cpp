#include "mcipdg/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mcipdg {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& raw)
{
    const std::string s = trim(raw);
    const auto slash = s.find('/');
    if (slash != std::string::npos) return parse_real(s.substr(0, slash)) / parse_real(s.substr(slash + 1));
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw std::invalid_argument("not a real number: '" + s + "'");
    return v;
}

long long parse_integer(const std::string& raw)
{
    const std::string s = trim(raw);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw std::invalid_argument("not an integer: '" + s + "'");
    }
    return v;
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) throw std::invalid_argument("empty list entry in '" + s + "'");
        out.push_back(item);
    }
    return out;
}

template <class T>
bool strictly_ascending(const std::vector<T>& v)
{
    return std::adjacent_find(v.begin(), v.end(), [](const T& a, const T& b) { return !(a < b); }) == v.end();
}

SourceSpec parse_source(const std::string& s)
{
    if (s == "radial_wave") return SourceSpec::radial_wave();
    if (s == "constant") return SourceSpec::constant(1.0);
    if (s.rfind("constant:", 0) == 0) return SourceSpec::constant(parse_real(s.substr(9)));
    throw std::invalid_argument("unknown source '" + s + "' (constant, constant:<v>, radial_wave)");
}

}  // namespace

std::string format_real(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* study_kind_name(StudyKind kind)
{
    switch (kind) {
    case StudyKind::manufactured_convergence: return "manufactured_convergence";
    case StudyKind::m_scaling: return "m_scaling";
    case StudyKind::modes_sweep: return "modes_sweep";
    case StudyKind::epsilon_sweep: return "epsilon_sweep";
    case StudyKind::compare: return "compare";
    }
    return "?";
}

StudyKind parse_study_kind(const std::string& name)
{
    for (auto k : {StudyKind::manufactured_convergence, StudyKind::m_scaling, StudyKind::modes_sweep,
                   StudyKind::epsilon_sweep, StudyKind::compare}) {
        if (name == study_kind_name(k)) return k;
    }
    throw std::invalid_argument("unknown study kind '" + name + "'");
}

void StudySpec::validate(const RunConfig& base) const
{
    auto need = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("study: ") + what);
    };
    need(strictly_ascending(mesh_sizes), "mesh_sizes must be strictly ascending");
    need(strictly_ascending(m_values), "M_values must be strictly ascending");
    need(strictly_ascending(n_values), "N_values must be strictly ascending");
    need(strictly_ascending(epsilon_values), "epsilon_values must be strictly ascending");
    for (int v : mesh_sizes) need(v >= 1, "mesh sizes must be >= 1");
    for (int v : m_values) need(v >= 1, "M values must be >= 1");
    for (int v : n_values) need(v >= 1, "N values must be >= 1");
    for (double v : epsilon_values) need(v >= 0.0 && v < 1.0, "epsilon values must lie in [0, 1)");
    switch (kind) {
    case StudyKind::manufactured_convergence:
        need(mesh_sizes.size() >= 2, "manufactured_convergence needs at least two mesh_sizes");
        break;
    case StudyKind::m_scaling:
        need(m_values.size() >= 2, "m_scaling needs at least two M_values");
        need(m_ref > m_values.back(), "M_ref must exceed every M value");
        need(mode >= 0, "mode must be >= 0");
        break;
    case StudyKind::modes_sweep:
        need(!n_values.empty(), "modes_sweep needs N_values");
        break;
    case StudyKind::epsilon_sweep:
    case StudyKind::compare:
        need(!epsilon_values.empty(), "epsilon sweeps need epsilon_values");
        break;
    }
    (void)base;
}

ConfigFile parse_config(const std::string& text)
{
    ConfigFile out;
    RunConfig& c = out.run;
    StudySpec study;
    bool has_study = false;
    std::map<int, double> gammas;
    std::map<std::string, int> seen;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = "config line " + std::to_string(lineno) + ": ";
        if (eq == std::string::npos) throw std::invalid_argument(where + "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw std::invalid_argument(where + "empty key or value");
        if (seen[key]++) throw std::invalid_argument(where + "duplicate key '" + key + "'");
        try {
            if (key == "k") c.k = parse_real(value);
            else if (key == "epsilon") c.epsilon = parse_real(value);
            else if (key == "N") c.modes = static_cast<int>(parse_integer(value));
            else if (key == "M") c.samples = static_cast<int>(parse_integer(value));
            else if (key == "n") c.n = static_cast<int>(parse_integer(value));
            else if (key == "r") c.degree = static_cast<int>(parse_integer(value));
            else if (key == "gamma0") c.penalties.gamma0 = parse_real(value);
            else if (key.size() > 5 && key.rfind("gamma", 0) == 0) {
                const long long j = parse_integer(key.substr(5));
                if (j < 1 || j > 64) throw std::invalid_argument("penalty index out of range");
                gammas[static_cast<int>(j)] = parse_real(value);
            } else if (key == "beta1") {
                c.penalties.beta1 = parse_real(value);
            } else if (key == "seed") {
                const long long s = parse_integer(value);
                if (s < 0) throw std::invalid_argument("seed must be >= 0");
                c.noise.seed = static_cast<std::uint64_t>(s);
            } else if (key == "eta_min") c.noise.lower = parse_real(value);
            else if (key == "eta_max") c.noise.upper = parse_real(value);
            else if (key == "source") c.source = parse_source(value);
            else if (key == "C0_hint") c.c0_hint = parse_real(value);
            else if (key == "study") {
                study.kind = parse_study_kind(value);
                has_study = true;
            } else if (key == "mesh_sizes") {
                for (const auto& s : split_list(value)) study.mesh_sizes.push_back(static_cast<int>(parse_integer(s)));
            } else if (key == "M_values") {
                for (const auto& s : split_list(value)) study.m_values.push_back(static_cast<int>(parse_integer(s)));
            } else if (key == "N_values") {
                for (const auto& s : split_list(value)) study.n_values.push_back(static_cast<int>(parse_integer(s)));
            } else if (key == "epsilon_values") {
                for (const auto& s : split_list(value)) study.epsilon_values.push_back(parse_real(s));
            } else if (key == "M_ref") study.m_ref = static_cast<int>(parse_integer(value));
            else if (key == "mode") study.mode = static_cast<int>(parse_integer(value));
            else if (key == "theta") study.theta = parse_real(value);
            else throw std::invalid_argument("unknown key '" + key + "'");
        } catch (const std::invalid_argument& e) {
            const std::string msg = e.what();
            throw std::invalid_argument(msg.rfind("config line", 0) == 0 ? msg : where + msg);
        }
    }

    // gamma_j defaults to 0.1 for every degree not given explicitly.
    const int top = std::max(c.degree, gammas.empty() ? 0 : gammas.rbegin()->first);
    const PenaltySet defaults = PenaltySet::defaults(std::max(1, top));
    c.penalties.gamma = defaults.gamma;
    for (const auto& [j, v] : gammas) c.penalties.gamma[static_cast<std::size_t>(j - 1)] = v;

    c.validate();
    if (has_study) {
        study.validate(c);
        out.study = study;
    } else if (seen.count("mesh_sizes") || seen.count("M_values") || seen.count("N_values") ||
               seen.count("epsilon_values") || seen.count("M_ref") || seen.count("mode") || seen.count("theta")) {
        throw std::invalid_argument("study parameters given without 'study = <kind>'");
    }
    return out;
}

ConfigFile load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string echo_config(const ConfigFile& config)
{
    const RunConfig& c = config.run;
    std::ostringstream o;
    o << "k = " << format_real(c.k) << '\n';
    o << "epsilon = " << format_real(c.epsilon) << '\n';
    o << "N = " << c.modes << '\n';
    o << "M = " << c.samples << '\n';
    o << "n = " << c.n << '\n';
    o << "r = " << c.degree << '\n';
    o << "gamma0 = " << format_real(c.penalties.gamma0) << '\n';
    for (std::size_t j = 0; j < c.penalties.gamma.size(); ++j) {
        o << "gamma" << j + 1 << " = " << format_real(c.penalties.gamma[j]) << '\n';
    }
    o << "beta1 = " << format_real(c.penalties.beta1) << '\n';
    o << "seed = " << c.noise.seed << '\n';
    o << "eta_min = " << format_real(c.noise.lower) << '\n';
    o << "eta_max = " << format_real(c.noise.upper) << '\n';
    if (c.source.kind == SourceSpec::Kind::radial_wave) {
        o << "source = radial_wave\n";
    } else {
        if (c.source.value.imag() != 0.0) throw std::invalid_argument("echo_config: complex constant sources cannot be written");
        o << "source = constant:" << format_real(c.source.value.real()) << '\n';
    }
    o << "C0_hint = " << format_real(c.c0_hint) << '\n';
    if (config.study) {
        const StudySpec& s = *config.study;
        auto list = [&o](const char* key, const auto& v, auto fmt) {
            if (v.empty()) return;
            o << key << " = ";
            for (std::size_t i = 0; i < v.size(); ++i) o << (i ? ", " : "") << fmt(v[i]);
            o << '\n';
        };
        auto as_int = [](int v) { return std::to_string(v); };
        o << "study = " << study_kind_name(s.kind) << '\n';
        list("mesh_sizes", s.mesh_sizes, as_int);
        list("M_values", s.m_values, as_int);
        list("N_values", s.n_values, as_int);
        list("epsilon_values", s.epsilon_values, [](double v) { return format_real(v); });
        if (s.m_ref > 0) o << "M_ref = " << s.m_ref << '\n';
        o << "mode = " << s.mode << '\n';
        o << "theta = " << format_real(s.theta) << '\n';
    }
    return o.str();
}

}  // namespace mcipdg
