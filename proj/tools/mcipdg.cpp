#include "mcipdg/analysis.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>

namespace {

struct Common {
    std::string config;
    std::string out;
    int threads = 0;
};

void apply_threads(int threads)
{
    if (threads > 0) omp_set_num_threads(threads);
}

void mesh_info(const Common& c, int n_override)
{
    mcipdg::RunConfig cfg;
    if (!c.config.empty()) cfg = mcipdg::load_config(c.config).run;
    if (n_override > 0) cfg.n = n_override;
    const mcipdg::TriMesh mesh = mcipdg::build_uniform_mesh(cfg.n, cfg.quadrature);
    std::printf("n=%d\nh=%.17g\nelements=%zu\nvertices=%zu\nedges=%zu\ninterior_edges=%zu\nboundary_edges=%zu\n", cfg.n,
                mesh.h(), mesh.elements().size(), mesh.vertices().size(), mesh.edges().size(),
                mesh.num_interior_edges(), mesh.boundary_edges().size());
    if (c.out.empty()) return;
    std::filesystem::create_directories(c.out);
    const std::filesystem::path root(c.out);
    std::unique_ptr<std::FILE, int (*)(std::FILE*)> v(std::fopen((root / "vertices.csv").c_str(), "w"), std::fclose);
    std::unique_ptr<std::FILE, int (*)(std::FILE*)> e(std::fopen((root / "elements.csv").c_str(), "w"), std::fclose);
    if (!v || !e) throw std::runtime_error("cannot write mesh CSV files under '" + c.out + "'");
    std::fprintf(v.get(), "vertex,x,y\n");
    for (std::size_t i = 0; i < mesh.vertices().size(); ++i) {
        std::fprintf(v.get(), "%zu,%.17g,%.17g\n", i, mesh.vertices()[i].x, mesh.vertices()[i].y);
    }
    std::fprintf(e.get(), "element,v0,v1,v2,area\n");
    for (std::size_t i = 0; i < mesh.elements().size(); ++i) {
        const auto& el = mesh.elements()[i];
        std::fprintf(e.get(), "%zu,%d,%d,%d,%.17g\n", i, el.vertices[0], el.vertices[1], el.vertices[2], el.area);
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Monte Carlo interior-penalty DG solver for the Helmholtz equation in weakly random media"};
    app.require_subcommand(1);

    Common common;
    int mesh_n = 0;
    auto add_common = [&common](CLI::App* sub, bool needs_config) {
        auto* cfg = sub->add_option("--config", common.config, "key = value configuration file");
        if (needs_config) cfg->required()->check(CLI::ExistingFile);
        auto* out = sub->add_option("--out", common.out, "output directory");
        if (needs_config) out->required();
        sub->add_option("--threads", common.threads, "worker threads (affects speed only)")->check(CLI::NonNegativeNumber);
    };

    auto* info = app.add_subcommand("mesh-info", "print mesh counts; with --out also dump vertices and elements");
    add_common(info, false);
    info->add_option("--n", mesh_n, "subdivisions per side (overrides the config)")->check(CLI::PositiveNumber);

    const std::pair<const char*, mcipdg::Command> commands[] = {
        {"solve-det", mcipdg::Command::solve_det},
        {"run-modes", mcipdg::Command::run_modes},
        {"run-classical", mcipdg::Command::run_classical},
        {"compare", mcipdg::Command::compare},
        {"study", mcipdg::Command::study},
    };
    const char* descriptions[] = {
        "deterministic solve with epsilon = 0",
        "multi-modes Monte Carlo with one shared factorization",
        "classical Monte Carlo with one factorization per sample",
        "both methods on common random numbers, with the error table",
        "run the study named by 'study = <kind>' in the config",
    };
    std::vector<std::pair<CLI::App*, mcipdg::Command>> runners;
    for (std::size_t i = 0; i < std::size(commands); ++i) {
        auto* sub = app.add_subcommand(commands[i].first, descriptions[i]);
        add_common(sub, true);
        runners.emplace_back(sub, commands[i].second);
    }

    CLI11_PARSE(app, argc, argv);
    try {
        apply_threads(common.threads);
        if (info->parsed()) {
            mesh_info(common, mesh_n);
            return 0;
        }
        for (const auto& [sub, command] : runners) {
            if (!sub->parsed()) continue;
            const mcipdg::ConfigFile config = mcipdg::load_config(common.config);
            mcipdg::run_full(config, command, common.out);
            std::printf("wrote %s\n", common.out.c_str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
