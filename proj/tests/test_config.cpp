#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "crossrd/config.hpp"

using namespace crossrd;

namespace {

const std::string base =
    "# Turing run\n"
    "alpha = 0.09\n"
    "beta = 0.2\n"
    "gamma = 730\n"
    "d = 1\n"
    "du = 0.001\n"
    "dv = 0.46\n"
    "dt = 0.0025\n"
    "t_end = 0.5\n";

std::size_t error_line(const std::string& text) {
    try {
        parse_config(text, "test.cfg");
    } catch (const ParseError& e) {
        return e.line();
    }
    return std::size_t(-1);
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("minimal configuration uses defaults") {
    const SimConfig cfg = parse_config(base);
    CHECK(cfg.kinetics.alpha() == 0.09);
    CHECK(cfg.kinetics.gamma() == 730.0);
    CHECK(cfg.diffusion.d_v() == 0.46);
    CHECK(cfg.dt == 0.0025);
    CHECK(cfg.t_end == 0.5);
    CHECK(cfg.mesh.kind == GeometryKind::Annulus);
    CHECK(cfg.mesh.a == 1.0);
    CHECK(cfg.initial.kind == InitialKind::Random);
    CHECK(cfg.scheme == TimeScheme::Imex);
    CHECK(cfg.mass == MassKind::Consistent);
    CHECK(cfg.solver.kind == SolverKind::Auto);
}

TEST_CASE("optional keys") {
    const SimConfig cfg = parse_config(base +
                                       "geometry = rectangle\nL = 2\nnx = 10\nny = 12\n"
                                       "ic = cosine   # first form\neps1 = 0.002\nseed = 42\n"
                                       "solver = krylov\nsolver_tol = 1e-9\nscheme = linearized\nmass = lumped\n"
                                       "snapshot_interval = 0.1\noutput_dir = out/x\n");
    CHECK(cfg.mesh.kind == GeometryKind::Rectangle);
    CHECK(cfg.mesh.length == 2.0);
    CHECK(cfg.mesh.nx == 10);
    CHECK(cfg.mesh.ny == 12);
    CHECK(cfg.initial.kind == InitialKind::Cosine);
    CHECK(cfg.initial.eps1 == 0.002);
    CHECK(cfg.initial.seed == 42);
    CHECK(cfg.solver.kind == SolverKind::Krylov);
    CHECK(cfg.solver.tolerance == 1e-9);
    CHECK(cfg.scheme == TimeScheme::LinearlyImplicit);
    CHECK(cfg.mass == MassKind::Lumped);
    CHECK(cfg.snapshot_interval == 0.1);
    CHECK(cfg.output_dir == "out/x");
}

TEST_CASE("errors point at the offending line") {
    CHECK(error_line(base + "bogus = 1\n") == 10);
    CHECK(error_line(base + "alpha = 0.1\n") == 10);
    CHECK(error_line(base + "no equals sign\n") == 10);
    CHECK(error_line(base + "seed =\n") == 10);
    CHECK(error_line(base + "\n\nn_r = two\n") == 12);
    CHECK(error_line(base + "ic = sine\n") == 10);
    CHECK(error_line(base + "n_theta = 2\n") == 10);
    CHECK(error_line("alpha = 0.1\n") == 0);  // missing keys have no line
    // Ill-posed diffusion is reported where the last of d, du, dv was set.
    std::string bad = base;
    bad.replace(bad.find("du = 0.001"), 10, "du = 5.000");
    CHECK(error_line(bad) == 7);
    std::string neg = base;
    neg.replace(neg.find("beta = 0.2"), 10, "beta = -1.");
    CHECK(error_line(neg) == 4);
}

TEST_CASE("error text names the source") {
    try {
        parse_config(base + "dt2 = 1\n", "run.cfg");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("run.cfg:10") == 0);
        CHECK(std::string(e.what()).find("dt2") != std::string::npos);
    }
}

TEST_CASE("loading resolves mesh files next to the config") {
    const auto dir = std::filesystem::temp_directory_path() / "crossrd_config_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    {
        std::ofstream f(dir / "run.cfg");
        f << base << "mesh_file = meshes/m.msh\n";
    }
    const SimConfig cfg = load_config((dir / "run.cfg").string());
    CHECK(std::filesystem::path(cfg.mesh.msh_path) == dir / "meshes" / "m.msh");
    CHECK_THROWS_AS(load_config((dir / "missing.cfg").string()), std::runtime_error);
    std::filesystem::remove_all(dir);
}

}
