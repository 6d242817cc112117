#include "crossrd/config.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace crossrd {

namespace {

struct Entry {
    std::string value;
    std::size_t line;
};

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "geometry", "a",    "rho",  "L",     "n_r",  "n_theta",  "nx",   "ny",     "mesh_file",
        "alpha",    "beta", "gamma", "d",    "du",   "dv",       "dt",   "t_end",  "snapshot_interval",
        "ic",       "eps",  "eps1", "eps2",  "seed", "output_dir", "solver", "solver_tol", "solver_max_iter",
        "solver_direct_max_dim", "scheme", "mass"};
    return keys;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

class Reader {
public:
    Reader(std::map<std::string, Entry> entries, std::string source)
        : entries_(std::move(entries)), source_(std::move(source)) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    std::size_t line(const std::string& key) const { return has(key) ? entries_.at(key).line : 0; }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        throw ParseError(source_, line(key), what);
    }

    double real(const std::string& key) const {
        if (!has(key)) fail(key, "missing required key '" + key + "'");
        return real_or(key, 0);
    }

    double real_or(const std::string& key, double fallback) const {
        if (!has(key)) return fallback;
        const std::string& v = entries_.at(key).value;
        double x = 0;
        const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
        if (res.ec != std::errc() || res.ptr != v.data() + v.size())
            fail(key, "value of '" + key + "' is not a number: '" + v + "'");
        return x;
    }

    long integer_or(const std::string& key, long fallback) const {
        if (!has(key)) return fallback;
        const std::string& v = entries_.at(key).value;
        long x = 0;
        const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
        if (res.ec != std::errc() || res.ptr != v.data() + v.size())
            fail(key, "value of '" + key + "' is not an integer: '" + v + "'");
        return x;
    }

    std::string text_or(const std::string& key, const std::string& fallback) const {
        return has(key) ? entries_.at(key).value : fallback;
    }

    std::string choice_or(const std::string& key, const std::string& fallback,
                          std::initializer_list<const char*> options) const {
        const std::string v = text_or(key, fallback);
        for (const char* o : options)
            if (v == o) return v;
        std::string list;
        for (const char* o : options) list += std::string(list.empty() ? "" : ", ") + o;
        fail(key, "value of '" + key + "' must be one of {" + list + "}, got '" + v + "'");
    }

    // Runs f; a DomainError it throws is reported at the last line among keys.
    template <typename F>
    auto guarded(std::initializer_list<const char*> keys, F&& f) const {
        try {
            return f();
        } catch (const DomainError& e) {
            std::string worst = *keys.begin();
            for (const char* k : keys)
                if (line(k) > line(worst)) worst = k;
            fail(worst, e.what());
        }
    }

private:
    std::map<std::string, Entry> entries_;
    std::string source_;
};

}  // namespace

SimConfig parse_config(const std::string& text, const std::string& source) {
    std::map<std::string, Entry> entries;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(source, line_no, "expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(source, line_no, "empty key");
        if (!known_keys().count(key)) throw ParseError(source, line_no, "unknown key '" + key + "'");
        if (value.empty()) throw ParseError(source, line_no, "empty value for '" + key + "'");
        const auto [it, fresh] = entries.emplace(key, Entry{value, line_no});
        if (!fresh)
            throw ParseError(source, line_no,
                             "duplicate key '" + key + "' (first set on line " + std::to_string(it->second.line) + ")");
    }

    const Reader r(std::move(entries), source);
    SimConfig cfg;

    const std::string geom = r.choice_or("geometry", "annulus", {"annulus", "disc", "rectangle"});
    cfg.mesh.kind = geom == "annulus" ? GeometryKind::Annulus
                    : geom == "disc"  ? GeometryKind::Disc
                                      : GeometryKind::Rectangle;
    cfg.mesh.a = r.real_or("a", 1.0);
    cfg.mesh.rho = r.real_or("rho", 1.0);
    cfg.mesh.length = r.real_or("L", 1.0);
    cfg.mesh.n_r = int(r.integer_or("n_r", cfg.mesh.n_r));
    cfg.mesh.n_theta = int(r.integer_or("n_theta", cfg.mesh.n_theta));
    cfg.mesh.nx = int(r.integer_or("nx", cfg.mesh.nx));
    cfg.mesh.ny = int(r.integer_or("ny", cfg.mesh.nx));
    cfg.mesh.msh_path = r.text_or("mesh_file", "");
    if (cfg.mesh.msh_path.empty()) {
        if (cfg.mesh.kind == GeometryKind::Annulus && !(cfg.mesh.a > 0)) r.fail("a", "a must be positive");
        if (cfg.mesh.kind != GeometryKind::Rectangle && !(cfg.mesh.rho > 0)) r.fail("rho", "rho must be positive");
        if (cfg.mesh.kind == GeometryKind::Rectangle && !(cfg.mesh.length > 0)) r.fail("L", "L must be positive");
        if (cfg.mesh.kind != GeometryKind::Rectangle) {
            if (cfg.mesh.n_r < 1) r.fail("n_r", "n_r must be at least 1");
            if (cfg.mesh.n_theta < 3) r.fail("n_theta", "n_theta must be at least 3");
        } else if (cfg.mesh.nx < 1 || cfg.mesh.ny < 1) {
            r.fail(r.has("nx") ? "nx" : "ny", "nx and ny must be at least 1");
        }
    }

    const double alpha = r.real("alpha"), beta = r.real("beta"), gamma = r.real("gamma");
    cfg.kinetics = r.guarded({"alpha", "beta", "gamma"}, [&] { return KineticParams<double>(alpha, beta, gamma); });
    const double d = r.real("d"), du = r.real("du"), dv = r.real("dv");
    cfg.diffusion = r.guarded({"d", "du", "dv"}, [&] { return DiffusionTensor<double>(d, du, dv); });

    cfg.dt = r.real("dt");
    if (!(cfg.dt > 0)) r.fail("dt", "dt must be positive");
    cfg.t_end = r.real("t_end");
    if (!(cfg.t_end >= cfg.dt)) r.fail("t_end", "t_end must be at least dt");
    cfg.snapshot_interval = r.real_or("snapshot_interval", 0.0);
    if (!(cfg.snapshot_interval >= 0)) r.fail("snapshot_interval", "snapshot_interval must be non-negative");

    cfg.initial.kind = r.choice_or("ic", "random", {"random", "cosine"}) == "cosine" ? InitialKind::Cosine
                                                                                       : InitialKind::Random;
    cfg.initial.eps = r.real_or("eps", cfg.initial.eps);
    cfg.initial.eps1 = r.real_or("eps1", cfg.initial.eps1);
    cfg.initial.eps2 = r.real_or("eps2", cfg.initial.eps2);
    for (const char* k : {"eps", "eps1", "eps2"})
        if (!(r.real_or(k, 0) >= 0)) r.fail(k, std::string(k) + " must be non-negative");
    const long seed = r.integer_or("seed", 1);
    if (seed < 0) r.fail("seed", "seed must be non-negative");
    cfg.initial.seed = std::uint64_t(seed);

    cfg.output_dir = r.text_or("output_dir", cfg.output_dir);
    const std::string solver = r.choice_or("solver", "auto", {"auto", "direct", "krylov"});
    cfg.solver.kind = solver == "auto" ? SolverKind::Auto : solver == "direct" ? SolverKind::Direct : SolverKind::Krylov;
    cfg.solver.tolerance = r.real_or("solver_tol", cfg.solver.tolerance);
    if (!(cfg.solver.tolerance > 0)) r.fail("solver_tol", "solver_tol must be positive");
    cfg.solver.max_iterations = int(r.integer_or("solver_max_iter", cfg.solver.max_iterations));
    if (cfg.solver.max_iterations < 1) r.fail("solver_max_iter", "solver_max_iter must be positive");
    cfg.solver.direct_max_dim = r.integer_or("solver_direct_max_dim", cfg.solver.direct_max_dim);
    if (cfg.solver.direct_max_dim < 0) r.fail("solver_direct_max_dim", "solver_direct_max_dim must be non-negative");

    cfg.scheme = r.choice_or("scheme", "imex", {"imex", "linearized"}) == "imex" ? TimeScheme::Imex
                                                                               : TimeScheme::LinearlyImplicit;
    cfg.mass = r.choice_or("mass", "consistent", {"consistent", "lumped"}) == "lumped" ? MassKind::Lumped
                                                                                       : MassKind::Consistent;
    return cfg;
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    SimConfig cfg = parse_config(ss.str(), path);
    if (!cfg.mesh.msh_path.empty()) {
        const std::filesystem::path mesh(cfg.mesh.msh_path);
        if (mesh.is_relative()) cfg.mesh.msh_path = (std::filesystem::path(path).parent_path() / mesh).string();
    }
    return cfg;
}

}  // namespace crossrd
