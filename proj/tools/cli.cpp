#include "cli.hpp"

#include <filesystem>
#include <iomanip>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "crossrd/conditions.hpp"
#include "crossrd/config.hpp"
#include "crossrd/io.hpp"
#include "crossrd/paramspace.hpp"
#include "crossrd/simulation.hpp"

namespace crossrd::cli {

namespace {

// Exceptions raised for bad user input map to exit code 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    // shared
    std::string geometry = "annulus";
    double a = 1.0, rho = 1.0, L = 1.0;
    int m = 1;
    double n = 0.1;
    double d = 1.0, du = 0.0, dv = 0.0, gamma = 1.0;
    std::string output;

    // eigenmode
    int max_m = -1;
    double n0 = 0.1, dn = 1.0;
    int n_count = 1;
    std::string form = "exact";

    // classify
    double alpha_min = 0.01, alpha_max = 3.0, beta_min = 0.01, beta_max = 3.0;
    int alpha_count = 300, beta_count = 300;
    double k2 = -1;
    bool aggregate = false;
    std::string curves;
    std::string level = "discriminant";

    // mesh
    int nr = 16, ntheta = 64, nx = 32, ny = 32;
    std::string input;

    // simulate
    std::string config;
    std::string output_dir;
};

struct App {
    std::unique_ptr<CLI::App> app;
    std::map<std::string, CLI::App*> sub;
};

void add_geometry(CLI::App* s, Options& o) {
    s->add_option("--geometry", o.geometry, "Domain: annulus, disc or rectangle")
        ->check(CLI::IsMember({"annulus", "disc", "rectangle"}))
        ->capture_default_str();
    s->add_option("--a", o.a, "Annulus inner radius a")->capture_default_str();
    s->add_option("--rho", o.rho, "Annulus thickness b - a, or disc radius")->capture_default_str();
    s->add_option("--L", o.L, "Rectangle side length")->capture_default_str();
}

void add_mode(CLI::App* s, Options& o) {
    s->add_option("--m", o.m, "Radial mode index m (rectangle: first index)")->capture_default_str();
    s->add_option("--n", o.n, "Bessel order n (rectangle: second index)")->capture_default_str();
}

void add_diffusion(CLI::App* s, Options& o) {
    s->add_option("--d", o.d, "Self-diffusion ratio d")->capture_default_str();
    s->add_option("--du", o.du, "Cross-diffusion coefficient d_u")->capture_default_str();
    s->add_option("--dv", o.dv, "Cross-diffusion coefficient d_v")->capture_default_str();
    s->add_option("--gamma", o.gamma, "Scaling parameter gamma")->capture_default_str();
}

void add_lattice(CLI::App* s, Options& o) {
    s->add_option("--max-m", o.max_m, "Mode lattice: m = 0..max-m (disables --m/--n)");
    s->add_option("--n0", o.n0, "Mode lattice: first order n")->capture_default_str();
    s->add_option("--dn", o.dn, "Mode lattice: order step")->capture_default_str();
    s->add_option("--n-count", o.n_count, "Mode lattice: number of orders")->capture_default_str();
}

App build(Options& o) {
    App a;
    a.app = std::make_unique<CLI::App>("Cross-diffusion reaction-diffusion analysis and simulation", "crossrd");
    a.app->require_subcommand(1, 1);
    a.app->get_formatter()->column_width(34);

    CLI::App* s = a.app->add_subcommand("eigenmode", "Laplacian eigenvalues k^2 for modes (m, n)");
    add_geometry(s, o);
    add_mode(s, o);
    add_lattice(s, o);
    s->add_option("--form", o.form, "Annulus form: exact or supremum")
        ->check(CLI::IsMember({"exact", "supremum"}))
        ->capture_default_str();
    s->add_option("--output", o.output, "CSV path [out/eigenmode/eigenmodes.csv]");
    a.sub["eigenmode"] = s;

    s = a.app->add_subcommand("conditions", "Well-posedness and domain-size bounds on the annulus");
    add_diffusion(s, o);
    s->add_option("--a", o.a, "Annulus inner radius a")->capture_default_str();
    s->add_option("--rho", o.rho, "Annulus thickness b - a")->capture_default_str();
    add_mode(s, o);
    s->add_option("--output", o.output, "CSV path [out/conditions/report.csv]");
    a.sub["conditions"] = s;

    s = a.app->add_subcommand("classify", "Classify the (alpha, beta) plane");
    s->add_option("--alpha-min", o.alpha_min, "Lower alpha")->capture_default_str();
    s->add_option("--alpha-max", o.alpha_max, "Upper alpha")->capture_default_str();
    s->add_option("--alpha-count", o.alpha_count, "Alpha samples")->capture_default_str();
    s->add_option("--beta-min", o.beta_min, "Lower beta")->capture_default_str();
    s->add_option("--beta-max", o.beta_max, "Upper beta")->capture_default_str();
    s->add_option("--beta-count", o.beta_count, "Beta samples")->capture_default_str();
    add_diffusion(s, o);
    add_geometry(s, o);
    add_mode(s, o);
    s->add_option("--k2", o.k2, "Use this k^2 directly instead of a geometry mode");
    s->add_flag("--aggregate", o.aggregate, "Aggregate over k^2 = 0 and the mode lattice");
    add_lattice(s, o);
    s->add_option("--level", o.level, "Curve field: discriminant, trace or determinant")
        ->check(CLI::IsMember({"discriminant", "trace", "determinant"}))
        ->capture_default_str();
    s->add_option("--output", o.output, "Region CSV path [out/classify/regions.csv]");
    s->add_option("--curves", o.curves, "Curve CSV path [out/classify/curves.csv]");
    a.sub["classify"] = s;

    s = a.app->add_subcommand("mesh", "Generate or inspect a triangle mesh");
    add_geometry(s, o);
    s->add_option("--nr", o.nr, "Radial layers (annulus, disc)")->capture_default_str();
    s->add_option("--ntheta", o.ntheta, "Angular sectors (annulus, disc)")->capture_default_str();
    s->add_option("--nx", o.nx, "Rectangle cells along x")->capture_default_str();
    s->add_option("--ny", o.ny, "Rectangle cells along y")->capture_default_str();
    s->add_option("--input", o.input, "Read this MSH 2.2 file instead of generating")->check(CLI::ExistingFile);
    s->add_option("--output", o.output, "MSH path [out/mesh/mesh.msh]");
    a.sub["mesh"] = s;

    s = a.app->add_subcommand("simulate", "Run a finite-element simulation from a config file");
    s->add_option("--config", o.config, "Configuration file")->required()->check(CLI::ExistingFile);
    s->add_option("--output-dir", o.output_dir, "Override output_dir from the config");
    a.sub["simulate"] = s;
    return a;
}

std::string or_default(const std::string& v, const std::string& fallback) { return v.empty() ? fallback : v; }

GeometryKind geometry_kind(const std::string& g) {
    if (g == "disc") return GeometryKind::Disc;
    if (g == "rectangle") return GeometryKind::Rectangle;
    return GeometryKind::Annulus;
}

Geometry<double> make_geometry(const Options& o) {
    switch (geometry_kind(o.geometry)) {
        case GeometryKind::Rectangle: return Geometry<double>::rectangle(o.L);
        case GeometryKind::Disc: return Geometry<double>::disc(o.rho);
        case GeometryKind::Annulus: break;
    }
    return Geometry<double>::annulus(o.a, o.rho);
}

std::vector<Mode> modes_of(const Options& o) {
    if (o.max_m < 0) return {{o.m, o.n}};
    if (o.n_count < 1) throw DomainError("--n-count must be at least 1");
    auto modes = mode_lattice(geometry_kind(o.geometry), o.max_m, o.n0, o.dn, o.n_count);
    if (modes.empty()) throw DomainError("mode lattice is empty");
    return modes;
}

int cmd_eigenmode(const Options& o, std::ostream& out) {
    const Geometry<double> g = make_geometry(o);
    const AnnulusForm form = o.form == "supremum" ? AnnulusForm::Supremum : AnnulusForm::Exact;
    std::ostringstream csv;
    csv << "geometry,m,n,k2\n";
    for (const Mode& mode : modes_of(o))
        csv << to_string(g.kind) << ',' << mode.m << ',' << format_double(mode.n) << ','
            << format_double(eigenvalue(g, mode, form)) << '\n';
    const std::string path = or_default(o.output, "out/eigenmode/eigenmodes.csv");
    write_file_atomic(path, csv.str());
    out << csv.str();
    return 0;
}

int cmd_conditions(const Options& o, std::ostream& out) {
    const bool ok = well_posed(o.d, o.du, o.dv);
    if (!ok) {
        out << "well_posed: false (d - du*dv = " << format_double(o.d - o.du * o.dv) << ")\n";
        throw DomainError("diffusion tensor is ill-posed: need d > 0 and d - du*dv > 0");
    }
    const DiffusionTensor<double> dt(o.d, o.du, o.dv);
    const Mode mode{o.m, o.n};
    const RegimeReport<double> r = regime_report(dt, o.gamma, o.a, o.rho, mode);

    auto yn = [](bool b) { return b ? "true" : "false"; };
    out << "well_posed:            true\n";
    out << "rho:                   " << format_double(r.rho) << "\n";
    out << "rho_min_hopf:          " << format_double(r.rho_min_hopf) << "\n";
    out << "rho_max_turing_only:   " << format_double(r.rho_max_turing_only) << "\n";
    out << "rho_min_crossdiff:     " << format_double(r.rho_min_crossdiff) << "\n";
    out << "hopf_capable:          " << yn(r.hopf_capable) << "\n";
    out << "turing_only:           " << yn(r.turing_only) << "\n";
    out << "crossdiff_sufficient:  " << yn(r.crossdiff_sufficient) << "\n";

    std::ostringstream csv;
    csv << "d,du,dv,gamma,a,rho,m,n,rho_min_hopf,rho_max_turing_only,rho_min_crossdiff,hopf_capable,turing_only,"
           "crossdiff_sufficient\n";
    csv << format_double(o.d) << ',' << format_double(o.du) << ',' << format_double(o.dv) << ','
        << format_double(o.gamma) << ',' << format_double(o.a) << ',' << format_double(o.rho) << ',' << o.m << ','
        << format_double(o.n) << ',' << format_double(r.rho_min_hopf) << ',' << format_double(r.rho_max_turing_only)
        << ',' << format_double(r.rho_min_crossdiff) << ',' << yn(r.hopf_capable) << ',' << yn(r.turing_only) << ','
        << yn(r.crossdiff_sufficient) << '\n';
    write_file_atomic(or_default(o.output, "out/conditions/report.csv"), csv.str());
    return 0;
}

int cmd_classify(const Options& o, std::ostream& out) {
    GridSpec gs;
    gs.alpha = {o.alpha_min, o.alpha_max, o.alpha_count};
    gs.beta = {o.beta_min, o.beta_max, o.beta_count};
    gs.validate();
    const DiffusionTensor<double> dt(o.d, o.du, o.dv);

    ClassifiedGrid cg;
    if (o.aggregate) {
        if (o.k2 >= 0) throw UsageError("--k2 cannot be combined with --aggregate");
        const Geometry<double> g = make_geometry(o);
        std::vector<double> k2s{0.0};
        for (const Mode& mode : modes_of(o)) k2s.push_back(eigenvalue(g, mode));
        cg = sweep_aggregated(gs, dt, o.gamma, k2s);
    } else {
        const double k2 = o.k2 >= 0 ? o.k2 : eigenvalue(make_geometry(o), Mode{o.m, o.n});
        cg = sweep(gs, dt, o.gamma, k2);
    }
    const LevelField field = o.level == "trace"         ? LevelField::Trace
                             : o.level == "determinant" ? LevelField::Determinant
                                                        : LevelField::Discriminant;
    const auto curves = partition_curve(cg, field);
    const std::string regions_path = or_default(o.output, "out/classify/regions.csv");
    const std::string curves_path = or_default(o.curves, "out/classify/curves.csv");
    write_region_csv(cg, regions_path);
    write_file_atomic(curves_path, curves_csv_text(curves));

    std::map<std::string, long> counts;
    for (const auto& p : cg.points) ++counts[to_string(p.label)];
    out << "points: " << cg.points.size() << "\n";
    for (const char* l : {"real_stable", "complex_stable", "hopf", "turing"}) out << l << ": " << counts[l] << "\n";
    if (cg.aggregated) {
        std::map<std::string, long> agg;
        for (auto c : cg.aggregate) ++agg[to_string(c)];
        for (const char* l : {"stable", "turing", "hopf", "homogeneous"})
            out << "aggregate_" << l << ": " << agg[l] << "\n";
    }
    out << "curves: " << curves.size() << "\n";
    out << "regions: " << regions_path << "\ncurves_csv: " << curves_path << "\n";
    return 0;
}

int cmd_mesh(const Options& o, std::ostream& out) {
    Mesh mesh;
    if (!o.input.empty()) {
        const MshReadResult r = read_msh(o.input);
        mesh = r.mesh;
        if (r.reoriented > 0) out << "reoriented_triangles: " << r.reoriented << "\n";
    } else {
        MeshSpec spec;
        spec.kind = geometry_kind(o.geometry);
        spec.a = o.a;
        spec.rho = o.rho;
        spec.length = o.L;
        spec.n_r = o.nr;
        spec.n_theta = o.ntheta;
        spec.nx = o.nx;
        spec.ny = o.ny;
        mesh = build_mesh(spec);
    }
    const MeshStats s = mesh_stats(mesh);
    const std::string path = or_default(o.output, "out/mesh/mesh.msh");
    write_msh(mesh, path);
    out << "nodes:          " << s.nodes << "\n";
    out << "elements:       " << s.elements << "\n";
    out << "boundary_nodes: " << s.boundary_nodes << "\n";
    out << "dof:            " << s.dof << "\n";
    out << "total_area:     " << format_double(s.total_area) << "\n";
    out << "min_area:       " << format_double(s.min_area) << "\n";
    out << "max_area:       " << format_double(s.max_area) << "\n";
    out << "min_angle_deg:  " << format_double(s.min_angle_deg) << "\n";
    out << "written:        " << path << "\n";
    return 0;
}

int cmd_simulate(const Options& o, std::ostream& out) {
    SimConfig cfg = load_config(o.config);
    if (!o.output_dir.empty()) cfg.output_dir = o.output_dir;
    const std::filesystem::path dir(cfg.output_dir);

    auto observer = [&](const Mesh& mesh, const FieldState& s, std::size_t index) {
        std::ostringstream name;
        name << "snapshot_" << std::setw(4) << std::setfill('0') << index << ".vtk";
        write_vtk(mesh, s, (dir / name.str()).string());
    };
    const SimulationResult r = simulate(cfg, observer);
    write_norm_csv(r.norms, (dir / "norms.csv").string());

    const FieldState& last = r.snapshots.back();
    const Regime regime = r.norms.size() >= 10 ? detect_regime(r.norms, 1e-2) : Regime::Undetermined;
    std::ostringstream summary;
    summary << "nodes: " << r.mesh.node_count() << "\n";
    summary << "elements: " << r.mesh.triangle_count() << "\n";
    summary << "steps: " << r.norms.size() << "\n";
    summary << "t_end: " << format_double(last.time) << "\n";
    summary << "final_du_norm: " << format_double(r.norms.du.back()) << "\n";
    summary << "final_dv_norm: " << format_double(r.norms.dv.back()) << "\n";
    summary << "u_std: " << format_double(nodal_std(last.u)) << "\n";
    summary << "u_min: " << format_double(last.u.minCoeff()) << "\n";
    summary << "u_max: " << format_double(last.u.maxCoeff()) << "\n";
    summary << "regime: " << to_string(regime) << "\n";
    write_file_atomic((dir / "summary.txt").string(), summary.str());
    out << summary.str();
    out << "output_dir: " << cfg.output_dir << "\n";
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    App a = build(o);
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        a.app->parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = a.app->exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (a.sub["eigenmode"]->parsed()) return cmd_eigenmode(o, out);
        if (a.sub["conditions"]->parsed()) return cmd_conditions(o, out);
        if (a.sub["classify"]->parsed()) return cmd_classify(o, out);
        if (a.sub["mesh"]->parsed()) return cmd_mesh(o, out);
        if (a.sub["simulate"]->parsed()) return cmd_simulate(o, out);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const DegenerateError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const TopologyError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

std::string help_text(const std::string& subcommand) {
    Options o;
    App a = build(o);
    if (subcommand.empty()) return a.app->help();
    return a.sub.at(subcommand)->help(a.app->get_name());
}

}  // namespace crossrd::cli
