#include "crossrd/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace crossrd {

namespace {

// 53 random bits mapped to [0, 1). Fixed here rather than through
// std::uniform_real_distribution, whose output is implementation-defined.
double unit_uniform(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

}  // namespace

FieldState initial_condition(const Mesh& mesh, const KineticParams<double>& p, const InitialSpec& spec) {
    const Eigen::Index n = mesh.node_count();
    const SteadyState<double> ss = steady_state(p);
    FieldState s;
    s.u = Eigen::VectorXd::Constant(n, ss.u);
    s.v = Eigen::VectorXd::Constant(n, ss.v);
    if (spec.kind == InitialKind::Cosine) {
        const double pi = std::numbers::pi;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double x = mesh.nodes(i, 0), y = mesh.nodes(i, 1);
            double sum = 0;
            for (int k = 0; k <= 8; ++k) sum += std::cos(k * pi * x);
            const double pert = spec.eps1 * std::cos(2.0 * pi * (x + y)) + spec.eps2 * sum;
            s.u(i) += pert;
            s.v(i) += pert;
        }
    } else {
        std::mt19937_64 rng(spec.seed);
        for (Eigen::Index i = 0; i < n; ++i) {
            s.u(i) += spec.eps * unit_uniform(rng);
            s.v(i) += spec.eps * unit_uniform(rng);
        }
    }
    return s;
}

void NormSeries::push(double t, double a, double b) {
    time.push_back(t);
    du.push_back(a);
    dv.push_back(b);
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::Converged: return "converged";
        case Regime::Periodic: return "periodic";
        case Regime::Growing: return "growing";
        case Regime::Undetermined: return "undetermined";
    }
    return "unknown";
}

namespace {

std::vector<double> signal(const NormSeries& ns) {
    std::vector<double> y(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) y[i] = std::max(ns.du[i], ns.dv[i]);
    return y;
}

double median(std::vector<double> x) {
    const std::size_t mid = x.size() / 2;
    std::nth_element(x.begin(), x.begin() + mid, x.end());
    double m = x[mid];
    if (x.size() % 2 == 0) m = 0.5 * (m + *std::max_element(x.begin(), x.begin() + mid));
    return m;
}

}  // namespace

std::vector<double> find_peaks(const NormSeries& ns, const RegimeOptions& opt) {
    const std::vector<double> y = signal(ns);
    const std::size_t start = y.size() / 2;
    std::vector<double> peaks;
    if (y.size() - start < 3) return peaks;
    const auto [lo_it, hi_it] = std::minmax_element(y.begin() + start, y.end());
    const double lo = *lo_it, range = *hi_it - lo;
    if (!(range > 0)) return peaks;
    const double enter = lo + opt.peak_high * range, leave = lo + opt.peak_low * range;

    bool inside = false;
    std::size_t best = start;
    for (std::size_t i = start; i < y.size(); ++i) {
        if (!inside) {
            if (y[i] > enter) {
                inside = true;
                best = i;
            }
        } else {
            if (y[i] > y[best]) best = i;
            if (y[i] < leave) {
                peaks.push_back(ns.time[best]);
                inside = false;
            }
        }
    }
    // An excursion still open at the end is not counted: its maximum may lie beyond the data.
    return peaks;
}

Regime detect_regime(const NormSeries& ns, double tol, const RegimeOptions& opt) {
    if (ns.size() < 10) throw DomainError("detect_regime needs at least 10 samples");
    const std::vector<double> y = signal(ns);
    const std::size_t n_tail = std::max<std::size_t>(2, std::size_t(std::ceil(opt.tail_fraction * double(y.size()))));
    const std::size_t tail0 = y.size() - n_tail;

    if (*std::max_element(y.begin() + tail0, y.end()) < tol) return Regime::Converged;

    const std::vector<double> peaks = find_peaks(ns, opt);
    if (int(peaks.size()) >= opt.min_peaks) {
        std::vector<double> gaps;
        for (std::size_t i = 1; i < peaks.size(); ++i) gaps.push_back(peaks[i] - peaks[i - 1]);
        double mean = 0;
        for (double g : gaps) mean += g;
        mean /= double(gaps.size());
        double var = 0;
        for (double g : gaps) var += (g - mean) * (g - mean);
        var /= double(gaps.size());
        if (mean > 0 && std::sqrt(var) / mean < opt.max_spacing_cv) return Regime::Periodic;
    }

    // Least-squares slope over the tail.
    double tm = 0, ym = 0;
    for (std::size_t i = tail0; i < y.size(); ++i) {
        tm += ns.time[i];
        ym += y[i];
    }
    tm /= double(n_tail);
    ym /= double(n_tail);
    double sty = 0, stt = 0;
    for (std::size_t i = tail0; i < y.size(); ++i) {
        sty += (ns.time[i] - tm) * (y[i] - ym);
        stt += (ns.time[i] - tm) * (ns.time[i] - tm);
    }
    const double slope = stt > 0 ? sty / stt : 0.0;
    if (slope > 0 && y.back() > opt.growth_factor * median(y)) return Regime::Growing;
    return Regime::Undetermined;
}

Mesh build_mesh(const MeshSpec& spec) {
    if (!spec.msh_path.empty()) return read_msh(spec.msh_path).mesh;
    switch (spec.kind) {
        case GeometryKind::Annulus: return annulus_mesh(spec.a, spec.a + spec.rho, spec.n_r, spec.n_theta);
        case GeometryKind::Disc: return disc_mesh(spec.rho, spec.n_r, spec.n_theta);
        case GeometryKind::Rectangle: return rectangle_mesh(spec.length, spec.length, spec.nx, spec.ny);
    }
    throw DomainError("unknown geometry kind");
}

void SimConfig::validate() const {
    if (!(dt > 0)) throw DomainError("dt must be positive");
    if (!(t_end > 0)) throw DomainError("t_end must be positive");
    if (t_end < dt) throw DomainError("t_end must be at least one time step");
    if (!(snapshot_interval >= 0)) throw DomainError("snapshot_interval must be non-negative");
    if (!(initial.eps >= 0) || !(initial.eps1 >= 0) || !(initial.eps2 >= 0))
        throw DomainError("initial perturbation amplitudes must be non-negative");
    if (!(solver.tolerance > 0)) throw DomainError("solver tolerance must be positive");
    if (!(blowup_limit > 0)) throw DomainError("blow-up limit must be positive");
}

double nodal_std(const Eigen::VectorXd& x) {
    if (x.size() == 0) return 0;
    const double mean = x.mean();
    return std::sqrt((x.array() - mean).square().mean());
}

SimulationResult simulate(const SimConfig& cfg, const SnapshotObserver& observer) {
    cfg.validate();
    SimulationResult out;
    out.mesh = build_mesh(cfg.mesh);
    const Operators ops = assemble(out.mesh);
    Stepper stepper(ops, cfg.diffusion, cfg.kinetics, cfg.dt, cfg.scheme, cfg.mass, cfg.solver);

    const long steps = std::max(1L, std::lround(cfg.t_end / cfg.dt));
    const long every = cfg.snapshot_interval > 0 ? std::max(1L, std::lround(cfg.snapshot_interval / cfg.dt)) : steps;

    auto record = [&](const FieldState& s) {
        out.snapshots.push_back(s);
        if (observer) observer(out.mesh, s, out.snapshots.size() - 1);
    };

    FieldState state = initial_condition(out.mesh, cfg.kinetics, cfg.initial);
    record(state);
    for (long k = 1; k <= steps; ++k) {
        FieldState next = stepper.step(state);
        next.time = double(k) * cfg.dt;
        const double peak = std::max(next.u.lpNorm<Eigen::Infinity>(), next.v.lpNorm<Eigen::Infinity>());
        if (!next.u.allFinite() || !next.v.allFinite() || !(peak <= cfg.blowup_limit))
            throw BlowUpError(next.time, "solution blew up (max |value| = " + std::to_string(peak) + ")");
        const auto [nu, nv] = l2_dt_norm(stepper.mass(), state, next, cfg.dt);
        out.norms.push(next.time, nu, nv);
        state = std::move(next);
        if (k % every == 0 || k == steps) record(state);
    }
    return out;
}

}  // namespace crossrd
