#pragma once

// Time integration driver, initial conditions and the norm-series diagnostics.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "crossrd/fem.hpp"
#include "crossrd/spectral.hpp"

namespace crossrd {

enum class InitialKind { Cosine, Random };

/// Cosine:  u0 = alpha + beta + eps1 cos(2 pi (x + y)) + eps2 sum_{n=0..8} cos(n pi x),
///          v0 = beta/(alpha + beta)^2 + (same perturbation).
/// Random:  u0 = u* + eps r, v0 = v* + eps r', r and r' uniform on [0, 1),
///          drawn per node (u then v) from mt19937_64(seed).
struct InitialSpec {
    InitialKind kind = InitialKind::Random;
    double eps1 = 0.0016;
    double eps2 = 0.001;
    double eps = 0.001;
    std::uint64_t seed = 1;
};

FieldState initial_condition(const Mesh& mesh, const KineticParams<double>& p, const InitialSpec& spec);

/// Per-step L2 norms of the discrete time derivatives.
struct NormSeries {
    std::vector<double> time;
    std::vector<double> du;
    std::vector<double> dv;

    std::size_t size() const { return time.size(); }
    void push(double t, double a, double b);
};

enum class Regime { Converged, Periodic, Growing, Undetermined };

std::string to_string(Regime r);

/// Classification thresholds. The signal is max(du, dv) per sample.
struct RegimeOptions {
    double tail_fraction = 0.1;  // Converged / Growing look at this trailing share of samples
    double peak_high = 0.6;      // peak detection enters above min + peak_high * range
    double peak_low = 0.3;       // and leaves below min + peak_low * range
    int min_peaks = 3;
    double max_spacing_cv = 0.25;
    double growth_factor = 10.0;
};

/// Peaks of the second half of the series, by hysteresis: an excursion starts
/// when the signal rises above the upper threshold and ends when it falls below
/// the lower one; its maximum is one peak. Returns peak times.
std::vector<double> find_peaks(const NormSeries& ns, const RegimeOptions& opt = {});

/// Converged if the tail maximum is below tol; Periodic if the last half has at
/// least min_peaks peaks with spacing coefficient of variation below
/// max_spacing_cv; Growing if the tail slope is positive and the final value
/// exceeds growth_factor times the median; Undetermined otherwise. Checked in
/// that order. Requires at least 10 samples.
Regime detect_regime(const NormSeries& ns, double tol, const RegimeOptions& opt = {});

struct MeshSpec {
    GeometryKind kind = GeometryKind::Annulus;
    double a = 1.0;        // annulus inner radius
    double rho = 1.0;      // annulus thickness or disc radius
    double length = 1.0;   // rectangle side
    int n_r = 16;          // radial layers (annulus, disc)
    int n_theta = 64;      // sectors (annulus, disc)
    int nx = 32;           // rectangle cells
    int ny = 32;
    std::string msh_path;  // when set, read instead of generating
};

Mesh build_mesh(const MeshSpec& spec);

struct SimConfig {
    MeshSpec mesh;
    KineticParams<double> kinetics{0.09, 0.2, 730.0};
    DiffusionTensor<double> diffusion{1.0, 0.001, 0.46};
    double dt = 0.0025;
    double t_end = 1.0;
    double snapshot_interval = 0.0;  // 0: initial and final state only
    InitialSpec initial;
    std::string output_dir = "out/simulate";
    SolverOptions solver;
    TimeScheme scheme = TimeScheme::Imex;
    MassKind mass = MassKind::Consistent;
    double blowup_limit = 1e8;

    void validate() const;
};

struct SimulationResult {
    Mesh mesh;
    std::vector<FieldState> snapshots;
    NormSeries norms;
};

/// Snapshot callback; receives every recorded state as it is produced.
using SnapshotObserver = std::function<void(const Mesh&, const FieldState&, std::size_t index)>;

/// Steps from the initial condition to t_end, recording norms every step and
/// fields every snapshot interval. Throws BlowUpError when a nodal value is
/// non-finite or exceeds blowup_limit in magnitude.
SimulationResult simulate(const SimConfig& cfg, const SnapshotObserver& observer = {});

/// Spatial standard deviation of nodal values.
double nodal_std(const Eigen::VectorXd& x);

}  // namespace crossrd
