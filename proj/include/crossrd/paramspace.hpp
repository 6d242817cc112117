#pragma once

// (alpha, beta) parameter-plane sweeps, region labels and partition curves.

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "crossrd/stability.hpp"

namespace crossrd {

struct AxisRange {
    double lo = 0.01;
    double hi = 3.0;
    int count = 300;

    /// Evenly spaced values lo, ..., hi (both ends exact).
    double value(int i) const {
        if (i == count - 1) return hi;
        return count == 1 ? lo : lo + (hi - lo) * double(i) / double(count - 1);
    }
};

struct GridSpec {
    AxisRange alpha;
    AxisRange beta;

    /// Throws DomainError unless 0 < lo < hi and count >= 2 on both axes.
    void validate() const;
    std::size_t size() const { return std::size_t(alpha.count) * std::size_t(beta.count); }
    /// Point index, beta-major: beta row ib, alpha column ia.
    std::size_t index(int ia, int ib) const { return std::size_t(ib) * std::size_t(alpha.count) + std::size_t(ia); }
};

/// Outcome of an aggregated sweep.
enum class AggregateClass {
    Stable,       // stable at k^2 = 0, not real-unstable for any listed k^2 > 0
    Turing,       // stable at k^2 = 0, real-unstable for some listed k^2 > 0
    Hopf,         // complex-unstable at k^2 = 0
    Homogeneous,  // real-unstable already at k^2 = 0
};

std::string to_string(AggregateClass c);

struct PointResult {
    RegionLabel label = RegionLabel::RealStable;
    std::complex<double> lambda1;
    std::complex<double> lambda2;
    double trace = 0;
    double det = 0;
    double k2 = 0;  // mode the label and eigenvalues refer to

    double discriminant() const { return trace * trace - 4.0 * det; }
};

struct ClassifiedGrid {
    GridSpec grid;
    std::vector<double> modes;  // k^2 values used (one for a per-mode sweep)
    bool aggregated = false;
    std::vector<PointResult> points;           // beta-major, see GridSpec::index
    std::vector<AggregateClass> aggregate;     // aggregated sweeps only

    const PointResult& at(int ia, int ib) const { return points[grid.index(ia, ib)]; }
};

/// Classifies the single mode k2 at one point.
PointResult classify_point(double alpha, double beta, const DiffusionTensor<double>& dt, double gamma, double k2);

/// gamma may be 0 (pure diffusion); negative gamma is rejected.
ClassifiedGrid sweep(const GridSpec& gs, const DiffusionTensor<double>& dt, double gamma, double k2);

/// Aggregates over `modes` with precedence Hopf > Turing > Stable. The label
/// and eigenvalues stored per point are:
///   Hopf, Homogeneous: those of k^2 = 0;
///   Turing: the listed k^2 > 0 with the largest real-unstable eigenvalue;
///   Stable: those of k^2 = 0.
/// k^2 = 0 is always evaluated even if absent from `modes`.
ClassifiedGrid sweep_aggregated(const GridSpec& gs, const DiffusionTensor<double>& dt, double gamma,
                                const std::vector<double>& modes);

using Polyline = std::vector<Eigen::Vector2d>;

/// Zero level set of a nodal field on the grid (values beta-major), traced
/// by linear interpolation on cell edges. Saddle cells are resolved with the
/// cell-centre average.
std::vector<Polyline> zero_level_set(const GridSpec& gs, const std::vector<double>& field);

enum class LevelField { Discriminant, Trace, Determinant };

/// T^2 - 4D = 0 curves by default; T = 0 or D = 0 on request.
std::vector<Polyline> partition_curve(const ClassifiedGrid& cg, LevelField field = LevelField::Discriminant);

/// CSV `alpha,beta,label,re_l1,im_l1,re_l2,im_l2,k2`, beta-major row order.
std::string region_csv_text(const ClassifiedGrid& cg);
void write_region_csv(const ClassifiedGrid& cg, const std::string& path);

/// Parses region CSV text back into a grid. Axis ranges are recovered from
/// the distinct alpha and beta values; trace and determinant are rebuilt
/// from the eigenvalues. Throws ParseError on malformed input.
ClassifiedGrid parse_region_csv(const std::string& text, const std::string& source = "<csv>");
ClassifiedGrid read_region_csv(const std::string& path);

/// CSV `curve,alpha,beta`, one row per polyline vertex.
std::string curves_csv_text(const std::vector<Polyline>& curves);

}  // namespace crossrd
