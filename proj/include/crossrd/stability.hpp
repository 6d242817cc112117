#pragma once

// Per-mode linear stability of the uniform steady state.
//
// For a Laplacian eigenvalue k^2 the perturbation amplitudes obey w' = A w with
//
//   A = -k^2 D + gamma J,   D = [[1, d_v], [d_u, d]],
//
// J the kinetics Jacobian at the steady state.

#include <algorithm>
#include <complex>
#include <string>

#include <Eigen/LU>

#include "crossrd/errors.hpp"
#include "crossrd/kinetics.hpp"

namespace crossrd {

/// Self- and cross-diffusion ratios (d, d_u, d_v). Construction enforces
/// d > 0 and d - d_u d_v > 0.
template <typename Scalar = double>
class DiffusionTensor {
public:
    DiffusionTensor(Scalar d, Scalar d_u, Scalar d_v) : d_(d), d_u_(d_u), d_v_(d_v) {
        if (!(d > 0)) throw DomainError("self-diffusion ratio d must be positive");
        if (!(d - d_u * d_v > 0))
            throw DomainError("ill-posed diffusion: d - d_u*d_v = " + std::to_string(double(d - d_u * d_v)) +
                              " must be positive");
    }

    Scalar d() const { return d_; }
    Scalar d_u() const { return d_u_; }
    Scalar d_v() const { return d_v_; }
    Scalar determinant() const { return d_ - d_u_ * d_v_; }

    /// [[1, d_v], [d_u, d]]
    Matrix2<Scalar> matrix() const {
        Matrix2<Scalar> m;
        m << Scalar(1), d_v_, d_u_, d_;
        return m;
    }

private:
    Scalar d_, d_u_, d_v_;
};

template <typename Scalar>
Matrix2<Scalar> stability_matrix(const KineticParams<Scalar>& p, const DiffusionTensor<Scalar>& dt, Scalar k2) {
    if (k2 < 0) throw DomainError("k^2 must be non-negative");
    return p.gamma() * jacobian_at_steady_state(p) - k2 * dt.matrix();
}

template <typename Scalar>
Scalar discriminant(const Matrix2<Scalar>& m) {
    const Scalar t = m.trace();
    return t * t - Scalar(4) * m.determinant();
}

template <typename Scalar>
struct EigenPair {
    std::complex<Scalar> lambda1;  // (T - sqrt(T^2 - 4D)) / 2
    std::complex<Scalar> lambda2;  // (T + sqrt(T^2 - 4D)) / 2

    Scalar max_real() const { return std::max(lambda1.real(), lambda2.real()); }
};

/// Roots of lambda^2 - T lambda + D = 0. Real branch when the discriminant is
/// >= 0, conjugate pair otherwise.
template <typename Scalar>
EigenPair<Scalar> eigenpair(const Matrix2<Scalar>& m) {
    using std::abs;
    using std::sqrt;
    const Scalar t = m.trace();
    const Scalar det = m.determinant();
    const Scalar disc = t * t - Scalar(4) * det;
    if (disc >= 0) {
        const Scalar s = sqrt(disc);
        // Cancellation-free pair: the larger-magnitude root first, the other via D / root.
        const Scalar big = t >= 0 ? (t + s) / Scalar(2) : (t - s) / Scalar(2);
        const Scalar small = big != 0 ? det / big : Scalar(0);
        const Scalar lo = std::min(big, small), hi = std::max(big, small);
        return {{lo, 0}, {hi, 0}};
    }
    const Scalar re = t / Scalar(2);
    const Scalar im = sqrt(-disc) / Scalar(2);
    return {{re, -im}, {re, im}};
}

/// Colour classes of the (alpha, beta) plane.
enum class RegionLabel {
    RealStable,       // real distinct, both negative (magenta)
    ComplexStable,    // complex pair, negative real part (green)
    ComplexUnstable,  // complex pair, positive real part: Hopf (red)
    RealUnstable,     // real, at least one positive: Turing (blue)
};

inline std::string to_string(RegionLabel l) {
    switch (l) {
        case RegionLabel::RealStable: return "real_stable";
        case RegionLabel::ComplexStable: return "complex_stable";
        case RegionLabel::ComplexUnstable: return "hopf";
        case RegionLabel::RealUnstable: return "turing";
    }
    return "unknown";
}

inline bool is_stable(RegionLabel l) { return l == RegionLabel::RealStable || l == RegionLabel::ComplexStable; }
inline bool is_real(RegionLabel l) { return l == RegionLabel::RealStable || l == RegionLabel::RealUnstable; }

/// Discriminant >= 0 takes the real branch: RealStable iff the larger root is
/// < 0. Otherwise ComplexStable iff T < 0. A zero trace or a zero leading root
/// is therefore labelled unstable.
template <typename Scalar>
RegionLabel classify(const Matrix2<Scalar>& m) {
    const Scalar t = m.trace();
    const Scalar det = m.determinant();
    const Scalar disc = t * t - Scalar(4) * det;
    if (disc >= 0) {
        // Both roots negative iff T < 0 and D > 0.
        return (t < 0 && det > 0) ? RegionLabel::RealStable : RegionLabel::RealUnstable;
    }
    return t < 0 ? RegionLabel::ComplexStable : RegionLabel::ComplexUnstable;
}

/// Coefficients of (alpha + beta) * det(A) = kappa0 + kappa1 beta + kappa2 beta^2 + kappa3 beta^3.
template <typename Scalar>
struct CubicCoefficients {
    Scalar kappa0, kappa1, kappa2, kappa3;

    Scalar operator()(Scalar beta) const { return ((kappa3 * beta + kappa2) * beta + kappa1) * beta + kappa0; }
};

template <typename Scalar>
CubicCoefficients<Scalar> cubic_coeffs(Scalar alpha, const DiffusionTensor<Scalar>& dt, Scalar gamma, Scalar k2) {
    const Scalar d = dt.d(), du = dt.d_u(), dv = dt.d_v();
    const Scalar k4 = k2 * k2;
    const Scalar a2 = alpha * alpha, a3 = a2 * alpha;
    const Scalar g2 = gamma * gamma;
    CubicCoefficients<Scalar> c;
    c.kappa0 = a3 * g2 + a3 * gamma * k2 + alpha * d * k4 - alpha * du * dv * k4 + alpha * d * gamma * k2 +
               a3 * du * gamma * k2;
    c.kappa1 = d * k4 - du * dv * k4 - d * gamma * k2 + Scalar(3) * a2 * g2 + Scalar(3) * a2 * gamma * k2 +
               Scalar(3) * a2 * du * gamma * k2 - Scalar(2) * dv * gamma * k2;
    c.kappa2 = Scalar(3) * alpha * gamma * (k2 * (du + Scalar(1)) + gamma);
    c.kappa3 = gamma * (k2 * (du + Scalar(1)) + gamma);
    return c;
}

/// Sufficient test that the cubic kappa(beta) is strictly positive for every beta > 0.
///
/// With the monic normalisation a = kappa2/kappa3, b = kappa1/kappa3,
/// c = kappa0/kappa3 the monic cubic is positive when c > 0 and either
/// (a >= 0 and b >= 0) or (b > 0 and 4b >= a^2). The leading coefficient
/// kappa3 must also be positive, otherwise kappa(beta) -> -inf.
template <typename Scalar>
bool cubic_positive(const CubicCoefficients<Scalar>& c) {
    if (c.kappa3 == 0) throw DegenerateError("cubic_positive: kappa3 = 0, cubic is degenerate");
    if (!(c.kappa3 > 0)) return false;
    const Scalar a = c.kappa2 / c.kappa3;
    const Scalar b = c.kappa1 / c.kappa3;
    const Scalar cc = c.kappa0 / c.kappa3;
    if (!(cc > 0)) return false;
    return (a >= 0 && b >= 0) || (b > 0 && Scalar(4) * b >= a * a);
}

}  // namespace crossrd
