#pragma once

// Activator-depleted (Schnakenberg) kinetics
//
//   f(u, v) = alpha - u + u^2 v
//   g(u, v) = beta - u^2 v
//
// scaled by gamma in the full system. All quantities are dimensionless.

#include <Eigen/Core>

#include "crossrd/errors.hpp"

namespace crossrd {

template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

/// Kinetic constants (alpha, beta, gamma). Validated once at construction.
template <typename Scalar = double>
class KineticParams {
public:
    KineticParams(Scalar alpha, Scalar beta, Scalar gamma) : alpha_(alpha), beta_(beta), gamma_(gamma) {
        if (!(alpha > Scalar(0)) || !(beta > Scalar(0)) || !(gamma > Scalar(0)))
            throw DomainError("kinetic parameters alpha, beta, gamma must be positive");
    }

    /// Bypasses validation. For limit cases (beta -> 0, gamma = 0) in analysis and tests.
    static KineticParams unchecked(Scalar alpha, Scalar beta, Scalar gamma) {
        KineticParams p;
        p.alpha_ = alpha;
        p.beta_ = beta;
        p.gamma_ = gamma;
        return p;
    }

    Scalar alpha() const { return alpha_; }
    Scalar beta() const { return beta_; }
    Scalar gamma() const { return gamma_; }

private:
    KineticParams() = default;
    Scalar alpha_{1}, beta_{1}, gamma_{1};
};

template <typename Scalar>
struct SteadyState {
    Scalar u;
    Scalar v;
};

/// (f, g) at the state (u, v). gamma is not applied.
template <typename Scalar>
Vector2<Scalar> reaction(const KineticParams<Scalar>& p, Scalar u, Scalar v) {
    const Scalar u2v = u * u * v;
    return {p.alpha() - u + u2v, p.beta() - u2v};
}

template <typename Scalar>
SteadyState<Scalar> steady_state(const KineticParams<Scalar>& p) {
    const Scalar s = p.alpha() + p.beta();
    return {s, p.beta() / (s * s)};
}

/// Jacobian of (f, g) at an arbitrary state, rows (f, g), columns (u, v).
template <typename Scalar>
Matrix2<Scalar> reaction_jacobian(Scalar u, Scalar v) {
    Matrix2<Scalar> j;
    j << Scalar(2) * u * v - Scalar(1), u * u,
        -Scalar(2) * u * v, -u * u;
    return j;
}

/// Closed-form Jacobian at the uniform steady state:
///   f_u = (beta - alpha)/(alpha + beta),  f_v = (alpha + beta)^2,
///   g_u = -2 beta/(alpha + beta),         g_v = -(alpha + beta)^2.
template <typename Scalar>
Matrix2<Scalar> jacobian_at_steady_state(const KineticParams<Scalar>& p) {
    const Scalar s = p.alpha() + p.beta();
    Matrix2<Scalar> j;
    j << (p.beta() - p.alpha()) / s, s * s,
        -Scalar(2) * p.beta() / s, -s * s;
    return j;
}

}  // namespace crossrd
