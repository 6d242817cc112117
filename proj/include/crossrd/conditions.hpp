#pragma once

// Domain-size admissibility on the annulus.
//
// With C = (2m+1)(n+2m+1)(n+4m) and N = n+4m+2:
//
//   Hopf/transcritical possible:  rho >= (8(d+1)C - gamma a^2 N) / (gamma a N)
//   Turing only:                  rho <  (4(d+1)C - gamma a^2 N) / (gamma a N)
//   cross-diffusion sufficient:   rho >  (8(d - d_u d_v)C - gamma a^2 (7d + 8d_v) N) / ((7d + 8d_v) N gamma)
//
// Bounds may be negative, in which case every rho > 0 qualifies. The
// cross-diffusion bound is kept in its closed form above; it carries a^2 where
// solving a(rho + a) > 8(d - d_u d_v)C / ((7d + 8d_v) gamma N) for rho would give
// a. The two agree for a = 1; `rho_min_crossdiff_solved` returns the latter.

#include <string>

#include "crossrd/spectral.hpp"
#include "crossrd/stability.hpp"

namespace crossrd {

template <typename Scalar>
bool well_posed(Scalar d, Scalar d_u, Scalar d_v) {
    return d > 0 && d - d_u * d_v > 0;
}

namespace detail {

template <typename Scalar>
void require_bound_inputs(Scalar gamma, Scalar a, const Mode& mode) {
    if (!(gamma > 0)) throw DomainError("gamma must be positive");
    if (!(a > 0)) throw DomainError("inner radius a must be positive");
    require_bessel_mode(mode);
}

template <typename Scalar>
Scalar trace_bound_numerator(Scalar factor, Scalar d, Scalar gamma, Scalar a, const Mode& mode) {
    const Scalar n = Scalar(mode.n);
    return factor * (d + 1) * mode_weight(mode.m, n) - gamma * a * a * mode_order_term(mode.m, n);
}

}  // namespace detail

/// Lower bound on rho for Hopf and/or transcritical bifurcation.
template <typename Scalar>
Scalar rho_min_hopf(Scalar d, Scalar gamma, Scalar a, const Mode& mode) {
    detail::require_bound_inputs(gamma, a, mode);
    const Scalar den = gamma * a * mode_order_term(mode.m, Scalar(mode.n));
    return detail::trace_bound_numerator(Scalar(8), d, gamma, a, mode) / den;
}

/// Upper bound on rho below which instability is restricted to Turing type.
template <typename Scalar>
Scalar rho_max_turing_only(Scalar d, Scalar gamma, Scalar a, const Mode& mode) {
    detail::require_bound_inputs(gamma, a, mode);
    const Scalar den = gamma * a * mode_order_term(mode.m, Scalar(mode.n));
    return detail::trace_bound_numerator(Scalar(4), d, gamma, a, mode) / den;
}

/// Numerators of the two trace bounds, exposed for the identity
/// hopf - turing_only = 4(d+1)(2m+1)(n+2m+1)(n+4m).
template <typename Scalar>
Scalar rho_min_hopf_numerator(Scalar d, Scalar gamma, Scalar a, const Mode& mode) {
    return detail::trace_bound_numerator(Scalar(8), d, gamma, a, mode);
}

template <typename Scalar>
Scalar rho_max_turing_only_numerator(Scalar d, Scalar gamma, Scalar a, const Mode& mode) {
    return detail::trace_bound_numerator(Scalar(4), d, gamma, a, mode);
}

template <typename Scalar>
Scalar rho_min_crossdiff(const DiffusionTensor<Scalar>& dt, Scalar gamma, Scalar a, const Mode& mode) {
    detail::require_bound_inputs(gamma, a, mode);
    const Scalar w = Scalar(7) * dt.d() + Scalar(8) * dt.d_v();
    if (w == 0) throw DegenerateError("rho_min_crossdiff: 7d + 8d_v = 0");
    const Scalar n = Scalar(mode.n);
    const Scalar order = mode_order_term(mode.m, n);
    const Scalar num = Scalar(8) * dt.determinant() * mode_weight(mode.m, n) - gamma * a * a * w * order;
    return num / (w * order * gamma);
}

/// rho solving a(rho + a) = 8(d - d_u d_v)C / ((7d + 8d_v) gamma N) exactly.
template <typename Scalar>
Scalar rho_min_crossdiff_solved(const DiffusionTensor<Scalar>& dt, Scalar gamma, Scalar a, const Mode& mode) {
    detail::require_bound_inputs(gamma, a, mode);
    const Scalar w = Scalar(7) * dt.d() + Scalar(8) * dt.d_v();
    if (w == 0) throw DegenerateError("rho_min_crossdiff_solved: 7d + 8d_v = 0");
    const Scalar n = Scalar(mode.n);
    return Scalar(8) * dt.determinant() * mode_weight(mode.m, n) / (w * gamma * a * mode_order_term(mode.m, n)) - a;
}

/// Cross-diffusion size bound on convex domains: returns the threshold on L^2
/// (rectangle) or rho^2 (disc) that the squared size must exceed.
template <typename Scalar>
Scalar crossdiff_size_squared_bound(GeometryKind kind, const DiffusionTensor<Scalar>& dt, Scalar gamma,
                                    const Mode& mode) {
    if (!(gamma > 0)) throw DomainError("gamma must be positive");
    const Scalar w = Scalar(7) * dt.d() + Scalar(8) * dt.d_v();
    if (w == 0) throw DegenerateError("crossdiff_size_squared_bound: 7d + 8d_v = 0");
    const Scalar n = Scalar(mode.n);
    switch (kind) {
        case GeometryKind::Rectangle:
            return dt.determinant() * eigenvalue_rectangle(Scalar(1), mode) / (w * gamma);
        case GeometryKind::Disc:
            require_bessel_mode(mode);
            return Scalar(4) * dt.determinant() * mode_weight(mode.m, n) / (w * mode_order_term(mode.m, n) * gamma);
        case GeometryKind::Annulus: break;
    }
    throw DomainError("crossdiff_size_squared_bound: use rho_min_crossdiff for the annulus");
}

template <typename Scalar = double>
struct RegimeReport {
    Scalar rho = 0;
    Scalar rho_min_hopf = 0;
    Scalar rho_max_turing_only = 0;
    Scalar rho_min_crossdiff = 0;
    bool hopf_capable = false;          // rho >= rho_min_hopf
    bool turing_only = false;           // rho <  rho_max_turing_only
    bool crossdiff_sufficient = false;  // rho >  rho_min_crossdiff
};

template <typename Scalar>
RegimeReport<Scalar> regime_report(const DiffusionTensor<Scalar>& dt, Scalar gamma, Scalar a, Scalar rho,
                                   const Mode& mode) {
    if (!(rho > 0)) throw DomainError("rho must be positive");
    RegimeReport<Scalar> r;
    r.rho = rho;
    r.rho_min_hopf = rho_min_hopf(dt.d(), gamma, a, mode);
    r.rho_max_turing_only = rho_max_turing_only(dt.d(), gamma, a, mode);
    r.rho_min_crossdiff = rho_min_crossdiff(dt, gamma, a, mode);
    r.hopf_capable = rho >= r.rho_min_hopf;
    r.turing_only = rho < r.rho_max_turing_only;
    r.crossdiff_sufficient = rho > r.rho_min_crossdiff;
    return r;
}

}  // namespace crossrd
