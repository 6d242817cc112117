#pragma once

// Closed-form Neumann eigenvalues of the Laplacian on rectangle, disc and
// annulus, and the radial Bessel-series eigenfunctions on the annulus.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "crossrd/errors.hpp"

namespace crossrd {

enum class GeometryKind { Rectangle, Disc, Annulus };

/// Domain description. `length` is the rectangle side L; `rho` is the disc
/// radius or the annulus thickness b - a; `inner_radius` is a (annulus only).
template <typename Scalar = double>
struct Geometry {
    GeometryKind kind = GeometryKind::Annulus;
    Scalar length = 0;
    Scalar rho = 0;
    Scalar inner_radius = 0;

    static Geometry rectangle(Scalar L) {
        if (!(L > 0)) throw DomainError("rectangle side L must be positive");
        return {GeometryKind::Rectangle, L, 0, 0};
    }
    static Geometry disc(Scalar radius) {
        if (!(radius > 0)) throw DomainError("disc radius must be positive");
        return {GeometryKind::Disc, 0, radius, 0};
    }
    static Geometry annulus(Scalar a, Scalar rho) {
        if (!(a > 0)) throw DomainError("annulus inner radius a must be positive");
        if (!(rho > 0)) throw DomainError("annulus thickness rho must be positive");
        return {GeometryKind::Annulus, 0, rho, a};
    }

    Scalar outer_radius() const { return inner_radius + rho; }
};

inline std::string to_string(GeometryKind kind) {
    switch (kind) {
        case GeometryKind::Rectangle: return "rectangle";
        case GeometryKind::Disc: return "disc";
        case GeometryKind::Annulus: return "annulus";
    }
    return "unknown";
}

/// Eigenmode index. On disc/annulus `n` is a real Bessel order outside (1/2)Z;
/// on the rectangle both indices are non-negative integers.
struct Mode {
    int m = 1;
    double n = 0.1;
};

inline bool is_half_integer_multiple(double n) {
    const double twice = 2.0 * n;
    return std::abs(twice - std::round(twice)) < 1e-12;
}

inline void require_bessel_mode(const Mode& mode) {
    if (mode.m < 0) throw DomainError("mode index m must be non-negative");
    if (is_half_integer_multiple(mode.n))
        throw DomainError("Bessel order n must not lie in (1/2)Z, got n=" + std::to_string(mode.n));
}

/// Polynomial mode weight (2m+1)(n+2m+1)(n+4m) shared by every circular form.
template <typename Scalar>
Scalar mode_weight(int m, Scalar n) {
    return Scalar(2 * m + 1) * (n + Scalar(2 * m + 1)) * (n + Scalar(4 * m));
}

/// The (n + 4m + 2) denominator term.
template <typename Scalar>
Scalar mode_order_term(int m, Scalar n) {
    return n + Scalar(4 * m + 2);
}

/// f(rho, n) = (a^(n-1) + (rho+a)^(n-1)) / (a^(n+1) + (rho+a)^(n+1)).
///
/// Tends to 1/(a(rho+a)) as n -> 0 and to 1/rho^2 as a -> 0. As n -> -inf it
/// tends to 1/a^2, which coincides with 2/(a(rho+a)) only when rho = a.
template <typename Scalar>
Scalar domain_factor(Scalar a, Scalar rho, Scalar n) {
    using std::pow;
    if (!(a > 0) || !(rho > 0)) throw DomainError("domain_factor requires a > 0 and rho > 0");
    const Scalar b = rho + a;
    return (pow(a, n - 1) + pow(b, n - 1)) / (pow(a, n + 1) + pow(b, n + 1));
}

/// Samples f(rho, n) on an evenly spaced n grid; used to inspect the limits numerically.
template <typename Scalar>
std::vector<std::pair<Scalar, Scalar>> domain_factor_probe(Scalar a, Scalar rho, Scalar n_from, Scalar n_to,
                                                           int count) {
    if (count < 2) throw DomainError("domain_factor_probe needs at least two samples");
    std::vector<std::pair<Scalar, Scalar>> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        const Scalar n = n_from + (n_to - n_from) * Scalar(i) / Scalar(count - 1);
        out.emplace_back(n, domain_factor(a, rho, n));
    }
    return out;
}

/// Annulus eigenvalue, exact form:
///   k^2 = 4 (a^n b + a b^n)(2m+1)(n+2m+1)(n+4m) / (a b (a^(n+1) + b^(n+1)) (n+4m+2)).
template <typename Scalar>
Scalar eigenvalue_annulus(Scalar a, Scalar rho, const Mode& mode) {
    using std::pow;
    if (!(a > 0) || !(rho > 0)) throw DomainError("annulus requires a > 0 and rho > 0");
    require_bessel_mode(mode);
    const Scalar n = Scalar(mode.n);
    const Scalar b = a + rho;
    const Scalar num = Scalar(4) * (pow(a, n) * b + a * pow(b, n)) * mode_weight(mode.m, n);
    const Scalar den = a * b * (pow(a, n + 1) + pow(b, n + 1)) * mode_order_term(mode.m, n);
    return num / den;
}

/// Annulus eigenvalue written through the domain factor: f(rho,n) 4(2m+1)(n+2m+1)(n+4m)/(n+4m+2).
template <typename Scalar>
Scalar eigenvalue_annulus_factored(Scalar a, Scalar rho, const Mode& mode) {
    require_bessel_mode(mode);
    const Scalar n = Scalar(mode.n);
    return domain_factor(a, rho, n) * Scalar(4) * mode_weight(mode.m, n) / mode_order_term(mode.m, n);
}

/// Annulus eigenvalue with f replaced by the bound 2/(a(rho+a)):
///   k^2 = 8 (2m+1)(n+2m+1)(n+4m) / (a (rho+a) (n+4m+2)).
/// This is the form the domain-size bounds are built on.
template <typename Scalar>
Scalar eigenvalue_annulus_supremum(Scalar a, Scalar rho, const Mode& mode) {
    if (!(a > 0) || !(rho > 0)) throw DomainError("annulus requires a > 0 and rho > 0");
    require_bessel_mode(mode);
    const Scalar n = Scalar(mode.n);
    return Scalar(8) * mode_weight(mode.m, n) / (a * (rho + a) * mode_order_term(mode.m, n));
}

template <typename Scalar>
Scalar eigenvalue_disc(Scalar rho, const Mode& mode) {
    if (!(rho > 0)) throw DomainError("disc radius must be positive");
    require_bessel_mode(mode);
    const Scalar n = Scalar(mode.n);
    return Scalar(4) * mode_weight(mode.m, n) / (rho * rho * mode_order_term(mode.m, n));
}

/// (m^2 + n^2) pi^2 / L^2 with integer m, n >= 0.
template <typename Scalar>
Scalar eigenvalue_rectangle(Scalar L, const Mode& mode) {
    if (!(L > 0)) throw DomainError("rectangle side L must be positive");
    if (mode.m < 0 || mode.n < 0 || mode.n != std::floor(mode.n))
        throw DomainError("rectangle modes need non-negative integer indices");
    const Scalar pi = std::numbers::pi_v<Scalar>;
    const Scalar n = Scalar(mode.n);
    return (Scalar(mode.m * mode.m) + n * n) * pi * pi / (L * L);
}

enum class AnnulusForm { Exact, Supremum };

template <typename Scalar>
Scalar eigenvalue(const Geometry<Scalar>& g, const Mode& mode, AnnulusForm form = AnnulusForm::Exact) {
    switch (g.kind) {
        case GeometryKind::Rectangle: return eigenvalue_rectangle(g.length, mode);
        case GeometryKind::Disc: return eigenvalue_disc(g.rho, mode);
        case GeometryKind::Annulus:
            return form == AnnulusForm::Exact ? eigenvalue_annulus(g.inner_radius, g.rho, mode)
                                              : eigenvalue_annulus_supremum(g.inner_radius, g.rho, mode);
    }
    throw DomainError("unknown geometry kind");
}

/// Modes m in [0, max_m] crossed with n = n0 + j*dn (j < n_count), skipping orders
/// in (1/2)Z. For the rectangle, n is rounded to an integer.
inline std::vector<Mode> mode_lattice(GeometryKind kind, int max_m, double n0, double dn, int n_count) {
    std::vector<Mode> modes;
    for (int m = 0; m <= max_m; ++m) {
        for (int j = 0; j < n_count; ++j) {
            double n = n0 + j * dn;
            if (kind == GeometryKind::Rectangle) {
                n = std::round(n);
                if (n < 0) continue;
            } else if (is_half_integer_multiple(n)) {
                continue;
            }
            modes.push_back({m, n});
        }
    }
    return modes;
}

/// Truncated series R1 + R2 at x = k r (C0 = 1):
///
///   R1 = sum_j (-1)^j x^(2j+n) / (4^j j! (n+1)(n+2)...(n+j))
///   R2 = sum_j (-1)^j x^(2j-n) / (4^j j! (1-n)(2-n)...(j-n))
///
/// Summation stops after `truncation` terms or once both terms drop below
/// `tail_tolerance`.
template <typename Scalar>
Scalar radial_series(Scalar n, Scalar x, int truncation = 25, Scalar tail_tolerance = Scalar(1e-14)) {
    using std::abs;
    using std::pow;
    if (truncation < 1) throw DomainError("truncation must be at least 1");
    if (!(x > 0)) throw DomainError("radial_series requires x > 0");
    if (is_half_integer_multiple(double(n))) throw DomainError("Bessel order n must not lie in (1/2)Z");
    const Scalar q = -x * x / Scalar(4);
    Scalar t1 = pow(x, n);
    Scalar t2 = pow(x, -n);
    Scalar sum = t1 + t2;
    for (int j = 1; j < truncation; ++j) {
        t1 *= q / (Scalar(j) * (n + Scalar(j)));
        t2 *= q / (Scalar(j) * (Scalar(j) - n));
        sum += t1 + t2;
        if (abs(t1) < tail_tolerance && abs(t2) < tail_tolerance) break;
    }
    return sum;
}

/// Radial eigenfunction on the annulus at radius r, with k^2 the exact
/// eigenvalue of `mode`.
template <typename Scalar>
Scalar radial_eigenfunction(Scalar a, Scalar rho, const Mode& mode, Scalar r, int truncation = 25,
                            Scalar tail_tolerance = Scalar(1e-14)) {
    using std::sqrt;
    if (r < a || r > a + rho) throw DomainError("radius outside the annulus");
    const Scalar x = sqrt(eigenvalue_annulus(a, rho, mode)) * r;
    return radial_series(Scalar(mode.n), x, truncation, tail_tolerance);
}

}  // namespace crossrd
