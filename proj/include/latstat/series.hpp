#pragma once

// Truncated evaluation of the twisted series
//
//   V_m(z,s) = sum over Gamma_inf \ Gamma of Im(gamma z)^s e(m Re(gamma z)),
//
// absolutely convergent for Re(s) > 1, summed over the canonical +-classes
// with |v| <= trunc in the deterministic merged order. V_0(i,s) has the
// closed form 2 zeta(s) beta(s) / zeta(2s) (Gaussian-integer Epstein zeta
// factorization), which serves as an independent reference, and every V_m
// satisfies (Delta - s(1-s)) V_m(z,s) = (2 pi m)^2 V_m(z,s+2), checked here
// by central finite differences.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "latstat/enumerate.hpp"
#include "latstat/lattice.hpp"
#include "latstat/mod_one.hpp"

namespace latstat {

struct SeriesPoint {
    long long m = 0;
    std::complex<double> s;
    double trunc = 0.0;
    std::complex<double> value;
    double tail_bound = 0.0; // density-based estimate of the truncation error
};

namespace detail {

// Estimate of area^sigma * sum_{|v| > T} |v|^{-2 sigma} over +-classes from
// the quadratic growth of the class count, with a 4x safety factor over the
// asymptotic density 3/(pi * area).
inline double series_tail_bound(double area, double sigma, double trunc) {
    return 4.0 * std::pow(area, sigma - 1.0) * std::pow(trunc, 2.0 - 2.0 * sigma) /
           (sigma - 1.0);
}

} // namespace detail

inline SeriesPoint eval_series(const LatticeShape& L, long long m, std::complex<double> s,
                               double trunc, int workers = 1) {
    if (!(s.real() > 1.0 + 1e-6))
        throw ConvergenceDomain("series evaluation requires Re(s) > 1");
    if (!(trunc > 0.0) || !std::isfinite(trunc))
        throw std::invalid_argument("trunc must be positive and finite");

    EnumSpec spec = EnumSpec::by_norm(L, trunc, 1024, workers);
    EnumResult res = enumerate(spec);

    const double sigma = s.real();
    const double t = s.imag();
    const double two_pi = 2.0 * std::numbers::pi;
    CompensatedSum re, im;
    for (const OrbitSample& smp : res.samples) {
        // Im(gamma z)^s e(m sk) = e^{sigma log(im)} * e^{i (t log(im) + 2 pi m sk)}
        double li = std::log(smp.im);
        double mag = std::exp(sigma * li);
        double phase = t * li + two_pi * static_cast<double>(m) * smp.sk;
        re.add(mag * std::cos(phase));
        im.add(mag * std::sin(phase));
    }
    SeriesPoint pt;
    pt.m = m;
    pt.s = s;
    pt.trunc = trunc;
    pt.value = {re.value(), im.value()};
    pt.tail_bound = detail::series_tail_bound(L.area, sigma, trunc);
    return pt;
}

namespace detail {

// Hurwitz zeta(s, a) = sum (n+a)^{-s} for s > 1, 0 < a <= 1, by direct
// summation to N with the Euler-Maclaurin tail. The first omitted correction
// is of order s(s+1)...(s+4) (N+a)^{-s-5}/30240, far below 1e-10 for N = 1e4.
inline double hurwitz_zeta(double s, double a) {
    const int N = 10000;
    CompensatedSum sum;
    for (int k = 0; k < N; ++k) sum.add(std::pow(static_cast<double>(k) + a, -s));
    const double x = static_cast<double>(N) + a;
    double tail = std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s) +
                  s * std::pow(x, -s - 1.0) / 12.0 -
                  s * (s + 1.0) * (s + 2.0) * std::pow(x, -s - 3.0) / 720.0;
    return sum.value() + tail;
}

} // namespace detail

// Independent reference for V_0(i,s): E(i,s) = 2 zeta(s) beta(s) / zeta(2s),
// with zeta and the Dirichlet beta summed to a remainder below 1e-10
// (beta(s) = 4^{-s} (zeta(s,1/4) - zeta(s,3/4))).
inline double eisenstein_reference(double s) {
    if (!(s > 1.0 + 1e-6))
        throw ConvergenceDomain("Eisenstein reference requires s > 1");
    double zeta_s = detail::hurwitz_zeta(s, 1.0);
    double zeta_2s = detail::hurwitz_zeta(2.0 * s, 1.0);
    double beta_s =
        std::pow(4.0, -s) * (detail::hurwitz_zeta(s, 0.25) - detail::hurwitz_zeta(s, 0.75));
    return 2.0 * zeta_s * beta_s / zeta_2s;
}

struct LaplacianReport {
    std::complex<double> lhs;  // (Delta - s(1-s)) V_m(z,s), stencil estimate
    std::complex<double> rhs;  // (2 pi m)^2 V_m(z,s+2)
    double rel_err = 0.0;
    double h = 0.0;
    double stencil_error = 0.0; // Richardson |D_2h - D_h| / 3
};

// Verifies (Delta - s(1-s)) V_m = (2 pi m)^2 V_m(.,s+2) at real s > 1 with a
// 5-point second-difference stencil; every stencil node re-enumerates the
// perturbed lattice shape (float path for all nodes, so the five evaluations
// share one computation mode). For m = 0 the right side vanishes and the
// residual is measured against |s(1-s) V_0| instead.
inline LaplacianReport laplacian_residual(const LatticeShape& L, long long m, double s,
                                          double trunc, double h, int workers = 1) {
    if (!(s > 1.0 + 1e-6))
        throw ConvergenceDomain("Laplacian check requires s > 1");
    if (!(h > 0.0) || !(h < 0.1)) throw std::invalid_argument("h must lie in (0, 0.1)");
    if (!(L.y - 2.0 * h > 0.0))
        throw std::invalid_argument("stencil leaves the upper half-plane");

    const double x = L.x;
    const double y = L.y;
    auto V = [&](double px, double py, double ps) {
        return eval_series(LatticeShape::from_xy(px, py), m, {ps, 0.0}, trunc, workers).value;
    };

    const std::complex<double> v0 = V(x, y, s);
    auto second_diff = [&](double step) {
        return -(y * y) *
               (V(x + step, y, s) + V(x - step, y, s) + V(x, y + step, s) + V(x, y - step, s) -
                4.0 * v0) /
               (step * step);
    };
    const std::complex<double> lap_h = second_diff(h);
    const std::complex<double> lap_2h = second_diff(2.0 * h);

    LaplacianReport rep;
    rep.h = h;
    rep.stencil_error = std::abs(lap_2h - lap_h) / 3.0;
    rep.lhs = lap_h - s * (1.0 - s) * v0;
    const double fourpi2m2 = std::pow(2.0 * std::numbers::pi * static_cast<double>(m), 2.0);
    rep.rhs = fourpi2m2 * V(x, y, s + 2.0);
    const double denom =
        m == 0 ? std::max(std::abs(s * (1.0 - s)) * std::abs(v0), 1e-30)
               : std::max(std::abs(rep.rhs), 1e-30);
    rep.rel_err = std::abs(rep.lhs - rep.rhs) / denom;
    if (rep.stencil_error > 0.1 * denom)
        throw StepTooLarge("stencil error estimate " + std::to_string(rep.stencil_error) +
                           " dominates the identity scale " + std::to_string(denom) +
                           "; reduce h");
    return rep;
}

} // namespace latstat
