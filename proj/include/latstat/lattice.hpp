#pragma once

// Planar lattice <1, z> with z = x + iy in the upper half-plane: primitive
// vectors v = cz + d, minimal oriented basis completions v' = az + b with
// ad - bc = 1, skewness sk(v,v') = <v',v>/|v|^2 = Re(v'/v), and the signed
// ratio rho(v) = +-|v'|/|v|.
//
// When x and x^2+y^2 are both rational the shape runs in exact mode: |v|^2,
// sk and the window reduction are computed in rational arithmetic, making the
// geometric identity checks exact.

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>

#include "latstat/errors.hpp"
#include "latstat/rational.hpp"

namespace latstat {

using std::int64_t;

// Coordinates are guarded so that all products fit in 64 bits.
inline constexpr int64_t kCoordLimit = int64_t{1} << 30;

inline void check_coord(int64_t v, const char* what) {
    if (v > kCoordLimit || v < -kCoordLimit)
        throw OverflowGuard(std::string(what) + " exceeds 2^30 coordinate guard");
}

struct LatticeShape {
    double x = 0.0;   // Re z
    double y = 1.0;   // Im z > 0
    double area = 1.0; // = y
    double mu = 1.0;   // length of the shortest nonzero lattice vector
    bool exact = false;
    Rat xr;     // x, valid in exact mode
    Rat rr;     // x^2 + y^2, valid in exact mode
    Rat mu_sq;  // mu^2, valid in exact mode

    static LatticeShape from_xy(double x, double y);
    // r must equal x^2 + y^2; y_hint, when finite, supplies the double value
    // of y (e.g. the one the user typed) instead of sqrt(r - x^2).
    static LatticeShape from_exact(const Rat& x, const Rat& r,
                                   double y_hint = std::numeric_limits<double>::quiet_NaN());
};

struct PrimitiveVector {
    int64_t c = 0;
    int64_t d = 1;

    // Canonicalizes the +- class: c > 0, or c == 0 and d == 1.
    PrimitiveVector(int64_t c_, int64_t d_) {
        check_coord(c_, "|c|");
        check_coord(d_, "|d|");
        int64_t g = std::gcd(c_ < 0 ? -c_ : c_, d_ < 0 ? -d_ : d_);
        if (g != 1) throw NotCoprime(c_, d_, g);
        if (c_ < 0 || (c_ == 0 && d_ < 0)) {
            c_ = -c_;
            d_ = -d_;
        }
        c = c_;
        d = d_;
    }

    friend bool operator==(const PrimitiveVector& a, const PrimitiveVector& b) {
        return a.c == b.c && a.d == b.d;
    }
};

struct Completion {
    int64_t a = 1;
    int64_t b = 0;

    friend bool operator==(const Completion& a_, const Completion& b_) {
        return a_.a == b_.a && a_.b == b_.b;
    }
};

struct OrbitSample {
    int64_t c = 0, d = 1;  // primitive vector, canonical class representative
    int64_t a = 1, b = 0;  // minimal completion, det [[a,b],[c,d]] = +1
    double norm_sq = 1.0;  // |v|^2
    double sk = 0.0;       // least skewness, in (-1/2, 1/2]
    double rho = 0.0;      // signed ratio +-|v'|/|v|
    double im = 0.0;       // Im(gamma z) = area / |v|^2
};

namespace detail {

// |cz+d|^2 = c^2 (x^2+y^2) + 2cd x + d^2 as an exact rational.
inline Rat norm_sq_rat(const LatticeShape& L, int64_t c, int64_t d) {
    return L.rr * Rat(c * c) + L.xr * Rat(2 * c * d) + Rat(d * d);
}

// <v',v> = ac (x^2+y^2) + (ad+bc) x + bd, the numerator of sk(v,v').
inline Rat inner_rat(const LatticeShape& L, int64_t a, int64_t b, int64_t c, int64_t d) {
    return L.rr * Rat(a * c) + L.xr * Rat(a * d + b * c) + Rat(b * d);
}

inline double norm_sq_f(const LatticeShape& L, int64_t c, int64_t d) {
    double u = static_cast<double>(c) * L.x + static_cast<double>(d);
    double w = static_cast<double>(c) * L.y;
    return u * u + w * w;
}

inline double inner_f(const LatticeShape& L, int64_t a, int64_t b, int64_t c, int64_t d) {
    double r = L.x * L.x + L.y * L.y;
    return static_cast<double>(a * c) * r + static_cast<double>(a * d + b * c) * L.x +
           static_cast<double>(b * d);
}

} // namespace detail

// |cz+d|^2 using the shape's computation mode.
inline double norm_sq_value(const LatticeShape& L, int64_t c, int64_t d) {
    if (L.exact) return detail::norm_sq_rat(L, c, d).to_double();
    return detail::norm_sq_f(L, c, d);
}

// One completion of a coprime pair: (a,b) with a*d - b*c = 1. The returned
// representative has a in [0,|c|) when c != 0, matching a = (a0 mod |c|);
// minimal_completion re-normalizes, so any representative would serve.
inline std::pair<int64_t, int64_t> bezout(int64_t c, int64_t d) {
    check_coord(c, "|c|");
    check_coord(d, "|d|");
    // Extended Euclid: find x*c + y*d = g.
    int64_t r0 = c, r1 = d;
    int64_t x0 = 1, x1 = 0;
    int64_t y0 = 0, y1 = 1;
    while (r1 != 0) {
        int64_t q = r0 / r1;
        r0 -= q * r1; std::swap(r0, r1);
        x0 -= q * x1; std::swap(x0, x1);
        y0 -= q * y1; std::swap(y0, y1);
    }
    if (r0 < 0) {
        r0 = -r0;
        x0 = -x0;
        y0 = -y0;
    }
    if (r0 != 1) throw NotCoprime(c, d, r0);
    int64_t a = y0;     // a*d - b*c = y0*d + x0*c = 1 with b = -x0
    int64_t b = -x0;
    if (c != 0) {
        int64_t ac = c < 0 ? -c : c;
        int64_t a2 = ((a % ac) + ac) % ac;
        int64_t n = (a2 - a) / c;
        a = a2;
        b += n * d;
    } else {
        b = 0;          // d = +-1, a = d; the (d,0) representative
    }
    assert(a * d - b * c == 1);
    return {a, b};
}

// The skewness of a chosen completion (not reduced to the window).
inline double skewness(const LatticeShape& L, const PrimitiveVector& v, const Completion& w) {
    if (w.a * v.d - w.b * v.c != 1)
        throw GeometryViolation("skewness: completion does not satisfy ad - bc = 1");
    if (L.exact)
        return (detail::inner_rat(L, w.a, w.b, v.c, v.d) / detail::norm_sq_rat(L, v.c, v.d))
            .to_double();
    return detail::inner_f(L, w.a, w.b, v.c, v.d) / detail::norm_sq_f(L, v.c, v.d);
}

// Exact-mode skewness as a rational; requires L.exact.
inline Rat skewness_rat(const LatticeShape& L, const PrimitiveVector& v, const Completion& w) {
    if (!L.exact) throw Error("skewness_rat requires an exact-mode lattice shape");
    if (w.a * v.d - w.b * v.c != 1)
        throw GeometryViolation("skewness_rat: completion does not satisfy ad - bc = 1");
    return detail::inner_rat(L, w.a, w.b, v.c, v.d) / detail::norm_sq_rat(L, v.c, v.d);
}

// The completion minimizing |v'| over shifts (a+nc, b+nd), with the tie at
// |sk| = 1/2 resolved into the half-open window (-1/2, 1/2].
inline Completion minimal_completion(const LatticeShape& L, const PrimitiveVector& v) {
    auto [a0, b0] = bezout(v.c, v.d);
    int64_t n;
    if (L.exact) {
        Rat sk0 = detail::inner_rat(L, a0, b0, v.c, v.d) / detail::norm_sq_rat(L, v.c, v.d);
        n = (Rat(1, 2) - sk0).floor();
    } else {
        double sk0 = detail::inner_f(L, a0, b0, v.c, v.d) / detail::norm_sq_f(L, v.c, v.d);
        n = static_cast<int64_t>(std::floor(0.5 - sk0));
    }
    detail::int128 a = (detail::int128)a0 + (detail::int128)n * v.c;
    detail::int128 b = (detail::int128)b0 + (detail::int128)n * v.d;
    if (detail::abs128(a) > 2 * kCoordLimit || detail::abs128(b) > 2 * kCoordLimit)
        throw OverflowGuard("minimal completion exceeds coordinate guard");
    return Completion{static_cast<int64_t>(a), static_cast<int64_t>(b)};
}

// Full per-vector record: minimal completion, |v|^2, sk, rho, Im(gamma z).
// The sign of rho is + iff sk >= 0 (acute angle; the right angle sk = 0 is
// assigned +).
inline OrbitSample signed_ratio(const LatticeShape& L, const PrimitiveVector& v) {
    Completion w = minimal_completion(L, v);
    OrbitSample s;
    s.c = v.c;
    s.d = v.d;
    s.a = w.a;
    s.b = w.b;
    int sgn;
    if (L.exact) {
        Rat nsq = detail::norm_sq_rat(L, v.c, v.d);
        Rat skr = detail::inner_rat(L, w.a, w.b, v.c, v.d) / nsq;
        s.norm_sq = nsq.to_double();
        s.sk = skr.to_double();
        sgn = skr.sign() >= 0 ? 1 : -1;
    } else {
        s.norm_sq = detail::norm_sq_f(L, v.c, v.d);
        s.sk = detail::inner_f(L, w.a, w.b, v.c, v.d) / s.norm_sq;
        sgn = s.sk >= 0.0 ? 1 : -1;
    }
    s.im = L.area / s.norm_sq;
    // |v'|^2 / |v|^2 = sk^2 + Im(gamma z)^2 since v'/v = sk + i area/|v|^2.
    s.rho = sgn * std::sqrt(s.sk * s.sk + s.im * s.im);
    return s;
}

// mu(L) = min |cz+d| over (c,d) != (0,0). Search bound: |cz+d| >= |c| y, and
// (0,1) already has length 1, so only |c| <= ceil(1/y)+1 can compete; for each
// c the quadratic in d is minimized near d = -c x.
inline double minimal_vector_length(const LatticeShape& L) {
    double best = 1.0; // (0,1)
    int64_t cmax = static_cast<int64_t>(std::ceil(1.0 / L.y)) + 1;
    for (int64_t c = 1; c <= cmax; ++c) {
        double mid = -static_cast<double>(c) * L.x;
        int64_t d0 = static_cast<int64_t>(std::floor(mid));
        for (int64_t d = d0 - 2; d <= d0 + 3; ++d) {
            double q = detail::norm_sq_f(L, c, d);
            if (q < best) best = q;
        }
    }
    return std::sqrt(best);
}

namespace detail {

inline Rat minimal_vector_norm_sq_rat(const LatticeShape& L) {
    Rat best(1); // (0,1)
    int64_t cmax = static_cast<int64_t>(std::ceil(1.0 / L.y)) + 1;
    for (int64_t c = 1; c <= cmax; ++c) {
        double mid = -static_cast<double>(c) * L.x;
        int64_t d0 = static_cast<int64_t>(std::floor(mid));
        for (int64_t d = d0 - 2; d <= d0 + 3; ++d) {
            Rat q = norm_sq_rat(L, c, d);
            if (q < best) best = q;
        }
    }
    return best;
}

} // namespace detail

inline LatticeShape LatticeShape::from_xy(double x, double y) {
    if (!(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
        throw Error("lattice shape requires finite x and y > 0");
    LatticeShape L;
    L.x = x;
    L.y = y;
    L.area = y;
    L.exact = false;
    L.mu = minimal_vector_length(L);
    return L;
}

inline LatticeShape LatticeShape::from_exact(const Rat& x, const Rat& r, double y_hint) {
    Rat y_sq = r - x * x;
    if (y_sq.sign() <= 0) throw Error("exact lattice shape requires x^2 + y^2 > x^2");
    LatticeShape L;
    L.exact = true;
    L.xr = x;
    L.rr = r;
    L.x = x.to_double();
    L.y = std::isfinite(y_hint) ? y_hint : std::sqrt(y_sq.to_double());
    if (!(L.y > 0.0)) throw Error("lattice shape requires y > 0");
    L.area = L.y;
    L.mu_sq = detail::minimal_vector_norm_sq_rat(L);
    L.mu = std::sqrt(L.mu_sq.to_double());
    return L;
}

// Per-sample geometric checks:
//   (i)   |v'|^2 <= |v|^2/4 + (area/|v|)^2          (minimal completion bound)
//   (ii)  sin(alpha) = area/(|v||v'|) <= area/(mu |v|), i.e. mu <= |v'|
//   (iii) Im(gamma z) * |v|^2 = area
// plus the integer determinant and the sk window. Exact mode decides (i)-(iii)
// in rational arithmetic; float mode allows 1e-12-scale slack.
struct GeometryCheck {
    bool ok = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual() const { return lhs - rhs; }
};

struct GeometryReport {
    bool det_ok = false;
    bool window_ok = false;
    GeometryCheck completion_bound; // (i)
    GeometryCheck angle_bound;      // (ii), as sin(alpha) vs its bound
    GeometryCheck area_identity;    // (iii), as |im*|v|^2 - area| vs tolerance
    bool all_ok() const {
        return det_ok && window_ok && completion_bound.ok && angle_bound.ok &&
               area_identity.ok;
    }
};

inline GeometryReport check_geometry(const OrbitSample& s, const LatticeShape& L) {
    GeometryReport rep;
    rep.det_ok = (s.a * s.d - s.b * s.c == 1);

    double nsq_v = norm_sq_value(L, s.c, s.d);
    double nsq_w = norm_sq_value(L, s.a, s.b);

    rep.completion_bound.lhs = nsq_w;
    rep.completion_bound.rhs = nsq_v / 4.0 + (L.area * L.area) / nsq_v;
    rep.angle_bound.lhs = L.area / std::sqrt(nsq_v * nsq_w);
    rep.angle_bound.rhs = L.area / (L.mu * std::sqrt(nsq_v));
    rep.area_identity.lhs = std::abs(s.im * s.norm_sq - L.area);
    rep.area_identity.rhs = 1e-12 * std::max(1.0, L.area);

    if (L.exact) {
        Rat nsq = detail::norm_sq_rat(L, s.c, s.d);
        Rat nsqw = detail::norm_sq_rat(L, s.a, s.b);
        Rat skr = detail::inner_rat(L, s.a, s.b, s.c, s.d) / nsq;
        Rat y_sq = L.rr - L.xr * L.xr;
        rep.window_ok = (Rat(-1, 2) < skr) && (skr <= Rat(1, 2));
        rep.completion_bound.ok = (nsqw <= nsq / Rat(4) + y_sq / nsq);
        rep.angle_bound.ok = (L.mu_sq <= nsqw);
        // im was constructed as area/norm_sq with norm_sq the exact value, so
        // the identity holds as stated; verify the construction bitwise.
        rep.area_identity.ok =
            (s.norm_sq == nsq.to_double()) && (s.im == L.area / s.norm_sq);
    } else {
        rep.window_ok = (-0.5 - 1e-12 < s.sk) && (s.sk <= 0.5 + 1e-12);
        rep.completion_bound.ok =
            rep.completion_bound.lhs <=
            rep.completion_bound.rhs + 1e-12 * std::max(1.0, rep.completion_bound.rhs);
        rep.angle_bound.ok =
            rep.angle_bound.lhs <= rep.angle_bound.rhs + 1e-12 * std::max(1.0, rep.angle_bound.rhs);
        rep.area_identity.ok = rep.area_identity.lhs <= rep.area_identity.rhs;
    }
    return rep;
}

// Throwing form of check_geometry for pipelines that must not emit bad samples.
inline void require_geometry(const OrbitSample& s, const LatticeShape& L) {
    GeometryReport rep = check_geometry(s, L);
    if (rep.all_ok()) return;
    std::string msg = "geometry violation for (c,d)=(" + std::to_string(s.c) + "," +
                      std::to_string(s.d) + "), (a,b)=(" + std::to_string(s.a) + "," +
                      std::to_string(s.b) + "):";
    if (!rep.det_ok) msg += " det != 1;";
    if (!rep.window_ok) msg += " sk outside (-1/2,1/2];";
    if (!rep.completion_bound.ok)
        msg += " |v'|^2 = " + std::to_string(rep.completion_bound.lhs) + " > " +
               std::to_string(rep.completion_bound.rhs) + ";";
    if (!rep.angle_bound.ok)
        msg += " sin(alpha) = " + std::to_string(rep.angle_bound.lhs) + " > " +
               std::to_string(rep.angle_bound.rhs) + ";";
    if (!rep.area_identity.ok) msg += " im*|v|^2 != area;";
    throw GeometryViolation(msg);
}

} // namespace latstat
