#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "latstat/lattice.hpp"

using namespace latstat;

namespace {

LatticeShape square() { return LatticeShape::from_exact(Rat(0), Rat(1)); }         // z = i
LatticeShape half_plus_i() { return LatticeShape::from_exact(Rat(1, 2), Rat(5, 4)); } // z = (1+2i)/2
LatticeShape hexagonal() { return LatticeShape::from_exact(Rat(1, 2), Rat(1)); }   // z = (1+i sqrt 3)/2

// Exhaustive minimization of |v'|^2 over shifts (a0+nc, b0+nd), ties resolved
// into the sk window; independent of minimal_completion's window arithmetic.
Completion brute_force_completion(const LatticeShape& L, const PrimitiveVector& v,
                                  int* n_minimizers = nullptr, int range = 50) {
    auto [a0, b0] = bezout(v.c, v.d);
    Rat best_norm(0);
    bool have = false;
    int count = 0;
    Completion best{a0, b0};
    for (int n = -range; n <= range; ++n) {
        std::int64_t a = a0 + n * v.c;
        std::int64_t b = b0 + n * v.d;
        Rat nsq = detail::norm_sq_rat(L, a, b);
        if (!have || nsq < best_norm) {
            best_norm = nsq;
            have = true;
            count = 1;
            best = Completion{a, b};
        } else if (nsq == best_norm) {
            ++count;
            Rat sk = skewness_rat(L, v, Completion{a, b});
            if (Rat(-1, 2) < sk && sk <= Rat(1, 2)) best = Completion{a, b};
        }
    }
    if (n_minimizers) *n_minimizers = count;
    return best;
}

} // namespace

TEST(Bezout, KnownCompletions) {
    EXPECT_EQ(bezout(0, 1), (std::pair<std::int64_t, std::int64_t>(1, 0)));
    EXPECT_EQ(bezout(1, 0), (std::pair<std::int64_t, std::int64_t>(0, -1)));
    EXPECT_EQ(bezout(5, 2), (std::pair<std::int64_t, std::int64_t>(3, 1)));
    EXPECT_EQ(3 * 2 - 1 * 5, 1);
}

TEST(Bezout, DeterminantAndBoundsOnRandomCoprimePairs) {
    std::mt19937 rng(20240811);
    std::uniform_int_distribution<std::int64_t> dist(-100000, 100000);
    int checked = 0;
    while (checked < 500) {
        std::int64_t c = dist(rng), d = dist(rng);
        if (std::gcd(c < 0 ? -c : c, d < 0 ? -d : d) != 1) continue;
        ++checked;
        auto [a, b] = bezout(c, d);
        EXPECT_EQ(a * d - b * c, 1);
        std::int64_t mx = std::max(c < 0 ? -c : c, d < 0 ? -d : d);
        EXPECT_LE(a < 0 ? -a : a, mx);
        EXPECT_LE(b < 0 ? -b : b, mx);
        if (c != 0) {
            EXPECT_GE(a, 0);
            EXPECT_LT(a, c < 0 ? -c : c);
        }
    }
}

TEST(Bezout, NotCoprimeReportsGcd) {
    try {
        bezout(4, 6);
        FAIL() << "expected NotCoprime";
    } catch (const NotCoprime& e) {
        EXPECT_EQ(e.gcd, 2);
    }
    EXPECT_THROW(bezout(0, 0), NotCoprime);
}

TEST(Bezout, CoordinateGuard) {
    EXPECT_THROW(bezout((std::int64_t{1} << 31), 3), OverflowGuard);
}

TEST(PrimitiveVectorType, CanonicalSignAndValidation) {
    EXPECT_EQ(PrimitiveVector(-2, -1), PrimitiveVector(2, 1));
    EXPECT_EQ(PrimitiveVector(0, -1), PrimitiveVector(0, 1));
    PrimitiveVector v(3, -4);
    EXPECT_EQ(v.c, 3);
    EXPECT_EQ(v.d, -4);
    EXPECT_THROW(PrimitiveVector(2, 4), NotCoprime);
    EXPECT_THROW(PrimitiveVector(0, 0), NotCoprime);
}

TEST(MinimalCompletion, KnownValuesAtSquareLattice) {
    auto L = square();
    EXPECT_EQ(minimal_completion(L, PrimitiveVector(0, 1)), (Completion{1, 0}));
    EXPECT_EQ(skewness(L, PrimitiveVector(0, 1), Completion{1, 0}), 0.0);

    EXPECT_EQ(minimal_completion(L, PrimitiveVector(2, 1)), (Completion{1, 0}));
    EXPECT_EQ(skewness_rat(L, PrimitiveVector(2, 1), Completion{1, 0}), Rat(2, 5));

    // tie |v'| = 1 for both sk = -1/2 and +1/2; half-open window selects +1/2
    EXPECT_EQ(minimal_completion(L, PrimitiveVector(1, 1)), (Completion{1, 0}));
    EXPECT_EQ(skewness_rat(L, PrimitiveVector(1, 1), Completion{1, 0}), Rat(1, 2));
}

TEST(MinimalCompletion, MatchesBruteForceScan) {
    for (const LatticeShape& L : {square(), half_plus_i()}) {
        for (std::int64_t c = 0; c * c <= 400; ++c) {
            for (std::int64_t d = -20; d <= 20; ++d) {
                if (c * c + d * d > 400) continue;
                if (std::gcd(c, d < 0 ? -d : d) != 1) continue;
                if (c == 0 && d != 1) continue;
                PrimitiveVector v(c, d);
                Completion got = minimal_completion(L, v);
                int n_min = 0;
                Completion want = brute_force_completion(L, v, &n_min);
                EXPECT_EQ(got, want) << "c=" << c << " d=" << d;
                // uniqueness of the minimizer for |v| > 2 area / mu
                Rat nsq = detail::norm_sq_rat(L, c, d);
                double bound = 2.0 * L.area / L.mu;
                if (nsq.to_double() > bound * bound) {
                    EXPECT_EQ(n_min, 1);
                }
            }
        }
    }
}

TEST(Skewness, ShiftCovariance) {
    auto L = half_plus_i();
    std::mt19937 rng(7);
    std::uniform_int_distribution<std::int64_t> dist(-30, 30);
    int checked = 0;
    while (checked < 100) {
        std::int64_t c = dist(rng), d = dist(rng);
        if (c < 0 || (c == 0 && d != 1)) continue;
        if (std::gcd(c, d < 0 ? -d : d) != 1) continue;
        ++checked;
        PrimitiveVector v(c, d);
        Completion w = minimal_completion(L, v);
        Rat base = skewness_rat(L, v, w);
        for (int n : {-3, 1, 7}) {
            Completion shifted{w.a + n * c, w.b + n * d};
            EXPECT_EQ(skewness_rat(L, v, shifted), base + Rat(n));
        }
    }
}

TEST(Skewness, ValueExamplesAndComplexOracle) {
    auto L = square();
    // sk((5,2),(-2,-1)) = (ac + bd)/29 = (-10 - 2)/29 = -12/29
    EXPECT_EQ(skewness_rat(L, PrimitiveVector(5, 2), Completion{-2, -1}), Rat(-12, 29));
    // cross-check with complex arithmetic: sk = Re(v'/v), v = cz+d, v' = az+b
    std::complex<double> z(0.0, 1.0);
    auto re_ratio = [&](std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
        std::complex<double> vp = double(a) * z + double(b);
        std::complex<double> v = double(c) * z + double(d);
        return (vp / v).real();
    };
    EXPECT_NEAR(skewness(L, PrimitiveVector(5, 2), Completion{-2, -1}), re_ratio(-2, -1, 5, 2),
                1e-12);
    EXPECT_NEAR(skewness(L, PrimitiveVector(2, 1), Completion{1, 0}), re_ratio(1, 0, 2, 1),
                1e-12);
}

TEST(Skewness, RealPartFormulaEqualsPlanarInnerProductExactly) {
    // Two exact routes: ac r + (ad+bc) x + bd, and the literal planar inner
    // product (ax+b)(cx+d) + ac y^2 with y^2 = r - x^2.
    for (const LatticeShape& L : {square(), half_plus_i(), hexagonal()}) {
        std::mt19937 rng(99);
        std::uniform_int_distribution<std::int64_t> dist(-40, 40);
        int checked = 0;
        while (checked < 200) {
            std::int64_t c = dist(rng), d = dist(rng);
            if ((c == 0 && d == 0) || std::gcd(c < 0 ? -c : c, d < 0 ? -d : d) != 1) continue;
            ++checked;
            PrimitiveVector v(c, d);
            Completion w = minimal_completion(L, v);
            Rat route1 = skewness_rat(L, v, w);
            Rat x = L.xr, y_sq = L.rr - L.xr * L.xr;
            Rat a(w.a), b(w.b), cc(v.c), dd(v.d);
            Rat inner = (a * x + b) * (cc * x + dd) + a * cc * y_sq;
            Rat nsq = (cc * x + dd) * (cc * x + dd) + cc * cc * y_sq;
            EXPECT_EQ(route1, inner / nsq);
        }
    }
}

TEST(SignedRatio, KnownValues) {
    auto L = square();
    OrbitSample s1 = signed_ratio(L, PrimitiveVector(0, 1));
    EXPECT_EQ(s1.rho, 1.0);
    EXPECT_EQ(s1.sk, 0.0);

    OrbitSample s2 = signed_ratio(L, PrimitiveVector(2, 1));
    EXPECT_NEAR(s2.rho, 1.0 / std::sqrt(5.0), 1e-15);
    EXPECT_GT(s2.rho, 0.0);

    OrbitSample s3 = signed_ratio(L, PrimitiveVector(5, 2));
    EXPECT_NEAR(s3.rho, -std::sqrt(5.0 / 29.0), 1e-15);
    EXPECT_EQ(s3.a, -2);
    EXPECT_EQ(s3.b, -1);
}

TEST(SignedRatio, MagnitudeMatchesCompletionNorm) {
    // |rho| = |v'|/|v| two ways: sqrt(sk^2 + im^2) vs sqrt(|v'|^2/|v|^2).
    for (const LatticeShape& L : {square(), half_plus_i()}) {
        std::mt19937 rng(3);
        std::uniform_int_distribution<std::int64_t> dist(-60, 60);
        int checked = 0;
        while (checked < 200) {
            std::int64_t c = dist(rng), d = dist(rng);
            if ((c == 0 && d == 0) || std::gcd(c < 0 ? -c : c, d < 0 ? -d : d) != 1) continue;
            ++checked;
            OrbitSample s = signed_ratio(L, PrimitiveVector(c, d));
            double direct = std::sqrt(norm_sq_value(L, s.a, s.b) / s.norm_sq);
            EXPECT_NEAR(std::abs(s.rho), direct, 1e-12);
            EXPECT_EQ(s.rho >= 0.0, s.sk >= 0.0);
            EXPECT_NEAR(s.im * s.norm_sq, L.area, 1e-12 * std::max(1.0, L.area));
        }
    }
}

TEST(SignedRatio, InvariantUnderClassNegation) {
    auto L = half_plus_i();
    OrbitSample a = signed_ratio(L, PrimitiveVector(5, -3));
    OrbitSample b = signed_ratio(L, PrimitiveVector(-5, 3));
    EXPECT_EQ(a.c, b.c);
    EXPECT_EQ(a.d, b.d);
    EXPECT_EQ(a.sk, b.sk);
    EXPECT_EQ(a.rho, b.rho);
    EXPECT_EQ(a.im, b.im);
}

TEST(MinimalVectorLength, KnownLattices) {
    EXPECT_DOUBLE_EQ(square().mu, 1.0);
    EXPECT_DOUBLE_EQ(LatticeShape::from_exact(Rat(0), Rat(4)).mu, 1.0); // z = 2i
    EXPECT_DOUBLE_EQ(hexagonal().mu, 1.0);
    EXPECT_EQ(hexagonal().mu_sq, Rat(1));
}

TEST(MinimalVectorLength, ExhaustiveOracle) {
    for (double x : {0.0, 0.3, -0.45, 0.5}) {
        for (double y : {0.35, 0.8, 1.0, 2.5}) {
            auto L = LatticeShape::from_xy(x, y);
            double best = 1e300;
            for (int c = -8; c <= 8; ++c)
                for (int d = -8; d <= 8; ++d) {
                    if (c == 0 && d == 0) continue;
                    best = std::min(best, detail::norm_sq_f(L, c, d));
                }
            EXPECT_NEAR(L.mu, std::sqrt(best), 1e-12) << "x=" << x << " y=" << y;
            EXPECT_LE(L.mu, std::min(1.0, std::hypot(x, y)) + 1e-12);
        }
    }
}

TEST(CheckGeometry, BoundaryCases) {
    auto L = square();
    // (1,1): |v'|^2 = 1 equals |v|^2/4 + (area/|v|)^2 = 1/2 + 1/2 exactly
    OrbitSample tie = signed_ratio(L, PrimitiveVector(1, 1));
    GeometryReport rep = check_geometry(tie, L);
    EXPECT_TRUE(rep.all_ok());
    EXPECT_NEAR(rep.completion_bound.lhs, rep.completion_bound.rhs, 1e-15);

    // (0,1): sin(alpha) = 1 equals the bound area/(mu |v|) = 1
    OrbitSample ortho = signed_ratio(L, PrimitiveVector(0, 1));
    rep = check_geometry(ortho, L);
    EXPECT_TRUE(rep.all_ok());
    EXPECT_DOUBLE_EQ(rep.angle_bound.lhs, 1.0);
    EXPECT_DOUBLE_EQ(rep.angle_bound.rhs, 1.0);

    EXPECT_TRUE(check_geometry(signed_ratio(L, PrimitiveVector(2, 1)), L).all_ok());
}

TEST(CheckGeometry, ViolationThrowsWithContext) {
    auto L = square();
    OrbitSample s = signed_ratio(L, PrimitiveVector(2, 1));
    s.b += 1; // break the determinant
    EXPECT_THROW(require_geometry(s, L), GeometryViolation);
}

TEST(LatticeShapeType, Validation) {
    EXPECT_THROW(LatticeShape::from_xy(0.0, 0.0), Error);
    EXPECT_THROW(LatticeShape::from_xy(0.0, -1.0), Error);
    EXPECT_THROW(LatticeShape::from_exact(Rat(2), Rat(4)), Error); // y^2 = 0
    auto L = LatticeShape::from_xy(0.25, 1.5);
    EXPECT_FALSE(L.exact);
    EXPECT_DOUBLE_EQ(L.area, L.y);
    EXPECT_TRUE(square().exact);
}

TEST(RationalArithmetic, BasicsAndOverflow) {
    EXPECT_EQ(Rat(2, 4), Rat(1, 2));
    EXPECT_EQ(Rat(1, -2), Rat(-1, 2));
    EXPECT_EQ(Rat(1, 2) + Rat(1, 3), Rat(5, 6));
    EXPECT_EQ((Rat(1, 2) - Rat(2, 3)).sign(), -1);
    EXPECT_EQ(Rat(-7, 2).floor(), -4);
    EXPECT_EQ(Rat(7, 2).floor(), 3);
    EXPECT_EQ((Rat(1, 2) * Rat(2, 3)), Rat(1, 3));
    EXPECT_LT(Rat(1, 3), Rat(1, 2));
    EXPECT_DOUBLE_EQ(Rat(3, 4).to_double(), 0.75);
    std::int64_t big = std::int64_t{1} << 62;
    EXPECT_THROW(Rat(big, 3) * Rat(big, 5), OverflowGuard);
}
