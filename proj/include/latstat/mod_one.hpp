#pragma once

// Distribution-mod-one diagnostics over the fundamental window (-1/2, 1/2]:
// window reduction, star discrepancy, Weyl sums and histograms. The window
// matches the natural range of the least skewness; the star discrepancy
// shifts values by +1/2 onto [0,1) internally (with +1/2 wrapping to 0).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "latstat/errors.hpp"

namespace latstat {

struct ModOneSample {
    std::vector<double> values; // each in (-1/2, 1/2]
};

// Compensated accumulation (Neumaier): keeps |S_m| claims honest at n ~ 1e7.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

// Nearest-integer reduction into (-1/2, 1/2]; the half-integer tie rounds so
// that +1/2 is retained (-1/2 and +1/2 map to +1/2).
inline double reduce_mod_one_value(double v) {
    if (!std::isfinite(v)) throw NonFinite("reduce_mod_one: non-finite input");
    double w = v - std::ceil(v - 0.5);
    if (w <= -0.5) w += 1.0;
    if (w > 0.5) w -= 1.0;
    return w;
}

inline ModOneSample reduce_mod_one(std::span<const double> raw) {
    ModOneSample s;
    s.values.reserve(raw.size());
    for (double v : raw) s.values.push_back(reduce_mod_one_value(v));
    return s;
}

// D*_n of the sample shifted to [0,1): max_i max(i/n - x_(i), x_(i) - (i-1)/n).
inline double star_discrepancy(const ModOneSample& s) {
    if (s.values.empty()) throw EmptySample();
    std::vector<double> xs;
    xs.reserve(s.values.size());
    for (double w : s.values) {
        double u = w + 0.5;
        if (u >= 1.0) u -= 1.0; // w = +1/2 wraps to 0
        xs.push_back(u);
    }
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double dstar = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        double up = static_cast<double>(i + 1) / n - xs[i];
        double dn = xs[i] - static_cast<double>(i) / n;
        dstar = std::max(dstar, std::max(up, dn));
    }
    return dstar;
}

struct WeylReport {
    std::vector<long long> ms;                 // requested nonzero frequencies
    std::vector<std::complex<double>> sums;    // S_m = sum_j e(m x_j)
    std::vector<double> normalized;            // |S_m| / n
    std::int64_t n = 0;
};

inline WeylReport weyl_sums(const ModOneSample& s, std::span<const long long> ms) {
    if (s.values.empty()) throw EmptySample();
    for (long long m : ms)
        if (m == 0) throw ZeroFrequency();
    WeylReport rep;
    rep.n = static_cast<std::int64_t>(s.values.size());
    rep.ms.assign(ms.begin(), ms.end());
    rep.sums.reserve(ms.size());
    rep.normalized.reserve(ms.size());
    const double two_pi = 2.0 * std::numbers::pi;
    for (long long m : ms) {
        CompensatedSum re, im;
        for (double x : s.values) {
            double arg = two_pi * static_cast<double>(m) * x;
            re.add(std::cos(arg));
            im.add(std::sin(arg));
        }
        std::complex<double> S(re.value(), im.value());
        rep.sums.push_back(S);
        rep.normalized.push_back(std::abs(S) / static_cast<double>(rep.n));
    }
    return rep;
}

struct HistogramReport {
    int bins = 0;
    std::vector<std::int64_t> counts; // bin k covers (-1/2 + k/bins, -1/2 + (k+1)/bins]
    double chi_square = 0.0;          // raw statistic vs the uniform expectation
};

inline HistogramReport histogram(const ModOneSample& s, int bins) {
    if (bins < 2) throw std::invalid_argument("histogram requires bins >= 2");
    if (s.values.empty()) throw EmptySample();
    HistogramReport rep;
    rep.bins = bins;
    rep.counts.assign(static_cast<size_t>(bins), 0);
    for (double w : s.values) {
        // left-open right-closed bins matching the window; values within a
        // few ulps of a bin edge count as the edge itself, so decimal grid
        // points land where the exact arithmetic would put them
        double t = (w + 0.5) * static_cast<double>(bins);
        double tn = std::nearbyint(t);
        if (std::abs(t - tn) <= 1e-9 * std::max(1.0, std::abs(t))) t = tn;
        auto k = static_cast<std::int64_t>(std::ceil(t)) - 1;
        k = std::clamp<std::int64_t>(k, 0, bins - 1);
        ++rep.counts[static_cast<size_t>(k)];
    }
    const double expected = static_cast<double>(s.values.size()) / bins;
    double chi = 0.0;
    for (auto c : rep.counts) {
        double dev = static_cast<double>(c) - expected;
        chi += dev * dev / expected;
    }
    rep.chi_square = chi;
    return rep;
}

} // namespace latstat
