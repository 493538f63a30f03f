#pragma once

// Enumeration of canonical primitive vectors of <1,z> with |v| <= T, or
// equivalently of the cosets Gamma_inf \ Gamma with Im(gamma z) >= eps
// (eps = area/T^2; both boundaries inclusive, so the two modes are exactly
// dual). One sample is emitted per +-class of coprime (c,d).
//
// The materialized path is data-parallel over fixed-width c-chunks whose
// boundaries depend only on the spec, never on the worker count; buffers are
// concatenated in chunk order and sorted by (norm_sq, c, d), so the output is
// bitwise independent of chunking and of the number of workers. The streaming
// path produces the same order with O(c_max) memory via a heap merge.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <numbers>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <thread>
#include <vector>

#include "latstat/lattice.hpp"

namespace latstat {

struct EnumSpec {
    enum class Mode { ByNorm, ByEpsilon };

    LatticeShape lattice;
    Mode mode = Mode::ByNorm;
    double bound = 1.0;     // T in ByNorm mode, eps in ByEpsilon mode
    std::int64_t chunk = 1024; // c-range width of one parallel work unit
    int workers = 1;           // execution hint; never affects the output

    static EnumSpec by_norm(const LatticeShape& L, double T, std::int64_t chunk = 1024,
                            int workers = 1) {
        if (!(T > 0.0) || !std::isfinite(T))
            throw std::invalid_argument("by_norm requires T > 0");
        return make(L, Mode::ByNorm, T, chunk, workers);
    }
    static EnumSpec by_epsilon(const LatticeShape& L, double eps, std::int64_t chunk = 1024,
                               int workers = 1) {
        if (!(eps > 0.0) || !std::isfinite(eps))
            throw std::invalid_argument("by_epsilon requires eps > 0");
        return make(L, Mode::ByEpsilon, eps, chunk, workers);
    }

    // Inclusion threshold on |v|^2: T^2, or area/eps (Im >= eps <=> |v|^2 <= area/eps).
    double norm_sq_threshold() const {
        return mode == Mode::ByNorm ? bound * bound : lattice.area / bound;
    }
    double equivalent_T() const {
        return mode == Mode::ByNorm ? bound : std::sqrt(lattice.area / bound);
    }

private:
    static EnumSpec make(const LatticeShape& L, Mode m, double b, std::int64_t chunk,
                         int workers) {
        if (chunk < 1) throw std::invalid_argument("chunk must be >= 1");
        if (workers < 1) throw std::invalid_argument("workers must be >= 1");
        EnumSpec s;
        s.lattice = L;
        s.mode = m;
        s.bound = b;
        s.chunk = chunk;
        s.workers = workers;
        return s;
    }
};

struct EnumResult {
    std::vector<OrbitSample> samples; // sorted by (norm_sq, c, d), no duplicates
    std::int64_t count = 0;           // = samples.size(), number of +-classes
    double predicted = 0.0;           // asymptotic #L_prim(T) = (1/zeta(2)) (pi/area) T^2
};

namespace detail {

inline bool norm_within(const LatticeShape& L, int64_t c, int64_t d, double nsq_threshold) {
    return norm_sq_value(L, c, d) <= nsq_threshold;
}

// Integer d-interval with |cz+d|^2 <= threshold for fixed c >= 1. Float
// bracketing plus a predicate-driven correction at both ends, so boundary
// membership is decided by norm_within alone (exact-mode shapes decide it
// from the rational norm).
inline bool d_range(const LatticeShape& L, int64_t c, double nsq_threshold, int64_t& lo,
                    int64_t& hi) {
    double cy = static_cast<double>(c) * L.y;
    double rad_sq = nsq_threshold - cy * cy;
    if (rad_sq < 0) {
        // Allow the correction loops to recover boundary cases lost to rounding.
        rad_sq = 0;
    }
    double mid = -static_cast<double>(c) * L.x;
    double s = std::sqrt(rad_sq);
    lo = static_cast<int64_t>(std::ceil(mid - s));
    hi = static_cast<int64_t>(std::floor(mid + s));
    for (int it = 0; it < 64 && norm_within(L, c, lo - 1, nsq_threshold); ++it) --lo;
    while (lo <= hi && !norm_within(L, c, lo, nsq_threshold)) ++lo;
    for (int it = 0; it < 64 && norm_within(L, c, hi + 1, nsq_threshold); ++it) ++hi;
    while (hi >= lo && !norm_within(L, c, hi, nsq_threshold)) --hi;
    if (lo > hi) return false;
    check_coord(lo, "|d|");
    check_coord(hi, "|d|");
    return true;
}

// Largest c with a chance of containing a vector: (c y)^2 <= threshold.
inline int64_t c_limit(const LatticeShape& L, double nsq_threshold) {
    double cmax_f = std::sqrt(std::max(nsq_threshold, 0.0)) / L.y;
    if (!(cmax_f < static_cast<double>(kCoordLimit)))
        throw OverflowGuard("enumeration bound forces |c| beyond 2^30");
    int64_t cmax = static_cast<int64_t>(std::floor(cmax_f)) + 1;
    while (cmax > 0) {
        double cy = static_cast<double>(cmax) * L.y;
        if (cy * cy <= nsq_threshold) break;
        --cmax;
    }
    // d-extremes for the widest c are bounded by |c x| + T + 1.
    double dmax_f = std::abs(static_cast<double>(cmax) * L.x) + std::sqrt(nsq_threshold) + 2.0;
    if (!(dmax_f < static_cast<double>(kCoordLimit)))
        throw OverflowGuard("enumeration bound forces |d| beyond 2^30");
    return cmax;
}

template <typename Fn>
inline void walk_c(const LatticeShape& L, int64_t c, double nsq_threshold, Fn&& emit) {
    if (c == 0) {
        if (1.0 <= nsq_threshold) emit(int64_t{0}, int64_t{1});
        return;
    }
    int64_t lo, hi;
    if (!d_range(L, c, nsq_threshold, lo, hi)) return;
    for (int64_t d = lo; d <= hi; ++d) {
        if (std::gcd(c, d < 0 ? -d : d) == 1) emit(c, d);
    }
}

} // namespace detail

// Total order used for the merged output.
inline bool sample_order(const OrbitSample& a, const OrbitSample& b) {
    if (a.norm_sq != b.norm_sq) return a.norm_sq < b.norm_sq;
    if (a.c != b.c) return a.c < b.c;
    return a.d < b.d;
}

inline double predicted_primitive_count(const LatticeShape& L, double T) {
    // (1/zeta(2)) (pi/area) T^2 with zeta(2) = pi^2/6.
    return 6.0 * T * T / (std::numbers::pi * L.area);
}

inline EnumResult enumerate(const EnumSpec& spec) {
    const LatticeShape& L = spec.lattice;
    const double nsq = spec.norm_sq_threshold();
    const int64_t cmax = detail::c_limit(L, nsq);

    const int64_t n_chunks = (cmax + spec.chunk) / spec.chunk; // chunks of c in [0, cmax]
    std::vector<std::vector<OrbitSample>> bufs(static_cast<size_t>(n_chunks));

    auto build_chunk = [&](int64_t k) {
        std::vector<OrbitSample>& out = bufs[static_cast<size_t>(k)];
        int64_t c_begin = k * spec.chunk;
        int64_t c_end = std::min(cmax + 1, c_begin + spec.chunk);
        for (int64_t c = c_begin; c < c_end; ++c) {
            detail::walk_c(L, c, nsq, [&](int64_t cc, int64_t dd) {
                out.push_back(signed_ratio(L, PrimitiveVector(cc, dd)));
            });
        }
    };

    int workers = static_cast<int>(std::min<int64_t>(spec.workers, n_chunks));
    if (workers <= 1) {
        for (int64_t k = 0; k < n_chunks; ++k) build_chunk(k);
    } else {
        std::atomic<int64_t> next{0};
        std::vector<std::exception_ptr> errs(static_cast<size_t>(workers));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (int64_t k; (k = next.fetch_add(1)) < n_chunks;) build_chunk(k);
                } catch (...) {
                    errs[static_cast<size_t>(w)] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& e : errs)
            if (e) std::rethrow_exception(e);
    }

    EnumResult res;
    size_t total = 0;
    for (auto& b : bufs) total += b.size();
    res.samples.reserve(total);
    for (auto& b : bufs)
        res.samples.insert(res.samples.end(), b.begin(), b.end());
    std::sort(res.samples.begin(), res.samples.end(), sample_order);
    res.count = static_cast<std::int64_t>(res.samples.size());
    res.predicted = predicted_primitive_count(L, spec.equivalent_T());
    return res;
}

// Streaming enumeration: invokes callback(sample) in exactly the merged order
// of enumerate(), holding O(c_max) state instead of the full sample set.
// The callback must not block indefinitely.
inline void enumerate_stream(const EnumSpec& spec,
                             const std::function<void(const OrbitSample&)>& callback) {
    const LatticeShape& L = spec.lattice;
    const double nsq = spec.norm_sq_threshold();
    const int64_t cmax = detail::c_limit(L, nsq);

    // Per-c cursor walking d outward from the parabola vertex, emitting the
    // remaining coprime d of smallest (norm_sq, d) each time.
    struct Cursor {
        int64_t c, lo, hi, left, right;
        double norm_left, norm_right;
        bool has_left, has_right;
    };

    auto refresh_left = [&](Cursor& cur) {
        while (cur.left >= cur.lo && std::gcd(cur.c, cur.left < 0 ? -cur.left : cur.left) != 1)
            --cur.left;
        cur.has_left = cur.left >= cur.lo;
        if (cur.has_left) cur.norm_left = norm_sq_value(L, cur.c, cur.left);
    };
    auto refresh_right = [&](Cursor& cur) {
        while (cur.right <= cur.hi && std::gcd(cur.c, cur.right < 0 ? -cur.right : cur.right) != 1)
            ++cur.right;
        cur.has_right = cur.right <= cur.hi;
        if (cur.has_right) cur.norm_right = norm_sq_value(L, cur.c, cur.right);
    };
    // Next candidate of a cursor as (norm, d); ties prefer the left walk,
    // which always holds the smaller d.
    auto peek = [&](const Cursor& cur, double& n_out, int64_t& d_out) -> bool {
        if (!cur.has_left && !cur.has_right) return false;
        if (!cur.has_right || (cur.has_left && cur.norm_left <= cur.norm_right)) {
            n_out = cur.norm_left;
            d_out = cur.left;
        } else {
            n_out = cur.norm_right;
            d_out = cur.right;
        }
        return true;
    };

    std::vector<Cursor> cursors;
    cursors.reserve(static_cast<size_t>(cmax) + 1);
    for (int64_t c = 0; c <= cmax; ++c) {
        Cursor cur{};
        cur.c = c;
        if (c == 0) {
            if (!(1.0 <= nsq)) continue;
            cur.lo = cur.hi = 1;
            cur.left = 1;
            cur.right = 2;
        } else {
            if (!detail::d_range(L, c, nsq, cur.lo, cur.hi)) continue;
            double mid = -static_cast<double>(c) * L.x;
            int64_t vertex = std::llround(mid);
            vertex = std::clamp(vertex, cur.lo, cur.hi);
            cur.left = vertex;
            cur.right = vertex + 1;
        }
        refresh_left(cur);
        refresh_right(cur);
        if (cur.has_left || cur.has_right) cursors.push_back(cur);
    }

    struct HeapEntry {
        double norm;
        int64_t c, d;
        size_t idx;
    };
    auto heap_after = [](const HeapEntry& a, const HeapEntry& b) {
        if (a.norm != b.norm) return a.norm > b.norm;
        if (a.c != b.c) return a.c > b.c;
        return a.d > b.d;
    };
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, decltype(heap_after)> heap(heap_after);
    for (size_t i = 0; i < cursors.size(); ++i) {
        double n;
        int64_t d;
        if (peek(cursors[i], n, d)) heap.push({n, cursors[i].c, d, i});
    }
    while (!heap.empty()) {
        HeapEntry top = heap.top();
        heap.pop();
        Cursor& cur = cursors[top.idx];
        callback(signed_ratio(L, PrimitiveVector(top.c, top.d)));
        if (cur.has_left && top.d == cur.left) {
            --cur.left;
            refresh_left(cur);
        } else {
            ++cur.right;
            refresh_right(cur);
        }
        double n;
        int64_t d;
        if (peek(cur, n, d)) heap.push({n, cur.c, d, top.idx});
    }
}

// Number of +-classes with |v| <= T (single-threaded count, no samples built).
inline std::int64_t enumerate_count(const EnumSpec& spec) {
    const LatticeShape& L = spec.lattice;
    const double nsq = spec.norm_sq_threshold();
    const int64_t cmax = detail::c_limit(L, nsq);
    std::int64_t count = 0;
    for (int64_t c = 0; c <= cmax; ++c)
        detail::walk_c(L, c, nsq, [&](int64_t, int64_t) { ++count; });
    return count;
}

struct CountReport {
    std::int64_t count = 0;   // primitive vectors with |v| <= T; v and -v both counted
    double predicted = 0.0;   // (1/zeta(2)) (pi/area) T^2
    double relative_error = 0.0;
};

// #L_prim(T) against its asymptotic. The enumerator emits one representative
// per +-class; the primitive-vector count doubles it.
inline CountReport count_vs_asymptotic(const EnumSpec& spec) {
    if (spec.mode != EnumSpec::Mode::ByNorm)
        throw std::invalid_argument("count_vs_asymptotic requires by-norm mode");
    CountReport rep;
    rep.count = 2 * enumerate_count(spec);
    rep.predicted = predicted_primitive_count(spec.lattice, spec.bound);
    rep.relative_error = std::abs(static_cast<double>(rep.count) - rep.predicted) / rep.predicted;
    return rep;
}

struct OrbitCountRow {
    double eps = 0.0;
    std::int64_t count = 0; // N(eps) = #{+-classes : Im(gamma z) >= eps}
    double eps_times_count = 0.0;
};

// eps * N(eps) along a decreasing grid; the product approaches a constant
// (3/pi for z = i under the +-class convention).
inline std::vector<OrbitCountRow> orbit_count_scaling(const LatticeShape& L,
                                                      const std::vector<double>& eps_grid) {
    if (eps_grid.empty()) throw std::invalid_argument("empty epsilon grid");
    for (size_t i = 0; i < eps_grid.size(); ++i) {
        if (!(eps_grid[i] > 0.0))
            throw std::invalid_argument("epsilon grid entries must be > 0");
        if (i > 0 && !(eps_grid[i] < eps_grid[i - 1]))
            throw std::invalid_argument("epsilon grid must be strictly decreasing");
    }
    std::vector<OrbitCountRow> rows;
    rows.reserve(eps_grid.size());
    for (double eps : eps_grid) {
        OrbitCountRow row;
        row.eps = eps;
        row.count = enumerate_count(EnumSpec::by_epsilon(L, eps));
        row.eps_times_count = eps * static_cast<double>(row.count);
        rows.push_back(row);
    }
    return rows;
}

} // namespace latstat
