#pragma once

#include <stdexcept>
#include <string>

namespace latstat {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// gcd(c,d) != 1 where a coprime pair was required. Carries the offending gcd.
struct NotCoprime : Error {
    long long gcd;
    NotCoprime(long long c, long long d, long long g)
        : Error("not coprime: gcd(" + std::to_string(c) + "," + std::to_string(d) +
                ") = " + std::to_string(g)),
          gcd(g) {}
};

// Integer or rational arithmetic would leave the guarded 64-bit range.
struct OverflowGuard : Error {
    using Error::Error;
};

// A geometric identity that must hold for every sample failed; this signals
// an implementation bug, not bad input.
struct GeometryViolation : Error {
    using Error::Error;
};

struct EmptySample : Error {
    EmptySample() : Error("empty sample") {}
    using Error::Error;
};

struct ZeroFrequency : Error {
    ZeroFrequency() : Error("frequency m = 0 is not a valid Weyl frequency") {}
};

struct NonFinite : Error {
    using Error::Error;
};

// Evaluation requested outside the absolute-convergence region Re(s) > 1.
struct ConvergenceDomain : Error {
    using Error::Error;
};

// Finite-difference step too coarse: the Richardson estimate of the stencil
// error dominates the quantity being checked.
struct StepTooLarge : Error {
    using Error::Error;
};

} // namespace latstat
