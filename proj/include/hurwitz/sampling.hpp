#pragma once

#include "hurwitz/numeric.hpp"

#include <cstdint>
#include <random>

namespace hurwitz {

/// Seeded source of random moduli; identical seeds give identical streams.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    cplx in_box(double re_lo, double re_hi, double im_lo, double im_hi) {
        const double re = uniform(re_lo, re_hi);
        const double im = uniform(im_lo, im_hi);
        return {re, im};
    }

    cplx disk(double r) {
        const double rho = r * std::sqrt(uniform(0.0, 1.0));
        const double a = uniform(0.0, 2.0 * pi);
        return std::polar(rho, a);
    }

    cplx annulus(double r_lo, double r_hi) {
        const double rho = uniform(r_lo, r_hi);
        const double a = uniform(0.0, 2.0 * pi);
        return std::polar(rho, a);
    }

    cplx tau(double im_lo = 0.5, double im_hi = 3.0) { return in_box(-1.0, 1.0, im_lo, im_hi); }

    std::uint64_t next_seed() { return rng_(); }

private:
    std::mt19937_64 rng_;
};

} // namespace hurwitz
