#include "netdesign/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace netdesign {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return mix64(seed ^ mix64(tag + kGolden));
}

Substream::Substream(std::uint64_t seed, std::uint64_t id0, std::uint64_t id1,
                     std::uint64_t id2) {
    std::uint64_t k = mix64(seed + kGolden);
    k = mix64(k ^ (id0 + kGolden));
    k = mix64(k ^ (id1 + 2 * kGolden));
    k = mix64(k ^ (id2 + 3 * kGolden));
    state_ = k;
}

std::uint64_t Substream::next_u64() {
    state_ += kGolden;
    return mix64(state_);
}

double Substream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Substream::uniform_open() {
    // (2k+1)/2^54 lies strictly inside (0,1).
    return (static_cast<double>(next_u64() >> 11) * 2.0 + 1.0) * 0x1.0p-54;
}

double Substream::normal() {
    double u1 = uniform_open();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

double Substream::lognormal(double mu, double sigma) {
    return std::exp(mu + sigma * normal());
}

double Substream::gamma(double shape) {
    if (shape <= 0.0) throw std::invalid_argument("gamma shape must be positive");
    if (shape < 1.0) {
        double u = uniform_open();
        return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform_open();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double Substream::beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
}

long long Substream::poisson(double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("poisson rate must be nonnegative");
    if (lambda == 0.0) return 0;
    if (lambda < 30.0) {
        // Knuth: multiply uniforms until the product drops below e^-lambda.
        const double limit = std::exp(-lambda);
        double prod = 1.0;
        long long k = -1;
        do {
            prod *= uniform_open();
            ++k;
        } while (prod > limit);
        return k;
    }
    // PTRS (Hormann 1993), exact transformed rejection for lambda >= 10.
    const double b = 0.931 + 2.53 * std::sqrt(lambda);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_lambda = std::log(lambda);
    for (;;) {
        double u = uniform() - 0.5;
        double v = uniform_open();
        double us = 0.5 - std::fabs(u);
        double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<long long>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            kf * log_lambda - lambda - std::lgamma(kf + 1.0)) {
            return static_cast<long long>(kf);
        }
    }
}

}  // namespace netdesign
