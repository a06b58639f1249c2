#pragma once

#include <cstdint>

namespace netdesign {

// Counter-based random substream. A stream is identified by a master seed
// plus up to three stream-id words (scenario index, variable tag, cell
// index, ...). Draws advance a private counter through a SplitMix64 walk,
// so any (seed, id) tuple yields the same sequence no matter which thread
// asks for it or in what order streams are instantiated.
//
// All distribution samplers are implemented here rather than taken from
// <random> because libstdc++/libc++ distributions are not bit-stable
// across standard library versions, and reproducibility of every CSV is a
// hard requirement.
class Substream {
public:
    // Variable tags used to key substreams throughout the project.
    enum Var : std::uint64_t {
        kDemand = 1,
        kTravelTime = 2,
        kReliability = 3,
        kCost = 4,
        kDisruption = 5,
        kGeometry = 6,
        kRegime = 7,
        kGeneric = 8,
    };

    Substream(std::uint64_t seed, std::uint64_t id0, std::uint64_t id1 = 0,
              std::uint64_t id2 = 0);

    std::uint64_t next_u64();

    // Uniform on [0,1) with 53 random bits.
    double uniform();
    // Uniform on (0,1); safe as a log() argument.
    double uniform_open();

    // Standard normal via Box-Muller (cosine branch only; two uniforms per
    // draw, no cached state).
    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }

    double lognormal(double mu, double sigma) ;

    // Gamma(shape, rate 1) by Marsaglia-Tsang; shape < 1 boosted through
    // the shape+1 draw.
    double gamma(double shape);
    double gamma(double shape, double rate) { return gamma(shape) / rate; }

    double beta(double a, double b);

    // Poisson; Knuth product method below lambda = 30, Hormann's PTRS
    // transformed rejection above.
    long long poisson(double lambda);

    // Draw from the scaled inverse-gamma InvGamma(shape, scale).
    double inverse_gamma(double shape, double scale) { return scale / gamma(shape); }

private:
    std::uint64_t state_;
};

// SplitMix64 finalizer; also used as a general 64-bit mixer for key
// derivation and content hashing.
std::uint64_t mix64(std::uint64_t x);

// Derive a child seed from a master seed and a tag (used e.g. to give the
// stress phase a stream independent of training scenario sampling).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace netdesign
