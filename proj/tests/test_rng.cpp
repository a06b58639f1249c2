#include <cmath>
#include <vector>

#include "doctest.h"
#include "netdesign/rng.hpp"

using namespace netdesign;

TEST_CASE("substreams are deterministic and key-sensitive") {
    Substream a(42, 1, 2, 3);
    Substream b(42, 1, 2, 3);
    Substream c(42, 1, 2, 4);
    bool identical = true, different = false;
    for (int i = 0; i < 64; ++i) {
        const auto x = a.next_u64();
        identical = identical && x == b.next_u64();
        different = different || x != c.next_u64();
    }
    CHECK(identical);
    CHECK(different);
}

TEST_CASE("uniform draws stay in range") {
    Substream s(7, 0);
    for (int i = 0; i < 10000; ++i) {
        const double u = s.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const double v = s.uniform_open();
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("gamma moments") {
    Substream s(11, 0);
    const double shape = 4.5, rate = 2.0;
    const int n = 200000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = s.gamma(shape, rate);
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    const double true_mean = shape / rate;
    const double true_var = shape / (rate * rate);
    CHECK(std::fabs(mean - true_mean) < 3.0 * std::sqrt(true_var / n));
    CHECK(std::fabs(var - true_var) < 0.05 * true_var);
}

TEST_CASE("poisson moments in both sampler regimes") {
    for (double lambda : {3.5, 80.0}) {
        Substream s(13, static_cast<std::uint64_t>(lambda));
        const int n = 200000;
        double sum = 0, sum2 = 0;
        for (int i = 0; i < n; ++i) {
            const auto x = static_cast<double>(s.poisson(lambda));
            sum += x;
            sum2 += x * x;
        }
        const double mean = sum / n;
        const double var = sum2 / n - mean * mean;
        CHECK(std::fabs(mean - lambda) < 3.0 * std::sqrt(lambda / n));
        CHECK(std::fabs(var - lambda) < 0.05 * lambda);
    }
}

TEST_CASE("beta mean and support") {
    Substream s(17, 0);
    const double a = 8, b = 2;
    const int n = 100000;
    double sum = 0;
    for (int i = 0; i < n; ++i) {
        const double x = s.beta(a, b);
        CHECK(x > 0.0);
        CHECK(x < 1.0);
        sum += x;
    }
    CHECK(std::fabs(sum / n - 0.8) < 0.002);
}

TEST_CASE("derive_seed separates tags") {
    CHECK(derive_seed(1, 2) != derive_seed(1, 3));
    CHECK(derive_seed(1, 2) == derive_seed(1, 2));
}
