#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

#include "netdesign/rng.hpp"

namespace netdesign::testing {

// Synthetic 25-node benchmark in the CAB25 text layout: a node-count
// header token, 625 flow values (row-major, zero diagonal), then 625
// symmetric distances. Stands in for the real benchmark file, which is
// not redistributed with this repository.
inline std::string synthetic_benchmark_text(std::uint64_t seed = 777) {
    const int n = 25;
    Substream pos(seed, Substream::kGeometry, 100);
    double x[n], y[n], mass[n];
    for (int i = 0; i < n; ++i) {
        x[i] = pos.uniform() * 2000.0;
        y[i] = pos.uniform() * 1400.0;
        mass[i] = std::exp(pos.normal(0.0, 0.8));
    }
    std::string out = "25\n";
    char buf[64];
    Substream noise(seed, Substream::kGeometry, 101);
    double dist[n][n];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double dx = x[i] - x[j], dy = y[i] - y[j];
            dist[i][j] = std::sqrt(dx * dx + dy * dy);
        }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double flow = 0.0;
            if (i != j)
                flow = 1000.0 * mass[i] * mass[j] / (1.0 + dist[i][j] / 400.0) *
                       std::exp(noise.normal(0.0, 0.4));
            std::snprintf(buf, sizeof(buf), "%.2f", flow);
            out += buf;
            out += (j + 1 == n) ? '\n' : ' ';
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            std::snprintf(buf, sizeof(buf), "%.3f", dist[i][j]);
            out += buf;
            out += (j + 1 == n) ? '\n' : ' ';
        }
    }
    return out;
}

}  // namespace netdesign::testing
