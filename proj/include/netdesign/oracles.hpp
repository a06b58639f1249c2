#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "netdesign/posterior.hpp"

namespace netdesign::oracle {

// Independent numerical checks of the closed-form machinery. Each oracle
// recomputes its target quantity from first principles (likelihood x prior
// on a quadrature grid, objective scans, pairwise dominance) without going
// through the implementation path it validates.

// Relative L1 distance between the normalized grid posterior of
// likelihood x prior and the closed-form conjugate posterior density.
double gamma_poisson_grid_l1(const GammaPosterior& prior,
                             const std::vector<long long>& observations,
                             int grid_points = 2048);

double beta_binomial_grid_l1(const BetaPosterior& prior,
                             const std::vector<std::pair<long long, long long>>& obs,
                             int grid_points = 2048);

// Joint (mu, sigma^2) comparison on a standardized tensor grid.
double nig_lognormal_grid_l1(const NIGPosterior& prior, const std::vector<double>& observations,
                             int mu_points = 512, int sigma_points = 2048);

// Rockafellar-Uryasev objective minimized over a dense zeta grid (sample
// knots, midpoints, and outside points).
double cvar_bruteforce(const std::vector<double>& samples, double alpha);

// O(n^2) pairwise dominance on (cost, risk) points, minimizing both.
std::vector<std::size_t> pareto_bruteforce(const std::vector<std::pair<double, double>>& points);

}  // namespace netdesign::oracle
