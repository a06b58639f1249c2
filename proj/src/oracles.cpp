#include "netdesign/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "netdesign/errors.hpp"

namespace netdesign::oracle {

namespace {

// Composite Simpson weights over an inclusive grid with an even interval
// count.
double simpson(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    double sum = f[0] + f[n - 1];
    for (std::size_t i = 1; i + 1 < n; ++i) sum += f[i] * ((i % 2) ? 4.0 : 2.0);
    return sum * h / 3.0;
}

}  // namespace

double gamma_poisson_grid_l1(const GammaPosterior& prior,
                             const std::vector<long long>& observations, int grid_points) {
    const GammaPosterior post = fit_gamma_poisson(prior, observations);
    const double mean = post.mean();
    const double sd = std::sqrt(post.shape) / post.rate;
    const double lo = std::max(1e-12, mean - 13.0 * sd);
    const double hi = mean + 14.0 * sd;
    if (grid_points % 2) ++grid_points;
    const double h = (hi - lo) / grid_points;

    std::vector<double> lp(grid_points + 1);
    std::vector<double> closed(grid_points + 1);
    const double log_norm = post.shape * std::log(post.rate) - std::lgamma(post.shape);
    double lp_max = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid_points; ++i) {
        const double lam = lo + i * h;
        // prior x likelihood, evaluated term by term
        double v = (prior.shape - 1.0) * std::log(lam) - prior.rate * lam;
        for (long long x : observations)
            v += static_cast<double>(x) * std::log(lam) - lam - std::lgamma(x + 1.0);
        lp[i] = v;
        lp_max = std::max(lp_max, v);
        closed[i] = std::exp((post.shape - 1.0) * std::log(lam) - post.rate * lam + log_norm);
    }
    std::vector<double> num(grid_points + 1);
    for (int i = 0; i <= grid_points; ++i) num[i] = std::exp(lp[i] - lp_max);
    const double z = simpson(num, h);
    std::vector<double> diff(grid_points + 1);
    for (int i = 0; i <= grid_points; ++i) diff[i] = std::fabs(num[i] / z - closed[i]);
    return simpson(diff, h) / simpson(closed, h);
}

double beta_binomial_grid_l1(const BetaPosterior& prior,
                             const std::vector<std::pair<long long, long long>>& obs,
                             int grid_points) {
    BetaPosterior post = prior;
    for (const auto& [s, n] : obs) {
        post.alpha += static_cast<double>(s);
        post.beta += static_cast<double>(n - s);
    }
    const double mean = post.mean();
    const double sd =
        std::sqrt(mean * (1.0 - mean) / (post.alpha + post.beta + 1.0));
    const double lo = std::max(1e-12, mean - 14.0 * sd);
    const double hi = std::min(1.0 - 1e-12, mean + 14.0 * sd);
    if (grid_points % 2) ++grid_points;
    const double h = (hi - lo) / grid_points;

    const double log_norm = std::lgamma(post.alpha + post.beta) - std::lgamma(post.alpha) -
                            std::lgamma(post.beta);
    std::vector<double> lp(grid_points + 1), closed(grid_points + 1);
    double lp_max = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid_points; ++i) {
        const double p = lo + i * h;
        double v = (prior.alpha - 1.0) * std::log(p) + (prior.beta - 1.0) * std::log1p(-p);
        for (const auto& [s, n] : obs)
            v += static_cast<double>(s) * std::log(p) +
                 static_cast<double>(n - s) * std::log1p(-p);
        lp[i] = v;
        lp_max = std::max(lp_max, v);
        closed[i] = std::exp((post.alpha - 1.0) * std::log(p) +
                             (post.beta - 1.0) * std::log1p(-p) + log_norm);
    }
    std::vector<double> num(grid_points + 1);
    for (int i = 0; i <= grid_points; ++i) num[i] = std::exp(lp[i] - lp_max);
    const double z = simpson(num, h);
    std::vector<double> diff(grid_points + 1);
    for (int i = 0; i <= grid_points; ++i) diff[i] = std::fabs(num[i] / z - closed[i]);
    return simpson(diff, h) / simpson(closed, h);
}

double nig_lognormal_grid_l1(const NIGPosterior& prior, const std::vector<double>& observations,
                             int mu_points, int sigma_points) {
    const NIGPosterior post = fit_lognormal(observations, prior);
    std::vector<double> logs(observations.size());
    for (std::size_t k = 0; k < observations.size(); ++k) logs[k] = std::log(observations[k]);

    // Standardized coordinates: z = (mu - mu_n)/sqrt(sigma^2/kappa_n),
    // s = log sigma^2. Conditionals over z are Gaussian for both densities,
    // so a uniform tensor grid resolves everything.
    if (mu_points % 2) ++mu_points;
    if (sigma_points % 2) ++sigma_points;
    const double z_lo = -14.0, z_hi = 14.0;
    const double s_star = std::log(post.beta / post.alpha);
    const double s_lo = s_star - (10.0 / std::sqrt(post.alpha) + 6.0);
    const double s_hi = s_star + (10.0 / std::sqrt(post.alpha) + 42.0 / post.alpha + 6.0);
    const double hz = (z_hi - z_lo) / mu_points;
    const double hs = (s_hi - s_lo) / sigma_points;

    const double log_norm = 0.5 * std::log(post.kappa) - 0.5 * std::log(2.0 * M_PI) +
                            post.alpha * std::log(post.beta) - std::lgamma(post.alpha);

    // Row integrals over z (Simpson), then Simpson over s.
    std::vector<double> lp((mu_points + 1) * (sigma_points + 1));
    std::vector<double> closed((mu_points + 1) * (sigma_points + 1));
    double lp_max = -std::numeric_limits<double>::infinity();
    for (int j = 0; j <= sigma_points; ++j) {
        const double s = s_lo + j * hs;
        const double sigma2 = std::exp(s);
        const double cond_sd = std::sqrt(sigma2 / post.kappa);
        const double log_jac = std::log(cond_sd) + s;  // dmu/dz * dsigma2/ds
        for (int i = 0; i <= mu_points; ++i) {
            const double mu = post.location + (z_lo + i * hz) * cond_sd;
            // prior x likelihood (additive constants dropped)
            double v = -0.5 * s - prior.kappa * (mu - prior.location) * (mu - prior.location) /
                                      (2.0 * sigma2) -
                       (prior.alpha + 1.0) * s - prior.beta / sigma2;
            for (double y : logs) v += -0.5 * s - (y - mu) * (y - mu) / (2.0 * sigma2);
            // closed-form NIG density, full constants
            double c = log_norm - 0.5 * s -
                       post.kappa * (mu - post.location) * (mu - post.location) / (2.0 * sigma2) -
                       (post.alpha + 1.0) * s - post.beta / sigma2;
            const std::size_t idx = static_cast<std::size_t>(j) * (mu_points + 1) + i;
            lp[idx] = v + log_jac;
            closed[idx] = std::exp(c + log_jac);
            lp_max = std::max(lp_max, lp[idx]);
        }
    }

    auto integrate2d = [&](const std::vector<double>& f) {
        std::vector<double> rows(sigma_points + 1);
        std::vector<double> row(mu_points + 1);
        for (int j = 0; j <= sigma_points; ++j) {
            for (int i = 0; i <= mu_points; ++i)
                row[i] = f[static_cast<std::size_t>(j) * (mu_points + 1) + i];
            rows[j] = simpson(row, hz);
        }
        return simpson(rows, hs);
    };

    std::vector<double> num(lp.size());
    for (std::size_t k = 0; k < lp.size(); ++k) num[k] = std::exp(lp[k] - lp_max);
    const double z = integrate2d(num);
    const double closed_mass = integrate2d(closed);
    std::vector<double> diff(lp.size());
    for (std::size_t k = 0; k < lp.size(); ++k)
        diff[k] = std::fabs(num[k] / z - closed[k] / closed_mass);
    return integrate2d(diff);
}

double cvar_bruteforce(const std::vector<double>& samples, double alpha) {
    if (samples.empty()) throw ValidationError("CVaR of an empty sample set");
    std::vector<double> grid(samples);
    std::sort(grid.begin(), grid.end());
    const std::size_t n = grid.size();
    std::vector<double> zetas;
    zetas.reserve(2 * n + 2);
    zetas.push_back(grid.front() - 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        zetas.push_back(grid[i]);
        if (i + 1 < n) zetas.push_back(0.5 * (grid[i] + grid[i + 1]));
    }
    zetas.push_back(grid.back() + 1.0);

    const double scale = 1.0 / ((1.0 - alpha) * static_cast<double>(n));
    double best = std::numeric_limits<double>::infinity();
    for (double zeta : zetas) {
        double excess = 0.0;
        for (double y : samples) excess += std::max(y - zeta, 0.0);
        best = std::min(best, zeta + scale * excess);
    }
    return best;
}

std::vector<std::size_t> pareto_bruteforce(const std::vector<std::pair<double, double>>& points) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
            if (j == i) continue;
            const bool le = points[j].first <= points[i].first &&
                            points[j].second <= points[i].second;
            const bool lt = points[j].first < points[i].first ||
                            points[j].second < points[i].second;
            if (le && lt) dominated = true;
        }
        if (!dominated) keep.push_back(i);
    }
    return keep;
}

}  // namespace netdesign::oracle
