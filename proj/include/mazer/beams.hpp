#ifndef MAZER_BEAMS_HPP
#define MAZER_BEAMS_HPP

#include <mazer/observables.hpp>
#include <mazer/peaks.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace mazer {

/// Weights sampled on a grid of k/kappa values.
struct VelocityDistribution
{
    std::vector<double> grid;
    std::vector<double> weights;
    bool normalized = false;
};

inline double trapezoid(std::span<const double> x, std::span<const double> y)
{
    double sum = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        sum += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    }
    return sum;
}

/// Unnormalized speed density k^2 exp(-k^2/k0^2); its maximum sits at k0.
inline double maxwell_boltzmann_density(double k0_over_kappa, double k_over_kappa)
{
    const double x = k_over_kappa / k0_over_kappa;
    return x * x * std::exp(-x * x);
}

inline VelocityDistribution maxwell_boltzmann(double k0_over_kappa,
                                              std::span<const double> grid)
{
    if (!(k0_over_kappa > 0.0) || !std::isfinite(k0_over_kappa)) {
        throw InvalidParameter("k0/kappa must be finite and > 0");
    }
    if (grid.empty()) {
        throw InvalidParameter("velocity grid is empty");
    }
    check_grid(grid);
    if (!(grid.front() > 0.0)) {
        throw InvalidParameter("velocity grid must be positive");
    }
    VelocityDistribution dist{{grid.begin(), grid.end()}, {}, false};
    dist.weights.reserve(grid.size());
    for (double k : grid) {
        dist.weights.push_back(maxwell_boltzmann_density(k0_over_kappa, k));
    }
    if (grid.size() >= 2) {
        const double norm = trapezoid(dist.grid, dist.weights);
        for (double& w : dist.weights) {
            w /= norm;
        }
        dist.normalized = true;
    }
    return dist;
}

/**
 * P_f(k) = P_i(k) T_total(k) on the same grid. The result keeps the absolute
 * throughput and is not renormalized. Solver failures propagate.
 */
inline VelocityDistribution filter_distribution(const VelocityDistribution& dist,
                                                const ModelParams& params,
                                                const SolverOptions& options = {})
{
    if (dist.grid.size() != dist.weights.size()) {
        throw InvalidParameter("distribution grid and weights differ in length");
    }
    VelocityDistribution out{dist.grid, {}, false};
    out.weights.reserve(dist.grid.size());
    for (std::size_t i = 0; i < dist.grid.size(); ++i) {
        const double w = dist.weights[i];
        if (!std::isfinite(w) || w < 0.0) {
            throw InvalidParameter("distribution weights must be finite and >= 0");
        }
        const auto p = outcome(params.with_k_over_kappa(dist.grid[i]), options);
        out.weights.push_back(w * p.T_total);
    }
    return out;
}

/**
 * Default beam grid: `count` uniform points on [k0/20, 4 k0], plus extra
 * points packed around each transmission resonance found on that grid.
 */
inline std::vector<double> beam_grid(double k0_over_kappa, const ModelParams& params,
                                     const SolverOptions& options = {},
                                     std::size_t count = 2000,
                                     std::size_t points_per_peak = 64)
{
    std::vector<double> grid =
        linspace(k0_over_kappa / 20.0, 4.0 * k0_over_kappa, count);
    auto transmission = [&](double k) {
        try {
            return outcome(params.with_k_over_kappa(k), options).T_total;
        } catch (const DegenerateInput&) {
            return 0.0;
        }
    };
    std::vector<double> y(grid.size());
    std::transform(grid.begin(), grid.end(), y.begin(), transmission);
    std::vector<double> extra;
    const double step = grid[1] - grid[0];
    for (const Peak& peak : find_peaks(grid, y, default_min_prominence)) {
        const double half = std::max(peak.fwhm, step);
        for (double x : linspace(peak.position - half, peak.position + half,
                                 points_per_peak)) {
            if (x > grid.front() && x < grid.back()) {
                extra.push_back(x);
            }
        }
    }
    grid.insert(grid.end(), extra.begin(), extra.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

namespace si {
inline constexpr double hbar = 1.054571817e-34;    // J s
inline constexpr double boltzmann = 1.380649e-23;  // J/K
inline constexpr double atomic_mass = 1.66053906660e-27; // kg
} // namespace si

/**
 * Temperature hbar^2 k_b^2 / (2 m k_B) of an atom leaving with wavenumber
 * k_b, where kappa follows from the coupling g (given as g/2pi in Hz).
 */
inline double effective_temperature(double k_b_over_kappa, double g_hz,
                                    double mass_kg)
{
    if (!(g_hz > 0.0) || !(mass_kg > 0.0) || !std::isfinite(g_hz) ||
        !std::isfinite(mass_kg)) {
        throw InvalidParameter("g and mass must be finite and > 0");
    }
    if (!(k_b_over_kappa >= 0.0) || !std::isfinite(k_b_over_kappa)) {
        throw InvalidParameter("k_b/kappa must be finite and >= 0");
    }
    const double g = 2.0 * std::numbers::pi * g_hz;
    const double kappa = std::sqrt(2.0 * mass_kg * g * si::hbar) / si::hbar;
    const double k_b = k_b_over_kappa * kappa;
    return si::hbar * si::hbar * k_b * k_b / (2.0 * mass_kg * si::boltzmann);
}

/// Converts a width in delta/g units to Hz for a coupling g/2pi in Hz.
inline double width_in_hz(double width_delta_over_g, double g_hz)
{
    return g_hz * width_delta_over_g;
}

} // namespace mazer

#endif
