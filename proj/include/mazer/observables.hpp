#ifndef MAZER_OBSERVABLES_HPP
#define MAZER_OBSERVABLES_HPP

#include <mazer/scattering.hpp>

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mazer {

/// Flux-normalized outcome probabilities for an incident excited atom.
struct OutcomeProbabilities
{
    double R_a = 0.0;
    double T_a = 0.0;
    double R_b = 0.0;
    double T_b = 0.0;
    /* photon emitted: atom leaves in |b>, either side */
    double P_em = 0.0;
    /* atom transmitted in either internal state */
    double T_total = 0.0;
};

inline OutcomeProbabilities probabilities(const ScatteringAmplitudes& amps,
                                          const ChannelSpec& channels)
{
    OutcomeProbabilities out;
    out.R_a = std::norm(amps.r_a);
    out.T_a = std::norm(amps.t_a);
    if (channels.b_open()) {
        const double ratio = channels.flux_ratio();
        out.R_b = ratio * std::norm(amps.r_b);
        out.T_b = ratio * std::norm(amps.t_b);
    }
    out.P_em = out.R_b + out.T_b;
    out.T_total = out.T_a + out.T_b;
    return out;
}

/// Rabi phase g*t accumulated in a transit t = L/v.
inline double interaction_phase(const ModelParams& params)
{
    return params.kappa_L() / (2.0 * params.k_over_kappa());
}

/**
 * Emission probability of the Jaynes-Cummings model for a classical transit
 * through the cavity:
 *
 *     P = sin^2(2 theta_n) sin^2( sqrt(delta^2 + Omega_n^2) t / 2 )
 *
 * with Omega_n = 2 g sqrt(n+1) and sin^2(2 theta_n) = Omega_n^2/(delta^2+Omega_n^2).
 */
inline double jc_emission_probability(const ModelParams& params)
{
    const double delta = params.delta_over_g();
    const double rabi_sq = 4.0 * (params.n_photons() + 1.0);
    const double generalized = std::sqrt(delta * delta + rabi_sq);
    const double s = std::sin(0.5 * generalized * interaction_phase(params));
    return rabi_sq / (delta * delta + rabi_sq) * s * s;
}

/// Resonance peak height predicted from the step transmission of the b channel.
inline double peak_amplitude_law(double k_over_kappa, double delta_over_g)
{
    if (!(k_over_kappa > 0.0)) {
        throw InvalidParameter("k/kappa must be > 0");
    }
    const double excess = k_over_kappa * k_over_kappa - delta_over_g;
    if (!(excess > 0.0)) {
        return 0.0;
    }
    const double ratio = std::sqrt(excess) / k_over_kappa;
    return 0.5 * 4.0 * ratio / ((1.0 + ratio) * (1.0 + ratio));
}

struct SolverOptions
{
    /* piecewise segments for non-mesa modes */
    std::size_t segments = 400;
    /* shape for ModeKind::Custom, stretched to the requested kappa*L */
    std::optional<ModeFunction> custom_mode;
};

/// Dispatches to the mesa path or to the piecewise solver.
inline ScatteringAmplitudes solve(const ModelParams& params,
                                  const SolverOptions& options = {})
{
    if (params.mode() == ModeKind::Mesa) {
        return solve_mesa(params);
    }
    if (params.mode() == ModeKind::Custom) {
        if (!options.custom_mode) {
            throw InvalidParameter("custom mode requires a tabulated profile");
        }
        const ModeFunction mode = options.custom_mode->with_kappa_L(params.kappa_L());
        return solve_piecewise(params, discretize_mode(mode, options.segments));
    }
    return solve_piecewise(params, discretize_mode(ModeFunction::from_params(params),
                                                   options.segments));
}

inline OutcomeProbabilities outcome(const ModelParams& params,
                                    const SolverOptions& options = {})
{
    return probabilities(solve(params, options), outside_channels(params));
}

enum class SweepAxis { KappaL, DeltaOverG, KOverKappa };

inline std::string_view to_string(SweepAxis axis)
{
    switch (axis) {
    case SweepAxis::KappaL: return "kappa_L";
    case SweepAxis::DeltaOverG: return "delta_over_g";
    case SweepAxis::KOverKappa: return "k_over_kappa";
    }
    return "unknown";
}

inline ModelParams with_coordinate(const ModelParams& params, SweepAxis axis,
                                   double value)
{
    switch (axis) {
    case SweepAxis::KappaL: return params.with_kappa_L(value);
    case SweepAxis::DeltaOverG: return params.with_delta_over_g(value);
    case SweepAxis::KOverKappa: return params.with_k_over_kappa(value);
    }
    return params;
}

struct SweepRow
{
    double coordinate;
    std::optional<OutcomeProbabilities> outcome;
    /* set when the solver failed at this point */
    std::string error;
};

struct SweepTable
{
    SweepAxis axis;
    std::vector<SweepRow> rows;
};

inline void check_grid(std::span<const double> grid)
{
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) {
            throw InvalidParameter("sweep grid must be finite");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw InvalidParameter("sweep grid must be strictly increasing");
        }
    }
}

/// One solve per grid point, in grid order. Failures are kept in-row.
inline SweepTable sweep(const ModelParams& params, SweepAxis axis,
                        std::span<const double> grid,
                        const SolverOptions& options = {})
{
    check_grid(grid);
    SweepTable table{axis, {}};
    table.rows.reserve(grid.size());
    for (double x : grid) {
        SweepRow row{x, std::nullopt, {}};
        try {
            row.outcome = outcome(with_coordinate(params, axis, x), options);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

inline std::vector<double> linspace(double start, double stop, std::size_t count)
{
    if (count < 2) {
        throw InvalidParameter("grid count must be >= 2");
    }
    std::vector<double> grid(count);
    const double step = (stop - start) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        grid[i] = start + step * static_cast<double>(i);
    }
    grid.back() = stop;
    return grid;
}

} // namespace mazer

#endif
