#ifndef MAZER_SCATTERING_HPP
#define MAZER_SCATTERING_HPP

#include <mazer/channels.hpp>
#include <mazer/modes.hpp>
#include <mazer/smatrix.hpp>

#include <cmath>
#include <complex>

namespace mazer {

/**
 * Outgoing amplitudes for a unit-amplitude |a,n> wave incident from the left.
 * Reflected amplitudes are referenced to the left edge of the cavity region,
 * transmitted ones to its right edge. For a closed b channel, r_b and t_b
 * are the evanescent tail amplitudes and carry no flux.
 */
struct ScatteringAmplitudes
{
    complex r_a;
    complex t_a;
    complex r_b;
    complex t_b;
};

namespace detail {

inline void check_threshold(const ChannelSpec& channels)
{
    if (channels.degenerate()) {
        throw DegenerateInput("b channel exactly at threshold "
                              "((k/kappa)^2 == delta/g)");
    }
}

inline ScatteringAmplitudes extract(const SMatrix& device,
                                    const SegmentEigensystem& vacuum)
{
    const Eigen::Matrix2cd basis = vacuum.basis().cast<complex>();
    const Eigen::Vector2cd incident = basis.transpose() * Eigen::Vector2cd(1.0, 0.0);
    const Eigen::Vector2cd reflected = basis * (device.r_left() * incident);
    const Eigen::Vector2cd transmitted = basis * (device.t_forward() * incident);
    if (!reflected.allFinite() || !transmitted.allFinite()) {
        throw CompositionError("non-finite scattering amplitudes", 0.0);
    }
    return {reflected(0), transmitted(0), reflected(1), transmitted(1)};
}

} // namespace detail

/// Scattering matrix of the whole profile, embedded in field-free space.
inline SMatrix device_smatrix(const ModelParams& params,
                              const ModeProfile& profile)
{
    const SegmentEigensystem vacuum = vacuum_eigensystem(params);
    SMatrix total = SMatrix::transparent();
    SegmentEigensystem previous = vacuum;
    for (const Segment& segment : profile.segments) {
        const SegmentEigensystem eig =
            segment_eigensystem(segment.u, params.delta_over_g(),
                                params.n_photons(), params.k_over_kappa());
        total = star_product(total, interface_smatrix(previous, eig));
        total = star_product(total, propagation_smatrix(eig, segment.length));
        previous = eig;
    }
    return star_product(total, interface_smatrix(previous, vacuum));
}

inline ScatteringAmplitudes solve_piecewise(const ModelParams& params,
                                            const ModeProfile& profile)
{
    detail::check_threshold(outside_channels(params));
    return detail::extract(device_smatrix(params, profile),
                           vacuum_eigensystem(params));
}

/// Mesa mode: one uniform interior segment between two interfaces.
inline ScatteringAmplitudes solve_mesa(const ModelParams& params)
{
    detail::check_threshold(outside_channels(params));
    const SegmentEigensystem vacuum = vacuum_eigensystem(params);
    const SegmentEigensystem inside =
        segment_eigensystem(1.0, params.delta_over_g(), params.n_photons(),
                            params.k_over_kappa());
    const SMatrix entry = interface_smatrix(vacuum, inside);
    const SMatrix exit = interface_smatrix(inside, vacuum);
    const SMatrix bulk = propagation_smatrix(inside, params.kappa_L());
    return detail::extract(star_product(star_product(entry, bulk), exit), vacuum);
}

/// Flux balance |r_a|^2 + |t_a|^2 + (k_b/k)(|r_b|^2 + |t_b|^2) - 1.
inline double unitarity_defect(const ScatteringAmplitudes& amps,
                               const ChannelSpec& channels)
{
    const double ratio = channels.flux_ratio();
    return std::norm(amps.r_a) + std::norm(amps.t_a) +
           ratio * (std::norm(amps.r_b) + std::norm(amps.t_b)) - 1.0;
}

} // namespace mazer

#endif
