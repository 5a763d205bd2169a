#ifndef MAZER_CHANNELS_HPP
#define MAZER_CHANNELS_HPP

#include <mazer/core.hpp>

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <variant>

namespace mazer {

using complex = std::complex<double>;

/*
 * Channel |a,n> has its threshold at energy 0, channel |b,n+1> at +delta/g.
 * Emitting a photon therefore costs the atom delta/g of kinetic energy.
 */

/// sqrt with Re >= 0, and Im >= 0 for negative arguments.
inline complex branch_sqrt(double x)
{
    return x >= 0.0 ? complex(std::sqrt(x), 0.0) : complex(0.0, std::sqrt(-x));
}

struct OpenChannel
{
    double k_b;
};

struct ClosedChannel
{
    double q_b;
    /* exact threshold, q_b == 0 */
    bool degenerate = false;
};

struct ChannelSpec
{
    double k_a;
    std::variant<OpenChannel, ClosedChannel> b_channel;
    double delta_over_g;
    int n_photons;

    bool b_open() const
    {
        return std::holds_alternative<OpenChannel>(b_channel);
    }

    bool degenerate() const
    {
        const auto* closed = std::get_if<ClosedChannel>(&b_channel);
        return closed != nullptr && closed->degenerate;
    }

    /// k_b / k_a for an open b channel, zero otherwise.
    double flux_ratio() const
    {
        if (const auto* open = std::get_if<OpenChannel>(&b_channel)) {
            return open->k_b / k_a;
        }
        return 0.0;
    }

    /// Complex wavenumber of the b channel outside the cavity.
    complex k_b() const
    {
        if (const auto* open = std::get_if<OpenChannel>(&b_channel)) {
            return {open->k_b, 0.0};
        }
        return {0.0, std::get<ClosedChannel>(b_channel).q_b};
    }
};

inline ChannelSpec outside_channels(const ModelParams& params)
{
    const double k = params.k_over_kappa();
    const double excess = k * k - params.delta_over_g();
    ChannelSpec spec{k, ClosedChannel{0.0, true}, params.delta_over_g(),
                     params.n_photons()};
    if (excess > 0.0) {
        spec.b_channel = OpenChannel{std::sqrt(excess)};
    } else if (excess < 0.0) {
        spec.b_channel = ClosedChannel{std::sqrt(-excess), false};
    }
    return spec;
}

/// Wavenumber after photon emission, or nullopt when emission is blocked.
inline std::optional<double> cooling_wavenumber(double k_over_kappa,
                                                double delta_over_g)
{
    const double excess = k_over_kappa * k_over_kappa - delta_over_g;
    if (excess < 0.0) {
        return std::nullopt;
    }
    return std::sqrt(excess);
}

/**
 * Dressed-state decomposition of the 2x2 interaction matrix
 *
 *     [ 0            u sqrt(n+1) ]
 *     [ u sqrt(n+1)  delta/g     ]
 *
 * in the {|a,n>, |b,n+1>} basis. With theta the mixing angle, the
 * eigenvectors are
 *
 *     e_plus  = ( sin theta,  cos theta )
 *     e_minus = ( cos theta, -sin theta )
 *
 * Index 0 refers to the plus mode, index 1 to the minus mode.
 */
struct SegmentEigensystem
{
    double lambda_plus;
    double lambda_minus;
    double mixing_angle;
    std::array<complex, 2> local_wavenumbers;

    /// Columns are the eigenvectors in the bare basis.
    Eigen::Matrix2d basis() const
    {
        const double s = std::sin(mixing_angle);
        const double c = std::cos(mixing_angle);
        Eigen::Matrix2d m;
        m << s, c,
             c, -s;
        return m;
    }

    bool operator==(const SegmentEigensystem&) const = default;
};

inline SegmentEigensystem segment_eigensystem(double u, double delta_over_g,
                                              int n_photons,
                                              double k_over_kappa)
{
    const double coupling = u * std::sqrt(static_cast<double>(n_photons) + 1.0);
    const double half = 0.5 * delta_over_g;
    const double radius = std::hypot(half, coupling);
    SegmentEigensystem eig{};
    /* the smaller-magnitude root comes from the product -coupling^2 */
    if (half >= 0.0) {
        eig.lambda_plus = half + radius;
        eig.lambda_minus = -coupling * coupling / eig.lambda_plus;
    } else {
        eig.lambda_minus = half - radius;
        eig.lambda_plus = -coupling * coupling / eig.lambda_minus;
    }
    if (coupling == 0.0) {
        /* bare thresholds, exactly */
        eig.lambda_plus = std::max(0.0, delta_over_g);
        eig.lambda_minus = std::min(0.0, delta_over_g);
    }
    eig.mixing_angle = 0.5 * std::atan2(2.0 * coupling, delta_over_g);
    const double energy = k_over_kappa * k_over_kappa;
    eig.local_wavenumbers = {branch_sqrt(energy - eig.lambda_plus),
                             branch_sqrt(energy - eig.lambda_minus)};
    return eig;
}

/// Eigensystem of the field-free region outside the cavity.
inline SegmentEigensystem vacuum_eigensystem(const ModelParams& params)
{
    return segment_eigensystem(0.0, params.delta_over_g(), params.n_photons(),
                               params.k_over_kappa());
}

} // namespace mazer

#endif
