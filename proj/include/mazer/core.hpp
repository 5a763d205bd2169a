#ifndef MAZER_CORE_HPP
#define MAZER_CORE_HPP

// Dimensionless conventions used throughout the library:
//   lengths      in units of 1/kappa
//   energies     in units of hbar*g
//   wavenumbers  in units of kappa
// where kappa is defined by hbar^2 kappa^2 / 2m = hbar g, so that the
// kinetic energy of an atom with wavenumber k is (k/kappa)^2 in units of hbar*g.

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mazer {

inline constexpr const char* version = "0.1.0";

class InvalidParameter : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

enum class ModeKind { Mesa, SechSquared, Sinusoidal, Custom };

inline std::string_view to_string(ModeKind kind)
{
    switch (kind) {
    case ModeKind::Mesa: return "mesa";
    case ModeKind::SechSquared: return "sech2";
    case ModeKind::Sinusoidal: return "sin2";
    case ModeKind::Custom: return "custom";
    }
    return "unknown";
}

/**
 * Physical configuration of one atom/cavity passage, in dimensionless form.
 *
 * The incident atom is in the excited state |a> with wavenumber k and the
 * cavity holds n photons. The detuning is delta/g with delta = omega - omega0.
 */
class ModelParams
{
public:
    ModelParams(double k_over_kappa, double delta_over_g, int n_photons,
                double kappa_L, ModeKind mode = ModeKind::Mesa)
        : m_k(k_over_kappa), m_delta(delta_over_g), m_n(n_photons),
          m_length(kappa_L), m_mode(mode)
    {
        if (!std::isfinite(m_k) || m_k <= 0.0) {
            throw InvalidParameter("k/kappa must be finite and > 0");
        }
        if (!std::isfinite(m_delta)) {
            throw InvalidParameter("delta/g must be finite");
        }
        if (m_n < 0) {
            throw InvalidParameter("photon number must be >= 0");
        }
        if (!std::isfinite(m_length) || m_length < 0.0) {
            throw InvalidParameter("kappa*L must be finite and >= 0");
        }
    }

    double k_over_kappa() const { return m_k; }
    double delta_over_g() const { return m_delta; }
    int n_photons() const { return m_n; }
    double kappa_L() const { return m_length; }
    ModeKind mode() const { return m_mode; }

    /* kinetic energy of the incident atom in units of hbar*g */
    double kinetic_energy() const { return m_k * m_k; }

    ModelParams with_k_over_kappa(double k) const
    {
        return ModelParams(k, m_delta, m_n, m_length, m_mode);
    }
    ModelParams with_delta_over_g(double delta) const
    {
        return ModelParams(m_k, delta, m_n, m_length, m_mode);
    }
    ModelParams with_kappa_L(double length) const
    {
        return ModelParams(m_k, m_delta, m_n, length, m_mode);
    }
    ModelParams with_mode(ModeKind mode) const
    {
        return ModelParams(m_k, m_delta, m_n, m_length, mode);
    }

private:
    double m_k;
    double m_delta;
    int m_n;
    double m_length;
    ModeKind m_mode;
};

enum class Regime { Hot, Intermediate, Cold };

inline std::string_view to_string(Regime regime)
{
    switch (regime) {
    case Regime::Hot: return "hot";
    case Regime::Intermediate: return "intermediate";
    case Regime::Cold: return "cold";
    }
    return "unknown";
}

inline constexpr double hot_threshold = 10.0;
inline constexpr double cold_threshold = 0.1;

/// Informational only; no solver branches on the regime.
inline Regime classify_regime(const ModelParams& params)
{
    const double k = params.k_over_kappa();
    if (k >= hot_threshold) {
        return Regime::Hot;
    }
    if (k <= cold_threshold) {
        return Regime::Cold;
    }
    return Regime::Intermediate;
}

} // namespace mazer

#endif
