#ifndef MAZER_MODES_HPP
#define MAZER_MODES_HPP

#include <mazer/core.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace mazer {

/* sech^2 tails are cut where the mode drops below this value */
inline constexpr double sech2_cutoff = 1e-8;

struct ModeSample
{
    double z;
    double u;
};

/**
 * Cavity field mode function u(z).
 *
 * Mesa:        u = 1 on [0, L], 0 elsewhere.
 * SechSquared: u = sech^2((z - L/2) / w), truncated where u < 1e-8. The
 *              default width w = L/2 gives the same mode area as the mesa.
 * Sinusoidal:  u = sin^2(pi z / L) on [0, L].
 * Custom:      tabulated (z, u) pairs, linearly interpolated. The table
 *              shape is stretched onto [0, L].
 */
class ModeFunction
{
public:
    static ModeFunction mesa(double kappa_L)
    {
        return ModeFunction(ModeKind::Mesa, kappa_L);
    }

    static ModeFunction sech_squared(double kappa_L)
    {
        return sech_squared(kappa_L, kappa_L / 2.0);
    }

    static ModeFunction sech_squared(double kappa_L, double width)
    {
        ModeFunction mode(ModeKind::SechSquared, kappa_L);
        if (!std::isfinite(width) || width < 0.0) {
            throw InvalidParameter("sech2 width must be finite and >= 0");
        }
        mode.m_width = width;
        return mode;
    }

    static ModeFunction sinusoidal(double kappa_L)
    {
        return ModeFunction(ModeKind::Sinusoidal, kappa_L);
    }

    static ModeFunction custom(std::vector<ModeSample> table, double kappa_L)
    {
        if (table.size() < 2) {
            throw InvalidParameter("custom mode table needs at least 2 rows");
        }
        for (std::size_t i = 0; i < table.size(); ++i) {
            if (!std::isfinite(table[i].z) || !std::isfinite(table[i].u) ||
                table[i].u < 0.0) {
                throw InvalidParameter("custom mode values must be finite "
                                       "with u >= 0");
            }
            if (i > 0 && !(table[i].z > table[i - 1].z)) {
                throw InvalidParameter("custom mode z must be strictly "
                                       "increasing");
            }
        }
        ModeFunction mode(ModeKind::Custom, kappa_L);
        /* normalize the abscissa to [0, 1] */
        const double z0 = table.front().z;
        const double span = table.back().z - z0;
        for (auto& s : table) {
            s.z = (s.z - z0) / span;
        }
        table.back().z = 1.0;
        mode.m_table = std::move(table);
        return mode;
    }

    /// Builds the analytic mode named by params. Custom modes need a table
    /// and cannot be built this way.
    static ModeFunction from_params(const ModelParams& params)
    {
        switch (params.mode()) {
        case ModeKind::Mesa: return mesa(params.kappa_L());
        case ModeKind::SechSquared: return sech_squared(params.kappa_L());
        case ModeKind::Sinusoidal: return sinusoidal(params.kappa_L());
        case ModeKind::Custom: break;
        }
        throw InvalidParameter("custom mode requires a tabulated profile");
    }

    /// Same shape, different length.
    ModeFunction with_kappa_L(double kappa_L) const
    {
        ModeFunction mode = *this;
        if (m_kind == ModeKind::SechSquared && m_length > 0.0) {
            mode.m_width = m_width * kappa_L / m_length;
        } else if (m_kind == ModeKind::SechSquared) {
            mode.m_width = kappa_L / 2.0;
        }
        mode.m_length = kappa_L;
        mode.check_length();
        return mode;
    }

    ModeKind kind() const { return m_kind; }
    double kappa_L() const { return m_length; }
    double width() const { return m_width; }
    const std::vector<ModeSample>& table() const { return m_table; }

    /// Interval outside of which u(z) vanishes.
    std::pair<double, double> support() const
    {
        if (m_kind == ModeKind::SechSquared) {
            const double half = m_width * std::acosh(1.0 / std::sqrt(sech2_cutoff));
            return {0.5 * m_length - half, 0.5 * m_length + half};
        }
        return {0.0, m_length};
    }

    double support_length() const
    {
        const auto [lo, hi] = support();
        return hi - lo;
    }

    double operator()(double z) const
    {
        const auto [lo, hi] = support();
        if (!(z >= lo && z <= hi) || m_length == 0.0) {
            return 0.0;
        }
        switch (m_kind) {
        case ModeKind::Mesa:
            return 1.0;
        case ModeKind::SechSquared: {
            const double c = 1.0 / std::cosh((z - 0.5 * m_length) / m_width);
            return c * c;
        }
        case ModeKind::Sinusoidal: {
            const double s = std::sin(std::numbers::pi * z / m_length);
            return s * s;
        }
        case ModeKind::Custom:
            return interpolate(z / m_length);
        }
        return 0.0;
    }

private:
    ModeFunction(ModeKind kind, double kappa_L) : m_kind(kind), m_length(kappa_L)
    {
        check_length();
    }

    void check_length() const
    {
        if (!std::isfinite(m_length) || m_length < 0.0) {
            throw InvalidParameter("kappa*L must be finite and >= 0");
        }
    }

    double interpolate(double x) const
    {
        auto it = std::upper_bound(m_table.begin(), m_table.end(), x,
                                   [](double v, const ModeSample& s) {
                                       return v < s.z;
                                   });
        if (it == m_table.begin()) {
            return m_table.front().u;
        }
        if (it == m_table.end()) {
            return m_table.back().u;
        }
        const ModeSample& hi = *it;
        const ModeSample& lo = *(it - 1);
        const double f = (x - lo.z) / (hi.z - lo.z);
        return lo.u + f * (hi.u - lo.u);
    }

    ModeKind m_kind;
    double m_length;
    double m_width = 0.0;
    std::vector<ModeSample> m_table;
};

inline double evaluate_mode(const ModeFunction& mode, double z)
{
    return mode(z);
}

struct Segment
{
    double length;
    double u;
};

/// Piecewise-constant approximation of a mode, left to right.
struct ModeProfile
{
    double origin = 0.0;
    std::vector<Segment> segments;

    double total_length() const
    {
        double sum = 0.0;
        for (const auto& s : segments) {
            sum += s.length;
        }
        return sum;
    }

    /// Mirror image of the profile.
    ModeProfile reversed() const
    {
        ModeProfile out{origin, {segments.rbegin(), segments.rend()}};
        return out;
    }
};

/**
 * Midpoint sampling of the mode on n equal segments spanning its support.
 * A mode with empty support (kappa*L = 0) yields an empty profile.
 */
inline ModeProfile discretize_mode(const ModeFunction& mode,
                                   std::size_t n_segments)
{
    if (n_segments == 0) {
        throw InvalidParameter("n_segments must be >= 1");
    }
    const auto [lo, hi] = mode.support();
    ModeProfile profile;
    profile.origin = lo;
    if (!(hi > lo)) {
        return profile;
    }
    const double h = (hi - lo) / static_cast<double>(n_segments);
    profile.segments.reserve(n_segments);
    for (std::size_t i = 0; i < n_segments; ++i) {
        const double mid = lo + (static_cast<double>(i) + 0.5) * h;
        profile.segments.push_back({h, mode(mid)});
    }
    return profile;
}

/// Reads a two-column `z u` table. Blank lines and `#` comments are skipped.
inline std::vector<ModeSample> read_mode_table(std::istream& in)
{
    std::vector<ModeSample> table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        double z = 0.0;
        double u = 0.0;
        if (!(fields >> z)) {
            continue;
        }
        std::string extra;
        if (!(fields >> u) || (fields >> extra)) {
            throw InvalidParameter("mode table line " + std::to_string(lineno) +
                                   ": expected two columns `z u`");
        }
        table.push_back({z, u});
    }
    return table;
}

inline ModeFunction load_custom_mode(const std::string& path, double kappa_L)
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidParameter("cannot open mode file: " + path);
    }
    return ModeFunction::custom(read_mode_table(in), kappa_L);
}

} // namespace mazer

#endif
