#ifndef MAZER_PEAKS_HPP
#define MAZER_PEAKS_HPP

#include <mazer/observables.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace mazer {

inline constexpr double default_min_prominence = 1e-4;

enum class Observable { R_a, T_a, R_b, T_b, P_em, T_total };

inline double select(const OutcomeProbabilities& p, Observable which)
{
    switch (which) {
    case Observable::R_a: return p.R_a;
    case Observable::T_a: return p.T_a;
    case Observable::R_b: return p.R_b;
    case Observable::T_b: return p.T_b;
    case Observable::P_em: return p.P_em;
    case Observable::T_total: return p.T_total;
    }
    return 0.0;
}

/**
 * A local maximum of a sampled curve. The width is measured at half the
 * prominence below the maximum, which is the half maximum for peaks sitting
 * on a zero baseline.
 */
struct Peak
{
    double position;
    double amplitude;
    double fwhm;
    double prominence;
    /* a half-height crossing is missing or lies in an outermost grid interval */
    bool partial = false;
};

namespace detail {

struct CoarsePeak
{
    Peak peak;
    std::size_t index;
    /* nearest samples at or below half height on each side, if any */
    std::optional<std::size_t> left_cross;
    std::optional<std::size_t> right_cross;
};

inline double crossing(double x0, double y0, double x1, double y1, double level)
{
    if (y1 == y0) {
        return 0.5 * (x0 + x1);
    }
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0);
}

inline std::vector<CoarsePeak> coarse_peaks(std::span<const double> x,
                                            std::span<const double> y,
                                            double min_prominence)
{
    if (x.size() != y.size()) {
        throw InvalidParameter("peak search: x and y differ in length");
    }
    if (x.size() < 3) {
        throw InvalidParameter("peak search needs at least 3 samples");
    }
    const std::size_t n = y.size();
    std::vector<CoarsePeak> found;
    std::size_t i = 1;
    while (i + 1 < n) {
        if (!(y[i] > y[i - 1])) {
            ++i;
            continue;
        }
        /* walk across a plateau */
        std::size_t j = i;
        while (j + 1 < n && y[j + 1] == y[i]) {
            ++j;
        }
        if (j + 1 >= n || !(y[j + 1] < y[i])) {
            i = j + 1;
            continue;
        }
        const std::size_t top = (i + j) / 2;
        const double height = y[top];

        double left_min = height;
        for (std::size_t l = i; l-- > 0;) {
            if (y[l] > height) {
                break;
            }
            left_min = std::min(left_min, y[l]);
        }
        double right_min = height;
        for (std::size_t r = j + 1; r < n; ++r) {
            if (y[r] > height) {
                break;
            }
            right_min = std::min(right_min, y[r]);
        }
        const double prominence = height - std::max(left_min, right_min);
        if (prominence >= min_prominence) {
            const double level = height - 0.5 * prominence;
            CoarsePeak cp{{x[top], height, 0.0, prominence, false}, top, {}, {}};

            double left_x = x.front();
            std::size_t l = top;
            while (l > 0 && y[l - 1] > level) {
                --l;
            }
            if (l == 0) {
                cp.peak.partial = true;
            } else {
                left_x = crossing(x[l - 1], y[l - 1], x[l], y[l], level);
                cp.left_cross = l - 1;
                /* crossing in the outermost interval: the peak touches the edge */
                cp.peak.partial = cp.peak.partial || l - 1 == 0;
            }

            double right_x = x.back();
            std::size_t r = top;
            while (r + 1 < n && y[r + 1] > level) {
                ++r;
            }
            if (r + 1 >= n) {
                cp.peak.partial = true;
            } else {
                right_x = crossing(x[r], y[r], x[r + 1], y[r + 1], level);
                cp.right_cross = r + 1;
                cp.peak.partial = cp.peak.partial || r + 1 == n - 1;
            }
            cp.peak.fwhm = right_x - left_x;
            found.push_back(cp);
        }
        i = j + 1;
    }
    return found;
}

/* golden-section search for the maximum of a unimodal f on [lo, hi] */
inline std::pair<double, double> maximize(const std::function<double(double)>& f,
                                          double lo, double hi, double xtol)
{
    const double inv_phi = std::numbers::phi - 1.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int iter = 0; iter < 200 && (b - a) > xtol; ++iter) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc > fd ? std::pair{c, fc} : std::pair{d, fd};
}

/* bisection for f(x) == level, with f(inside) > level >= f(outside) */
inline double bisect_level(const std::function<double(double)>& f, double inside,
                           double outside, double level, double xtol)
{
    for (int iter = 0; iter < 200 && std::abs(outside - inside) > xtol; ++iter) {
        const double mid = 0.5 * (inside + outside);
        if (f(mid) > level) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    return 0.5 * (inside + outside);
}

} // namespace detail

/// Local maxima of y(x) with prominence >= min_prominence.
inline std::vector<Peak> find_peaks(std::span<const double> x,
                                    std::span<const double> y,
                                    double min_prominence = default_min_prominence)
{
    std::vector<Peak> peaks;
    for (const auto& cp : detail::coarse_peaks(x, y, min_prominence)) {
        peaks.push_back(cp.peak);
    }
    return peaks;
}

/// Peaks of one observable in a sweep table. Rows that failed are skipped.
inline std::vector<Peak> find_peaks(const SweepTable& table, Observable which,
                                    double min_prominence = default_min_prominence)
{
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& row : table.rows) {
        if (row.outcome) {
            x.push_back(row.coordinate);
            y.push_back(select(*row.outcome, which));
        }
    }
    return find_peaks(x, y, min_prominence);
}

/**
 * Samples f on the grid, then sharpens every peak found: golden-section
 * search for the maximum between the neighbouring samples and bisection for
 * the half-height crossings, both down to rel_resolution times the width.
 */
inline std::vector<Peak> find_peaks_refined(const std::function<double(double)>& f,
                                            std::span<const double> grid,
                                            double min_prominence = default_min_prominence,
                                            double rel_resolution = 1e-3)
{
    check_grid(grid);
    std::vector<double> y(grid.size());
    std::transform(grid.begin(), grid.end(), y.begin(), f);
    std::vector<Peak> peaks;
    for (const auto& cp : detail::coarse_peaks(grid, y, min_prominence)) {
        const std::size_t i = cp.index;
        const double lo = grid[i > 0 ? i - 1 : i];
        const double hi = grid[i + 1 < grid.size() ? i + 1 : i];
        const double xtol = rel_resolution * std::max(cp.peak.fwhm, 1e-300) * 1e-3;
        const auto [x_max, y_max] = detail::maximize(f, lo, hi, xtol);

        Peak p = cp.peak;
        const double base = cp.peak.amplitude - cp.peak.prominence;
        if (y_max > p.amplitude) {
            p.position = x_max;
            p.amplitude = y_max;
        }
        p.prominence = p.amplitude - base;
        const double level = p.amplitude - 0.5 * p.prominence;
        const double wtol = rel_resolution * cp.peak.fwhm;

        double left = grid.front();
        if (cp.left_cross) {
            left = detail::bisect_level(f, p.position, grid[*cp.left_cross],
                                        level, wtol);
        }
        double right = grid.back();
        if (cp.right_cross) {
            right = detail::bisect_level(f, p.position, grid[*cp.right_cross],
                                         level, wtol);
        }
        p.fwhm = right - left;
        peaks.push_back(p);
    }
    return peaks;
}

} // namespace mazer

#endif
