#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace iga {

namespace detail {

/// least-squares slope of y against x
inline double ls_slope(std::span<const double> x, std::span<const double> y)
{
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit: degenerate abscissae");
    return (n * sxy - sx * sy) / denom;
}

}  // namespace detail

/// slope of log(cond) against log(1/h); ~0 means h-independence, 2 the h^-2
/// regime
inline double fit_h_slope(std::span<const double> inv_h, std::span<const double> cond)
{
    if (inv_h.size() != cond.size() || inv_h.size() < 3)
        throw std::invalid_argument("fit_h_slope: need at least 3 matching points");
    std::vector<double> lx(inv_h.size()), ly(inv_h.size());
    for (std::size_t i = 0; i < inv_h.size(); ++i) {
        if (!(inv_h[i] > 0.0) || !(cond[i] > 0.0))
            throw std::invalid_argument("fit_h_slope: points must be positive");
        lx[i] = std::log(inv_h[i]);
        ly[i] = std::log(cond[i]);
    }
    return detail::ls_slope(lx, ly);
}

/// exponent alpha in cond ~ C p^{-1} 4^{alpha p}, from regressing
/// log2(cond * p) / 2 against p
inline double fit_p_alpha(std::span<const int> p, std::span<const double> cond)
{
    if (p.size() != cond.size() || p.size() < 3)
        throw std::invalid_argument("fit_p_alpha: need at least 3 matching points");
    std::vector<double> x(p.size()), y(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 1 || !(cond[i] > 0.0))
            throw std::invalid_argument("fit_p_alpha: points must be positive");
        x[i] = static_cast<double>(p[i]);
        y[i] = 0.5 * std::log2(cond[i] * p[i]);
    }
    return detail::ls_slope(x, y);
}

}  // namespace iga
