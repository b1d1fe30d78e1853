#pragma once

#include "iga/knots.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace iga {

/// Values and derivatives of the p+1 basis functions that can be nonzero at
/// one parameter value. Entry j refers to basis function first_index + j.
struct BasisEval {
    int first_index = 0;
    std::vector<double> values;   // size p+1
    std::vector<double> d1;       // empty unless requested
    std::vector<double> d2;       // empty unless requested
};

/// Univariate NURBS basis: open knot vector plus positive weights.
/// All weights equal (the default) reduces to polynomial B-splines.
struct SplineBasis1D {
    KnotVector kv;
    std::vector<double> weights;

    SplineBasis1D() = default;
    explicit SplineBasis1D(KnotVector k) : kv(std::move(k)), weights(kv.num_basis, 1.0) {}
    SplineBasis1D(KnotVector k, std::vector<double> w) : kv(std::move(k)), weights(std::move(w))
    {
        if (static_cast<int>(weights.size()) != kv.num_basis)
            throw std::invalid_argument("SplineBasis1D: weight count does not match basis count");
        for (double wi : weights)
            if (!(wi > 0.0))
                throw std::invalid_argument("SplineBasis1D: weights must be positive");
    }

    int degree() const { return kv.degree; }
    int size() const { return kv.num_basis; }

    bool is_polynomial() const
    {
        for (double wi : weights)
            if (wi != weights[0]) return false;
        return true;
    }
};

namespace detail {

/// Knot span containing x, right-limit convention; x = 1 falls in the last
/// nonempty span so the final basis function evaluates to 1 there.
inline int find_span(const KnotVector& kv, double x)
{
    const int p = kv.degree;
    const int n = kv.num_basis - 1;
    if (x >= kv.knots[n + 1]) return n;
    if (x <= kv.knots[p]) return p;
    int lo = p, hi = n + 1;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        (kv.knots[mid] <= x ? lo : hi) = mid;
    }
    return lo;
}

/// B-spline values and derivatives on one span (de Boor recursion with the
/// standard inverse-difference derivative table). out[r][j] is the r-th
/// derivative of basis function span-p+j, r = 0..nd.
inline void ders_basis_funs(const KnotVector& kv, int span, double x, int nd,
                            std::vector<std::vector<double>>& out)
{
    const int p = kv.degree;
    const auto& U = kv.knots;

    std::vector<std::vector<double>> ndu(p + 1, std::vector<double>(p + 1, 0.0));
    std::vector<double> left(p + 1), right(p + 1);
    ndu[0][0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = x - U[span + 1 - j];
        right[j] = U[span + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu[j][r] = right[r + 1] + left[j - r];
            const double temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }

    out.assign(nd + 1, std::vector<double>(p + 1, 0.0));
    for (int j = 0; j <= p; ++j)
        out[0][j] = ndu[j][p];

    std::vector<std::vector<double>> a(2, std::vector<double>(p + 1, 0.0));
    for (int r = 0; r <= p; ++r) {
        int s1 = 0, s2 = 1;
        a[0][0] = 1.0;
        for (int kd = 1; kd <= nd; ++kd) {
            double d = 0.0;
            const int rk = r - kd, pk = p - kd;
            if (r >= kd) {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
                d = a[s2][0] * ndu[rk][pk];
            }
            const int j1 = (rk >= -1) ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? kd - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
                d += a[s2][j] * ndu[rk + j][pk];
            }
            if (r <= pk) {
                a[s2][kd] = -a[s1][kd - 1] / ndu[pk + 1][r];
                d += a[s2][kd] * ndu[r][pk];
            }
            out[kd][r] = d;
            std::swap(s1, s2);
        }
    }

    double fac = p;
    for (int kd = 1; kd <= nd; ++kd) {
        for (int j = 0; j <= p; ++j)
            out[kd][j] *= fac;
        fac *= (p - kd);
    }
}

}  // namespace detail

/// Evaluate the p+1 possibly nonzero basis functions (and derivatives up to
/// max_deriv <= 2) at x in [0,1]. Rational weights go through the quotient
/// rule; equal weights take the polynomial path unchanged.
inline BasisEval eval_basis(const SplineBasis1D& basis, double x, int max_deriv = 2)
{
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("eval_basis: parameter " + std::to_string(x) + " outside [0,1]");
    if (max_deriv < 0 || max_deriv > 2)
        throw std::invalid_argument("eval_basis: max_deriv must be 0, 1 or 2");

    const KnotVector& kv = basis.kv;
    const int p = kv.degree;
    const int span = detail::find_span(kv, x);

    std::vector<std::vector<double>> ders;
    detail::ders_basis_funs(kv, span, x, max_deriv, ders);

    BasisEval ev;
    ev.first_index = span - p;
    ev.values = std::move(ders[0]);
    if (max_deriv >= 1) ev.d1 = std::move(ders[1]);
    if (max_deriv >= 2) ev.d2 = std::move(ders[2]);

    if (!basis.is_polynomial()) {
        const int m = p + 1;
        double w0 = 0.0, w1 = 0.0, w2 = 0.0;
        for (int j = 0; j < m; ++j) {
            const double wj = basis.weights[ev.first_index + j];
            w0 += ev.values[j] * wj;
            if (max_deriv >= 1) w1 += ev.d1[j] * wj;
            if (max_deriv >= 2) w2 += ev.d2[j] * wj;
        }
        for (int j = 0; j < m; ++j) {
            const double wj = basis.weights[ev.first_index + j];
            const double N = ev.values[j];
            const double N1 = max_deriv >= 1 ? ev.d1[j] : 0.0;
            const double N2 = max_deriv >= 2 ? ev.d2[j] : 0.0;
            ev.values[j] = wj * N / w0;
            if (max_deriv >= 1)
                ev.d1[j] = wj * (N1 * w0 - N * w1) / (w0 * w0);
            if (max_deriv >= 2)
                ev.d2[j] = wj * (N2 * w0 * w0 - 2.0 * N1 * w1 * w0 - N * w2 * w0 + 2.0 * N * w1 * w1) /
                           (w0 * w0 * w0);
        }
    }
    return ev;
}

}  // namespace iga
