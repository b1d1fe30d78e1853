#pragma once

#include <Eigen/Dense>

#include <cfloat>
#include <cmath>
#include <complex>
#include <vector>

namespace iga {

/// Eigenvalues of a real dense nonsymmetric matrix. When the QR iteration
/// runs out of its sweep budget the tail that did converge is returned and
/// the result is flagged; `unconverged` is the size of the remaining block.
struct EigenvalueResult {
    std::vector<std::complex<double>> values;
    bool converged = true;
    int unconverged = 0;
};

namespace detail {

inline double sign_of(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

/// diagonal similarity scaling with radix powers (exact in floating point)
inline void balance(std::vector<double>& a, int n)
{
    const double radix = 2.0, sqrdx = radix * radix;
    bool done = false;
    while (!done) {
        done = true;
        for (int i = 0; i < n; ++i) {
            double r = 0.0, c = 0.0;
            for (int j = 0; j < n; ++j)
                if (j != i) {
                    c += std::abs(a[j * n + i]);
                    r += std::abs(a[i * n + j]);
                }
            if (c != 0.0 && r != 0.0) {
                double g = r / radix, f = 1.0;
                const double s = c + r;
                while (c < g) {
                    f *= radix;
                    c *= sqrdx;
                }
                g = r * radix;
                while (c > g) {
                    f /= radix;
                    c /= sqrdx;
                }
                if ((c + r) / f < 0.95 * s) {
                    done = false;
                    g = 1.0 / f;
                    for (int j = 0; j < n; ++j) a[i * n + j] *= g;
                    for (int j = 0; j < n; ++j) a[j * n + i] *= f;
                }
            }
        }
    }
}

/// Householder reduction to upper Hessenberg form (eigenvalues only, no
/// transform accumulation)
inline void hessenberg(std::vector<double>& a, int n)
{
    std::vector<double> v(n), w(n);
    for (int k = 0; k + 2 < n; ++k) {
        double scale = 0.0;
        for (int i = k + 1; i < n; ++i) scale += std::abs(a[i * n + k]);
        if (scale == 0.0) continue;
        double alpha = 0.0;
        for (int i = k + 1; i < n; ++i) {
            v[i] = a[i * n + k] / scale;
            alpha += v[i] * v[i];
        }
        alpha = std::sqrt(alpha);
        if (v[k + 1] < 0.0) alpha = -alpha;
        v[k + 1] += alpha;
        const double beta = v[k + 1] * alpha;  // = ||v||^2 / 2 after update
        if (beta == 0.0) continue;

        // A <- (I - v v^T / beta) A  restricted to rows k+1.., all columns
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int i = k + 1; i < n; ++i) s += v[i] * a[i * n + j];
            s /= beta;
            for (int i = k + 1; i < n; ++i) a[i * n + j] -= s * v[i];
        }
        // A <- A (I - v v^T / beta)  on columns k+1..
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = k + 1; j < n; ++j) s += a[i * n + j] * v[j];
            s /= beta;
            for (int j = k + 1; j < n; ++j) a[i * n + j] -= s * v[j];
        }
        a[(k + 1) * n + k] = -alpha * scale;
        for (int i = k + 2; i < n; ++i) a[i * n + k] = 0.0;
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix, eigenvalues only.
/// Returns the index of the first row of the block still active when the
/// sweep budget ran out, or -1 on full convergence.
inline int hqr(std::vector<double>& a, int n, std::vector<std::complex<double>>& wri, long max_sweeps)
{
    const double eps = DBL_EPSILON;
    auto A = [&a, n](int i, int j) -> double& { return a[i * n + j]; };

    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(A(i, j));

    wri.assign(n, {0.0, 0.0});
    long sweeps = 0;
    int nn = n - 1;
    double t = 0.0;
    while (nn >= 0) {
        int its = 0;
        int l;
        do {
            for (l = nn; l >= 1; --l) {
                double s = std::abs(A(l - 1, l - 1)) + std::abs(A(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(A(l, l - 1)) <= eps * s) {
                    A(l, l - 1) = 0.0;
                    break;
                }
            }
            if (l < 0) l = 0;
            double x = A(nn, nn);
            if (l == nn) {
                wri[nn--] = {x + t, 0.0};
            } else {
                double y = A(nn - 1, nn - 1);
                double w = A(nn, nn - 1) * A(nn - 1, nn);
                if (l == nn - 1) {
                    double p = 0.5 * (y - x);
                    double q = p * p + w;
                    double z = std::sqrt(std::abs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + sign_of(z, p);
                        wri[nn - 1] = wri[nn] = {x + z, 0.0};
                        if (z != 0.0) wri[nn] = {x - w / z, 0.0};
                    } else {
                        wri[nn] = {x + p, -z};
                        wri[nn - 1] = std::conj(wri[nn]);
                    }
                    nn -= 2;
                } else {
                    if (++sweeps > max_sweeps) return nn + 1;
                    if (its % 30 == 10 || its % 30 == 20) {
                        // ad hoc shift breaking symmetric stalls
                        t += x;
                        for (int i = 0; i <= nn; ++i) A(i, i) -= x;
                        const double s = std::abs(A(nn, nn - 1)) + std::abs(A(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        w = -0.4375 * s * s;
                    } else if (its > 0 && its % 30 == 0) {
                        // alternative exceptional shift for blocks the first
                        // form does not crack
                        double s = 0.5 * (y - x);
                        s = s * s + w;
                        if (s > 0.0) {
                            s = std::sqrt(s);
                            if (y < x) s = -s;
                            s += 0.5 * (y - x);
                            s = x - w / s;
                            t += s;
                            for (int i = 0; i <= nn; ++i) A(i, i) -= s;
                            x = y = w = 0.964;
                        }
                    }
                    ++its;
                    int m;
                    double p = 0.0, q = 0.0, r = 0.0;
                    for (m = nn - 2; m >= l; --m) {
                        const double z = A(m, m);
                        const double rr = x - z;
                        const double ss = y - z;
                        p = (rr * ss - w) / A(m + 1, m) + A(m, m + 1);
                        q = A(m + 1, m + 1) - z - rr - ss;
                        r = A(m + 2, m + 1);
                        const double s = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        const double u = std::abs(A(m, m - 1)) * (std::abs(q) + std::abs(r));
                        const double v = std::abs(p) * (std::abs(A(m - 1, m - 1)) + std::abs(z) +
                                                        std::abs(A(m + 1, m + 1)));
                        if (u <= eps * v) break;
                    }
                    for (int i = m + 2; i <= nn; ++i) {
                        A(i, i - 2) = 0.0;
                        if (i > m + 2) A(i, i - 3) = 0.0;
                    }
                    for (int k = m; k <= nn - 1; ++k) {
                        if (k != m) {
                            p = A(k, k - 1);
                            q = A(k + 1, k - 1);
                            r = (k + 1 != nn) ? A(k + 2, k - 1) : 0.0;
                            x = std::abs(p) + std::abs(q) + std::abs(r);
                            if (x != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        const double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
                        if (s == 0.0) continue;
                        if (k == m) {
                            if (l != m) A(k, k - 1) = -A(k, k - 1);
                        } else {
                            A(k, k - 1) = -s * x;
                        }
                        p += s;
                        x = p / s;
                        double yy = q / s;
                        double zz = r / s;
                        q /= p;
                        r /= p;
                        for (int j = k; j <= nn; ++j) {
                            double pp = A(k, j) + q * A(k + 1, j);
                            if (k + 1 != nn) {
                                pp += r * A(k + 2, j);
                                A(k + 2, j) -= pp * zz;
                            }
                            A(k + 1, j) -= pp * yy;
                            A(k, j) -= pp * x;
                        }
                        const int mmin = std::min(nn, k + 3);
                        for (int i = l; i <= mmin; ++i) {
                            double pp = x * A(i, k) + yy * A(i, k + 1);
                            if (k + 1 != nn) {
                                pp += zz * A(i, k + 2);
                                A(i, k + 2) -= pp * r;
                            }
                            A(i, k + 1) -= pp * q;
                            A(i, k) -= pp;
                        }
                    }
                }
            }
        } while (l + 1 < nn);
    }
    return -1;
}

}  // namespace detail

inline EigenvalueResult eigenvalues_dense(const Eigen::MatrixXd& m, long max_sweeps = -1)
{
    const int n = static_cast<int>(m.rows());
    if (m.cols() != n) throw std::invalid_argument("eigenvalues_dense: matrix must be square");
    EigenvalueResult res;
    if (n == 0) return res;
    if (max_sweeps < 0) max_sweeps = 30L * n;

    std::vector<double> a(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i * n + j] = m(i, j);

    detail::balance(a, n);
    detail::hessenberg(a, n);
    std::vector<std::complex<double>> wri;
    const int stuck = detail::hqr(a, n, wri, max_sweeps);
    if (stuck < 0) {
        res.values = std::move(wri);
    } else {
        res.converged = false;
        res.unconverged = stuck;
        res.values.assign(wri.begin() + stuck, wri.end());
    }
    return res;
}

}  // namespace iga
