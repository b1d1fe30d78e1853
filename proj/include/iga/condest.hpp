#pragma once

#include "iga/solver.hpp"
#include "iga/sparse.hpp"

#include <cmath>
#include <limits>

namespace iga {

/// 1-norm condition estimate ||A||_1 * est(||A^{-1}||_1). The inverse norm is
/// estimated by the Hager power method on A^{-1} (solves with A and A^T
/// against sign vectors, at most 5 iterations) plus the alternating-sign
/// safeguard vector. The estimate never exceeds the true condition number
/// (up to solve roundoff) and is typically within a small factor below it.
/// Singular matrices report infinity.
inline double cond_estimate_1norm(const SparseRowMatrix& a)
{
    const int n = static_cast<int>(a.rows());
    if (n == 0) return 1.0;
    const SparseLuSolver lu(a);
    if (lu.singular()) return std::numeric_limits<double>::infinity();
    const double norm_a = one_norm(a);

    Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / n);
    double est = 0.0;
    int last_j = -1;
    for (int iter = 0; iter < 5; ++iter) {
        const Eigen::VectorXd y = lu.solve(x);
        const double est_new = y.lpNorm<1>();
        if (iter > 0 && est_new <= est) break;
        est = est_new;
        Eigen::VectorXd xi(n);
        for (int i = 0; i < n; ++i) xi[i] = y[i] >= 0.0 ? 1.0 : -1.0;
        const Eigen::VectorXd z = lu.solve_transpose(xi);
        int j = 0;
        double zmax = std::abs(z[0]);
        for (int i = 1; i < n; ++i)
            if (std::abs(z[i]) > zmax) {
                zmax = std::abs(z[i]);
                j = i;
            }
        if (iter > 0 && (zmax <= z.dot(x) || j == last_j)) break;
        last_j = j;
        x.setZero();
        x[j] = 1.0;
    }

    // safeguard against the power method stalling on an unlucky start
    Eigen::VectorXd xt(n);
    for (int i = 0; i < n; ++i) {
        const double mag = 1.0 + static_cast<double>(i) / std::max(1, n - 1);
        xt[i] = (i % 2 == 0) ? mag : -mag;
    }
    const double est2 = 2.0 * lu.solve(xt).lpNorm<1>() / (3.0 * n);
    return norm_a * std::max(est, est2);
}

}  // namespace iga
