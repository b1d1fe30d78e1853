#pragma once

#include "iga/grid.hpp"
#include "iga/solver.hpp"
#include "iga/sparse.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <iostream>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace iga {

/// The three derivative-collocation matrices. D0 rows hold basis values at
/// each grid point, D1 rows the outward-normal first derivative at boundary
/// points (interior rows are empty), D2 rows the physical Laplacian.
struct CollocationMatrices {
    SparseRowMatrix d0, d1, d2;
    int nu_x = 0, nu_y = 0;
};

namespace detail {

inline void push_row_entry(std::vector<Eigen::Triplet<double>>& out, int row, int col, double v)
{
    if (v != 0.0) out.emplace_back(row, col, v);
}

}  // namespace detail

/// Normal-derivative row of one edge touch as (column, value) pairs; corner
/// rows in D1 average the rows of the touching edges.
inline std::vector<std::pair<int, double>> normal_derivative_row(
    const CollocationGrid& grid, const std::vector<BasisEval>& ex,
    const std::vector<BasisEval>& ey, int point_index, const EdgeTouch& touch)
{
    const auto [i, j] = grid.unflatten(point_index);
    const BasisEval& vx = ex[i];
    const BasisEval& vy = ey[j];
    const double w1 = touch.deriv_weights[0];
    const double w2 = touch.deriv_weights[1];
    std::vector<std::pair<int, double>> row;
    row.reserve(vx.values.size() * vy.values.size());
    for (std::size_t jj = 0; jj < vy.values.size(); ++jj)
        for (std::size_t ii = 0; ii < vx.values.size(); ++ii) {
            const int col = (vy.first_index + static_cast<int>(jj)) * grid.nu_x + vx.first_index + static_cast<int>(ii);
            const double v = w1 * vx.d1[ii] * vy.values[jj] + w2 * vx.values[ii] * vy.d1[jj];
            if (v != 0.0) row.emplace_back(col, v);
        }
    return row;
}

inline std::vector<BasisEval> evaluate_along(const SplineBasis1D& basis, const std::vector<double>& pts)
{
    std::vector<BasisEval> evals;
    evals.reserve(pts.size());
    for (double x : pts) evals.push_back(eval_basis(basis, x, 2));
    return evals;
}

inline CollocationMatrices assemble_collocation(const CollocationGrid& grid,
                                                const SplineBasis1D& basis_x,
                                                const SplineBasis1D& basis_y)
{
    CollocationMatrices cm;
    cm.nu_x = grid.nu_x;
    cm.nu_y = grid.nu_y;
    const int n = grid.size();
    const auto ex = evaluate_along(basis_x, grid.greville_x);
    const auto ey = evaluate_along(basis_y, grid.greville_y);
    const Eigen::Vector3d lc = grid.map.laplacian_coeffs();

    std::vector<Eigen::Triplet<double>> t0, t1, t2;
    const std::size_t estimate = static_cast<std::size_t>(n) * (basis_x.degree() + 1) * (basis_y.degree() + 1);
    t0.reserve(estimate);
    t2.reserve(estimate);

    for (int k = 0; k < n; ++k) {
        const auto [i, j] = grid.unflatten(k);
        const BasisEval& vx = ex[i];
        const BasisEval& vy = ey[j];
        for (std::size_t jj = 0; jj < vy.values.size(); ++jj)
            for (std::size_t ii = 0; ii < vx.values.size(); ++ii) {
                const int col = (vy.first_index + static_cast<int>(jj)) * grid.nu_x + vx.first_index + static_cast<int>(ii);
                detail::push_row_entry(t0, k, col, vx.values[ii] * vy.values[jj]);
                const double lap = lc[0] * vx.d2[ii] * vy.values[jj] +
                                   2.0 * lc[1] * vx.d1[ii] * vy.d1[jj] +
                                   lc[2] * vx.values[ii] * vy.d2[jj];
                detail::push_row_entry(t2, k, col, lap);
            }
        if (!grid.touches[k].empty()) {
            const double wgt = 1.0 / grid.touches[k].size();
            for (const EdgeTouch& touch : grid.touches[k])
                for (const auto& [col, v] : normal_derivative_row(grid, ex, ey, k, touch))
                    t1.emplace_back(k, col, wgt * v);
        }
    }

    auto build = [n](std::vector<Eigen::Triplet<double>>& t) {
        SparseRowMatrix m(n, n);
        m.setFromTriplets(t.begin(), t.end());
        m.prune(0.0, 0.0);  // drop entries that summed to exact zero
        m.makeCompressed();
        return m;
    };
    cm.d0 = build(t0);
    cm.d1 = build(t1);
    cm.d2 = build(t2);
    return cm;
}

/// Newmark time-discretization parameters. gamma = 0.5 gives second order;
/// other values are accepted with a warning.
struct NewmarkParams {
    double dt = 0.1;
    double beta = 0.0;
    double gamma = 0.5;
    double c0 = 1.0;
    double t_end = 0.1;
    long n_steps = 1;
};

inline NewmarkParams make_newmark_params(double dt, double t_end, double beta = 0.0,
                                         double gamma = 0.5, double c0 = 1.0)
{
    if (!(dt > 0.0)) throw std::invalid_argument("NewmarkParams: dt must be positive");
    if (!(t_end > 0.0)) throw std::invalid_argument("NewmarkParams: T must be positive");
    if (beta < 0.0 || gamma < 0.0) throw std::invalid_argument("NewmarkParams: beta and gamma must be >= 0");
    if (!(c0 > 0.0)) throw std::invalid_argument("NewmarkParams: c0 must be positive");
    NewmarkParams p;
    p.dt = dt;
    p.beta = beta;
    p.gamma = gamma;
    p.c0 = c0;
    p.t_end = t_end;
    p.n_steps = std::llround(t_end / dt);
    if (p.n_steps < 1 || std::abs(p.n_steps * dt - t_end) > 1e-12 * t_end)
        throw std::invalid_argument("NewmarkParams: dt does not divide T");
    if (gamma != 0.5)
        std::cerr << "warning: gamma = " << gamma << " drops the Newmark scheme below second order\n";
    return p;
}

/// spectra-only parameter set, no time interval involved
inline NewmarkParams spectral_newmark_params(double dt, double beta, double gamma = 0.5, double c0 = 1.0)
{
    return make_newmark_params(dt, dt, beta, gamma, c0);
}

/// Newmark source-combination weights (beta, 1/2 - 2 beta + gamma,
/// 1/2 + beta - gamma) applied at t_{n+1}, t_n, t_{n-1}.
struct NewmarkWeights {
    double w_next, w_cur, w_prev;
};

inline NewmarkWeights newmark_weights(const NewmarkParams& p)
{
    return {p.beta, 0.5 - 2.0 * p.beta + p.gamma, 0.5 + p.beta - p.gamma};
}

/// The assembled global matrix of the per-step linear system, with one row
/// per collocation point:
///   interior   (1/dt^2) D0 - c0 beta D2
///   Dirichlet  D0
///   Neumann    D1
///   absorbing  D1 + w_ab (gamma / (dt sqrt(c0))) D0
/// where w_ab is 1 on absorbing edges and 1/2 at corners shared with a
/// Neumann edge (row averaging).
struct SystemMatrix {
    SparseRowMatrix matrix;
    RowClassification rows;
    NewmarkParams params;
    long nz = 0;

    const SparseLuSolver& solver() const
    {
        std::call_once(cache_->flag, [this] { cache_->lu = std::make_unique<SparseLuSolver>(matrix); });
        return *cache_->lu;
    }

private:
    struct Cache {
        std::once_flag flag;
        std::unique_ptr<SparseLuSolver> lu;
    };
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

inline SystemMatrix assemble_stiffness(const CollocationMatrices& colloc,
                                       const RowClassification& rows, const NewmarkParams& params)
{
    const int n = static_cast<int>(colloc.d0.rows());
    if (static_cast<int>(rows.kind.size()) != n)
        throw std::invalid_argument("assemble_stiffness: classification size mismatch");

    const double inv_dt2 = 1.0 / (params.dt * params.dt);
    const double abc_coeff = params.gamma / (params.dt * std::sqrt(params.c0));

    std::vector<Eigen::Triplet<double>> tk;
    tk.reserve(colloc.d0.nonZeros() + colloc.d2.nonZeros());
    auto add_scaled_row = [&tk](const SparseRowMatrix& m, int row, double s) {
        if (s == 0.0) return;
        for (SparseRowMatrix::InnerIterator it(m, row); it; ++it)
            tk.emplace_back(row, it.col(), s * it.value());
    };

    for (int k = 0; k < n; ++k) {
        switch (rows.kind[k]) {
            case PointKind::Interior:
                add_scaled_row(colloc.d0, k, inv_dt2);
                add_scaled_row(colloc.d2, k, -params.c0 * params.beta);
                break;
            case PointKind::Dirichlet:
                add_scaled_row(colloc.d0, k, 1.0);
                break;
            case PointKind::Neumann:
                add_scaled_row(colloc.d1, k, 1.0);
                break;
            case PointKind::Absorbing:
                add_scaled_row(colloc.d1, k, 1.0);
                add_scaled_row(colloc.d0, k, rows.abc_weight[k] * abc_coeff);
                break;
        }
    }

    SystemMatrix sys;
    sys.rows = rows;
    sys.params = params;
    sys.matrix = SparseRowMatrix(n, n);
    sys.matrix.setFromTriplets(tk.begin(), tk.end());
    sys.matrix.prune(0.0, 0.0);
    sys.matrix.makeCompressed();
    sys.nz = sys.matrix.nonZeros();
    return sys;
}

inline SystemMatrix assemble_stiffness(const CollocationMatrices& colloc, const CollocationGrid& grid,
                                       const NewmarkParams& params)
{
    return assemble_stiffness(colloc, grid.classification(), params);
}

/// Problem data as evaluable scalar fields. The second time derivatives of
/// the Dirichlet / Neumann data are only needed by the startup acceleration
/// solve; when absent they are one-sided finite differences in t.
struct WaveData {
    using Field = std::function<double(double, double)>;
    using TimeField = std::function<double(double, double, double)>;

    TimeField source = [](double, double, double) { return 0.0; };     // f(x, y, t)
    TimeField dirichlet = [](double, double, double) { return 0.0; };  // Phi
    TimeField neumann = [](double, double, double) { return 0.0; };   // Psi
    Field u0 = [](double, double) { return 0.0; };  // initial pressure
    Field u1 = [](double, double) { return 0.0; };  // initial velocity
    TimeField dirichlet_tt;  // optional analytic d2/dt2 Phi, finite differences when absent
    TimeField neumann_tt;    // optional analytic d2/dt2 Psi

    static WaveData zero() { return WaveData{}; }
};

namespace detail {

/// one-sided second time derivative at t (data may be undefined for t < 0)
inline double time_deriv2(const WaveData::TimeField& f, double x, double y, double t)
{
    const double h = 1e-3;
    return (2.0 * f(x, y, t) - 5.0 * f(x, y, t + h) + 4.0 * f(x, y, t + 2 * h) - f(x, y, t + 3 * h)) / (h * h);
}

}  // namespace detail

/// Right-hand side of the per-step system at time t_{n+1} from the two
/// previous displacement coefficient vectors.
inline Eigen::VectorXd build_rhs(const WaveData& data, const std::vector<Eigen::Vector2d>& points,
                                 const RowClassification& rows, const CollocationMatrices& colloc,
                                 const NewmarkParams& params, const Eigen::VectorXd& u_n,
                                 const Eigen::VectorXd& u_nm1, double t_np1)
{
    const int n = static_cast<int>(points.size());
    const double dt = params.dt;
    const double t_n = t_np1 - dt;
    const double t_nm1 = t_np1 - 2.0 * dt;
    const NewmarkWeights w = newmark_weights(params);

    const Eigen::VectorXd h0 = colloc.d0 * (2.0 * u_n - u_nm1);
    const Eigen::VectorXd h2 = colloc.d2 * (w.w_cur * u_n + w.w_prev * u_nm1);
    const Eigen::VectorXd hab =
        colloc.d0 * ((1.0 - 2.0 * params.gamma) * u_n + (params.gamma - 1.0) * u_nm1);

    Eigen::VectorXd rhs(n);
    const double inv_dt2 = 1.0 / (dt * dt);
    const double abc_scale = -1.0 / (dt * std::sqrt(params.c0));
    for (int k = 0; k < n; ++k) {
        const double x = points[k][0], y = points[k][1];
        switch (rows.kind[k]) {
            case PointKind::Interior:
                rhs[k] = w.w_next * data.source(x, y, t_np1) + w.w_cur * data.source(x, y, t_n) +
                         w.w_prev * data.source(x, y, t_nm1) + inv_dt2 * h0[k] + params.c0 * h2[k];
                break;
            case PointKind::Dirichlet:
                rhs[k] = data.dirichlet(x, y, t_np1);
                break;
            default: {
                const double wab = rows.abc_weight[k];
                rhs[k] = (1.0 - wab) * data.neumann(x, y, t_np1) + wab * abc_scale * hab[k];
            }
        }
    }
    return rhs;
}

inline Eigen::VectorXd build_rhs(const WaveData& data, const CollocationGrid& grid,
                                 const CollocationMatrices& colloc, const NewmarkParams& params,
                                 const Eigen::VectorXd& u_n, const Eigen::VectorXd& u_nm1, double t_np1)
{
    return build_rhs(data, grid.points, grid.classification(), colloc, params, u_n, u_nm1, t_np1);
}

}  // namespace iga
